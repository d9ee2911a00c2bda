#ifndef DKC_VERIFY_HPP
#define DKC_VERIFY_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "dkc/calculus.hpp"
#include "dkc/chain.hpp"
#include "dkc/dirac_kahler.hpp"
#include "dkc/report.hpp"
#include "dkc/spectral.hpp"

namespace dkc {

/// Fixed thresholds of the spectral certifications.
inline constexpr double kKernelTol = 1e-10;
inline constexpr double kFlipTol = 1e-9;

/// Random chain of `terms` cells of one degree and copy inside the volume,
/// with nonzero integer coefficients in [-3, 3].
inline Chain random_chain(const LatticeSpec& lattice, int degree, Copy copy, int terms, Rng& rng) {
  Chain c;
  for (int t = 0; t < terms; ++t) {
    SiteIndex s;
    for (int a = 0; a < kDim; ++a) s[a] = 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(lattice.extent(a)));
    const int rank = static_cast<int>(rng.next() % static_cast<std::uint64_t>(binomial4(degree)));
    int coeff = static_cast<int>(rng.next() % 6) - 3;
    if (coeff >= 0) ++coeff;
    c.add({s, DirectionSet::from_rank(degree, rank), copy}, coeff);
  }
  return c;
}

inline double max_abs(const Chain& c) {
  double m = 0.0;
  for (const auto& [b, v] : c.terms()) m = std::max(m, std::abs(v));
  return m;
}

inline InhomogeneousForm embed(const Form& w) {
  InhomogeneousForm out(w.lattice(), w.copy());
  out[w.degree()] = w;
  return out;
}

inline InhomogeneousForm constant_form(const LatticeSpec& lattice, Rng& rng) {
  InhomogeneousForm w(lattice);
  std::array<complex, kChannels> value{};
  for (auto& v : value) v = rng.uniform_complex();
  for (std::size_t s = 0; s < lattice.storage_sites(); ++s)
    for (int ch = 0; ch < kChannels; ++ch) w.channel(s, ch) = value[static_cast<std::size_t>(ch)];
  return w;
}

struct SuiteOptions {
  int trials = 20;
  double tol = 1e-12;
  double mass = 1.0;
};

/// Chain-level identities: sign tables, boundary, combinatorial star,
/// pairing, volume closure.
inline void run_complex_core_suite(Report& report, const LatticeSpec& periodic, Rng& rng, const SuiteOptions& opt) {
  report.timed("core.levi_civita_product", "eps(S) eps'(S) = (-1)^|S| for all 16 direction sets", 0.0, [] {
    double worst = 0.0;
    for (int ch = 0; ch < kChannels; ++ch) {
      const DirectionSet d = channel_dirs(ch);
      worst = std::max(worst, std::abs(levi_civita(d) * levi_civita_prime(d) - (d.degree() % 2 ? -1 : 1)) * 1.0);
    }
    return worst;
  });

  report.timed("core.boundary_nilpotent", "boundary(boundary(a)) = 0", 0.0, [&] {
    double worst = 0.0;
    for (int t = 0; t < opt.trials; ++t)
      for (int r = 2; r <= kDim; ++r)
        for (Copy c : {Copy::plain, Copy::tilde}) {
          const Chain a = random_chain(periodic, r, c, 8, rng);
          worst = std::max(worst, max_abs(boundary(boundary(a, periodic), periodic)));
        }
    return worst;
  });

  report.timed("core.star_c_involution", "star_c(star_c(a)) = (-1)^r a", 0.0, [&] {
    double worst = 0.0;
    for (int t = 0; t < opt.trials; ++t)
      for (int r = 0; r <= kDim; ++r) {
        const Chain a = random_chain(periodic, r, Copy::plain, 8, rng);
        Chain diff = star_c(star_c(a));
        diff += (r % 2 == 0 ? -1.0 : 1.0) * a;
        worst = std::max(worst, max_abs(diff));
      }
    return worst;
  });

  report.timed("core.star_pairing", "<s~, *w> = (-1)^r Q <star_c s~, w> per tilde basis cell, Q = time sign of the form slot",
               opt.tol, [&] {
                 double worst = 0.0;
                 for (int r = 0; r <= kDim; ++r) {
                   const Form w = Form::random(periodic, kDim - r, Copy::plain, rng);
                   const Form star_w = hodge(w);
                   periodic.for_each_volume_site([&](const SiteIndex& k) {
                     for (int rank = 0; rank < binomial4(r); ++rank) {
                       const DirectionSet S = DirectionSet::from_rank(r, rank);
                       const Chain cell({k, S, Copy::tilde}, 1.0);
                       const complex lhs = pair(cell, star_w);
                       const complex rhs = (r % 2 == 0 ? 1.0 : -1.0) * time_sign(S.complement()) * pair(star_c(cell), w);
                       worst = std::max(worst, std::abs(lhs - rhs));
                     }
                   });
                 }
                 return worst;
               });

  report.timed("core.pair_adjoint", "<boundary(a), w> = <a, d^c w>", opt.tol, [&] {
    double worst = 0.0;
    for (int t = 0; t < opt.trials; ++t)
      for (int r = 1; r <= kDim; ++r) {
        const Chain a = random_chain(periodic, r, Copy::plain, 8, rng);
        const Form w = Form::random(periodic, r - 1, Copy::plain, rng);
        worst = std::max(worst, std::abs(pair(boundary(a, periodic), w) - pair(a, coboundary(w))));
      }
    return worst;
  });

  report.timed("core.pair_bilinear", "pairing is bilinear and vanishes across degrees", opt.tol, [&] {
    double worst = 0.0;
    for (int t = 0; t < opt.trials; ++t)
      for (int r = 0; r <= kDim; ++r) {
        const Chain a = random_chain(periodic, r, Copy::plain, 6, rng);
        const Chain b = random_chain(periodic, r, Copy::plain, 6, rng);
        const Form w = Form::random(periodic, r, Copy::plain, rng);
        const Form v = Form::random(periodic, r, Copy::plain, rng);
        const complex alpha = rng.uniform_complex();
        worst = std::max(worst, std::abs(pair(2.0 * a + b, w) - 2.0 * pair(a, w) - pair(b, w)));
        worst = std::max(worst, std::abs(pair(a, w + alpha * v) - pair(a, w) - alpha * pair(a, v)));
        const Form other = Form::random(periodic, (r + 1) % (kDim + 1), Copy::plain, rng);
        worst = std::max(worst, std::abs(pair(a, other)));
      }
    return worst;
  });

  report.timed("core.periodic_volume_closed", "boundary(V) = 0 on a periodic lattice", 0.0,
               [&] { return max_abs(boundary(build_volume(periodic), periodic)); });
}

/// Identities of the form calculus on random forms.
inline void run_calculus_suite(Report& report, const LatticeSpec& periodic, const LatticeSpec& ghost, Rng& rng,
                               const SuiteOptions& opt) {
  report.timed("calc.coboundary_nilpotent", "d^c d^c = 0 on every degree", opt.tol, [&] {
    double worst = 0.0;
    for (int t = 0; t < opt.trials; ++t)
      for (int r = 0; r <= kDim; ++r)
        worst = std::max(worst, coboundary(coboundary(Form::random(periodic, r, Copy::plain, rng))).max_abs());
    return worst;
  });

  report.timed("calc.codifferential_nilpotent", "delta^c delta^c = 0 on every degree", opt.tol, [&] {
    double worst = 0.0;
    for (int t = 0; t < opt.trials; ++t)
      for (int r = 0; r <= kDim; ++r)
        worst = std::max(worst, codifferential(codifferential(Form::random(periodic, r, Copy::plain, rng))).max_abs());
    return worst;
  });

  report.timed("calc.hodge_square", "** = (-1)^(r+1) on degree r", opt.tol, [&] {
    double worst = 0.0;
    for (int t = 0; t < opt.trials; ++t)
      for (int r = 0; r <= kDim; ++r) {
        const Form w = Form::random(periodic, r, Copy::plain, rng);
        Form diff = hodge(hodge(w));
        diff -= (r % 2 == 0 ? -1.0 : 1.0) * w;
        worst = std::max(worst, diff.max_abs());
      }
    return worst;
  });

  report.timed("calc.codifferential_routes", "delta^c stencils = * d^c * = (-1)^r *^-1 d^c *", opt.tol, [&] {
    double worst = 0.0;
    for (int t = 0; t < opt.trials; ++t)
      for (int r = 0; r <= kDim; ++r) {
        const Form w = Form::random(periodic, r, Copy::plain, rng);
        const Form s = codifferential(w);
        worst = std::max(worst, (s - codifferential_via_star(w)).max_abs());
        worst = std::max(worst, (s - codifferential_via_inverse(w)).max_abs());
      }
    return worst;
  });

  report.timed("calc.leibniz", "d^c(phi cup psi) = d^c phi cup psi + (-1)^r phi cup d^c psi", opt.tol, [&] {
    double worst = 0.0;
    for (int t = 0; t < opt.trials; ++t)
      for (int r = 0; r <= kDim; ++r)
        for (int q = 0; r + q <= kDim; ++q) {
          const Form phi = Form::random(periodic, r, Copy::plain, rng);
          const Form psi = Form::random(periodic, q, Copy::plain, rng);
          Form diff = coboundary(cup(phi, psi));
          diff -= cup(coboundary(phi), psi);
          diff -= (r % 2 == 0 ? 1.0 : -1.0) * cup(phi, coboundary(psi));
          worst = std::max(worst, diff.max_abs());
        }
    return worst;
  });

  report.timed("calc.inner_product_oracle", "(phi, w)_V = <VV, phi (x) *conj(w)>; zero across degrees", opt.tol, [&] {
    const DoubleChain vol = build_double_volume(periodic);
    double worst = 0.0;
    for (int t = 0; t < opt.trials; ++t)
      for (int r = 0; r <= kDim; ++r)
        for (int q = 0; q <= kDim; ++q) {
          const Form phi = Form::random(periodic, r, Copy::plain, rng);
          const Form w = Form::random(periodic, q, Copy::plain, rng);
          const complex direct = inner_product(phi, w);
          if (r != q && direct != complex{}) return HUGE_VAL;
          worst = std::max(worst, std::abs(direct - pair_double(vol, phi, hodge(w.conj()))));
        }
    return worst;
  });

  report.timed("calc.iota_commutation", "iota^2 = I, iota * = * iota, iota d^c = d^c iota, iota delta^c = delta^c iota",
               opt.tol, [&] {
                 double worst = 0.0;
                 auto dev = [](const Form& a, const Form& b) {
                   return a.copy() != b.copy() ? HUGE_VAL : (a - b).max_abs();
                 };
                 for (int t = 0; t < opt.trials; ++t)
                   for (int r = 0; r <= kDim; ++r) {
                     const Form w = Form::random(periodic, r, Copy::plain, rng);
                     worst = std::max(worst, dev(iota(iota(w)), w));
                     worst = std::max(worst, dev(iota(hodge(w)), hodge(iota(w))));
                     worst = std::max(worst, dev(iota(coboundary(w)), coboundary(iota(w))));
                     worst = std::max(worst, dev(iota(codifferential(w)), codifferential(iota(w))));
                   }
                 return worst;
               });

  report.timed("calc.laplacian_factorisations", "-(d delta + delta d) = (d - delta)^2 = (i(d + delta))^2", opt.tol, [&] {
    double worst = 0.0;
    for (int t = 0; t < opt.trials; ++t)
      for (int r = 0; r <= kDim; ++r) {
        const Form w = Form::random(periodic, r, Copy::plain, rng);
        const Form lap = laplacian(w);
        const InhomogeneousForm e = embed(w);
        const InhomogeneousForm first = coboundary(e) - codifferential(e);
        const InhomogeneousForm sq = coboundary(first) - codifferential(first);
        const InhomogeneousForm dk2 = dk_operator(dk_operator(e));
        for (int q = 0; q <= kDim; ++q) {
          const Form expected = q == r ? lap : Form(periodic, q);
          worst = std::max(worst, (sq[q] - expected).max_abs());
          worst = std::max(worst, (dk2[q] - expected).max_abs());
        }
      }
    return worst;
  });

  report.timed("calc.green_formula_ghost", "(d^c phi, w)_V = <dVV, phi (x) *conj(w)> + (phi, delta^c w)_V, ghost lattice",
               opt.tol, [&] {
                 const DoubleChain dvol = boundary_double(build_double_volume(ghost), ghost);
                 double worst = 0.0;
                 for (int t = 0; t < opt.trials; ++t)
                   for (int r = 1; r <= kDim; ++r) {
                     const Form phi = Form::random(ghost, r - 1, Copy::plain, rng);
                     const Form w = Form::random(ghost, r, Copy::plain, rng);
                     worst = std::max(worst, std::abs(green_terms(phi, w, dvol).residual()));
                   }
                 return worst;
               });

  report.timed("calc.green_formula_periodic",
               "(d^c phi, w)_V = <dVV, phi (x) *conj(w)> + (phi, delta^c w)_V, periodic lattice", opt.tol, [&] {
                 const DoubleChain dvol = boundary_double(build_double_volume(periodic), periodic);
                 double worst = 0.0;
                 for (int t = 0; t < opt.trials; ++t)
                   for (int r = 1; r <= kDim; ++r) {
                     const Form phi = Form::random(periodic, r - 1, Copy::plain, rng);
                     const Form w = Form::random(periodic, r, Copy::plain, rng);
                     worst = std::max(worst, std::abs(green_terms(phi, w, dvol).residual()));
                   }
                 return worst;
               });
}

/// Chirality structure of the Dirac-Kahler operator. `small` is the periodic
/// lattice used for the dense rank test.
inline void run_dirac_kahler_suite(Report& report, const LatticeSpec& periodic, const LatticeSpec& small, Rng& rng,
                                   const SuiteOptions& opt) {
  report.timed("dk.star_involution", "chiral star twice is the identity", opt.tol, [&] {
    double worst = 0.0;
    for (int t = 0; t < opt.trials; ++t) {
      const InhomogeneousForm w = InhomogeneousForm::random(periodic, Copy::plain, rng);
      worst = std::max(worst, (chiral_star(chiral_star(w)) - w).max_abs());
    }
    return worst;
  });

  report.timed("dk.anticommutation", "star D + D star = 0, D = d^c + delta^c", opt.tol, [&] {
    double worst = 0.0;
    for (int t = 0; t < opt.trials; ++t) {
      const InhomogeneousForm w = InhomogeneousForm::random(periodic, Copy::plain, rng);
      const InhomogeneousForm dw = coboundary(w) + codifferential(w);
      const InhomogeneousForm sw = chiral_star(w);
      worst = std::max(worst, (chiral_star(dw) + (coboundary(sw) + codifferential(sw))).max_abs());
    }
    return worst;
  });

  report.timed("dk.projectors", "(iota star)^2 = I; P+ and P- idempotent, complementary, commute with iota star",
               opt.tol, [&] {
                 double worst = 0.0;
                 for (int t = 0; t < opt.trials; ++t) {
                   const InhomogeneousForm w = InhomogeneousForm::random(periodic, Copy::plain, rng);
                   const ChiralComponents p = chiral_project(w);
                   worst = std::max(worst, (dual_map(dual_map(w)) - w).max_abs());
                   worst = std::max(worst, (p.plus + p.minus - w).max_abs());
                   worst = std::max(worst, (chiral_project(p.plus).plus - p.plus).max_abs());
                   worst = std::max(worst, (chiral_project(p.minus).minus - p.minus).max_abs());
                   worst = std::max(worst, chiral_project(p.plus).minus.max_abs());
                   worst = std::max(worst, chiral_project(p.minus).plus.max_abs());
                   worst = std::max(worst, (chiral_project(dual_map(w)).plus - dual_map(p.plus)).max_abs());
                 }
                 return worst;
               });

  report.timed("dk.chiral_invariance", "D w = 0 implies D w+ = D w- = 0 (D P+ = P- D on random w, constants in kernel)",
               opt.tol, [&] {
                 double worst = 0.0;
                 for (int t = 0; t < opt.trials; ++t) {
                   const InhomogeneousForm w = InhomogeneousForm::random(periodic, Copy::plain, rng);
                   const ChiralComponents p = chiral_project(w);
                   const ChiralComponents dp = chiral_project(dk_operator(w));
                   worst = std::max(worst, (dk_operator(p.plus) - dp.minus).max_abs());
                   worst = std::max(worst, (dk_operator(p.minus) - dp.plus).max_abs());
                   const ChiralComponents c = chiral_project(constant_form(periodic, rng));
                   worst = std::max(worst, dk_operator(c.plus).max_abs());
                   worst = std::max(worst, dk_operator(c.minus).max_abs());
                 }
                 return worst;
               });

  report.timed("dk.chirality_flip", "||D w+ - m w-||, ||D w- - m w+|| bounded by ||D w - m w||", opt.tol, [&] {
    double worst = 0.0;
    const Mass m(opt.mass);
    for (int t = 0; t < opt.trials; ++t) {
      const InhomogeneousForm w = InhomogeneousForm::random(periodic, Copy::plain, rng);
      const double base = dk_residual(w, m);
      const FlipResiduals f = chirality_flip_check(w, m);
      worst = std::max(worst, (std::max(f.plus_to_minus, f.minus_to_plus) - base) / std::max(base, 1.0));
    }
    return std::max(worst, 0.0);
  });

  report.timed("dk.massive_triviality",
               "smallest singular value of [D - m; I -/+ iota star] for m in {0.5, 1, 2} and real positive eigenvalues",
               kFullRankThreshold,
               [&] {
                 std::vector<double> masses{0.5, 1.0, 2.0};
                 const auto extra =
                     real_positive_eigenvalues(eigenvalues(assemble(small, OperatorKind::dirac_kahler).dense()));
                 masses.insert(masses.end(), extra.begin(), extra.end());
                 double worst = HUGE_VAL;
                 for (const StackedRecord& rec : certify_prop33(small, masses))
                   worst = std::min({worst, rec.sigma_self_dual, rec.sigma_anti_self_dual});
                 return worst;
               },
               Comparison::greater_than);
}

}  // namespace dkc

#endif  // DKC_VERIFY_HPP
