// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "dkc/driver.hpp"

using namespace dkc;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double sign_of(int r) { return r % 2 == 0 ? 1.0 : -1.0; }

Outcome structural() {
  const auto t0 = Clock::now();
  const LatticeSpec lat = LatticeSpec::periodic(3, 3, 3, 3);
  Rng rng(1001);
  double dd = 0, ss = 0, hh = 0, routes = 0, io = 0;
  for (int t = 0; t < 100; ++t)
    for (int r = 0; r <= kDim; ++r) {
      const Form w = Form::random(lat, r, Copy::plain, rng);
      const Form dw = coboundary(w);
      const Form sw = codifferential(w);
      dd = std::max(dd, coboundary(dw).max_abs());
      ss = std::max(ss, codifferential(sw).max_abs());
      Form h = hodge(hodge(w));
      h -= -sign_of(r) * w;
      hh = std::max(hh, h.max_abs());
      routes = std::max({routes, (sw - codifferential_via_star(w)).max_abs(), (sw - codifferential_via_inverse(w)).max_abs()});
      io = std::max({io, (iota(iota(w)) - w).max_abs(), (iota(hodge(w)) - hodge(iota(w))).max_abs(),
                     (iota(dw) - coboundary(iota(w))).max_abs(), (iota(sw) - codifferential(iota(w))).max_abs()});
    }
  const double worst = std::max({dd, ss, hh, routes, io});
  const double secs = seconds_since(t0);
  return {worst <= 1e-12 && secs <= 60.0,
          fmt("dd %.2e, delta delta %.2e, ** %.2e, delta routes %.2e, iota %.2e (tol 1e-12); %.1f s (limit 60 s)", dd,
              ss, hh, routes, io, secs)};
}

Outcome leibniz() {
  const LatticeSpec lat = LatticeSpec::periodic(3, 3, 3, 3);
  Rng rng(1002);
  double worst = 0;
  for (int r = 0; r <= kDim; ++r)
    for (int q = 0; r + q <= kDim; ++q)
      for (int t = 0; t < 20; ++t) {
        const Form phi = Form::random(lat, r, Copy::plain, rng);
        const Form psi = Form::random(lat, q, Copy::plain, rng);
        Form diff = coboundary(cup(phi, psi)) - cup(coboundary(phi), psi);
        diff -= sign_of(r) * cup(phi, coboundary(psi));
        worst = std::max(worst, diff.max_abs());
      }
  return {worst <= 1e-12, fmt("max residual %.2e over 15 degree pairs x 20 (tol 1e-12)", worst)};
}

Outcome green() {
  Rng rng(1003);
  const LatticeSpec ghost = LatticeSpec::ghost({2, 2, 2, 2});
  const DoubleChain dv = boundary_double(build_double_volume(ghost), ghost);
  double three_term = 0;
  for (int r = 1; r <= kDim; ++r)
    for (int t = 0; t < 50; ++t) {
      const Form phi = Form::random(ghost, r - 1, Copy::plain, rng);
      const Form w = Form::random(ghost, r, Copy::plain, rng);
      three_term = std::max(three_term, std::abs(green_terms(phi, w, dv).residual()));
    }
  const LatticeSpec periodic = LatticeSpec::periodic(3, 3, 3, 3);
  double adjoint = 0;
  for (int r = 1; r <= kDim; ++r)
    for (int t = 0; t < 50; ++t) {
      const Form phi = Form::random(periodic, r - 1, Copy::plain, rng);
      const Form w = Form::random(periodic, r, Copy::plain, rng);
      adjoint = std::max(adjoint, std::abs(inner_product(coboundary(phi), w) - inner_product(phi, codifferential(w))));
    }
  return {three_term <= 1e-12 && adjoint <= 1e-12,
          fmt("ghost 2^4 three-term residual %.2e (tol 1e-12); periodic 3^4 |(d phi,w)_V - (phi,delta w)_V| %.2e "
              "(tol 1e-12)",
              three_term, adjoint)};
}

Outcome inner_product_oracle() {
  Rng rng(1004);
  double worst = 0;
  bool mismatched_zero = true;
  for (const LatticeSpec& lat : {LatticeSpec::periodic(3, 3, 3, 3), LatticeSpec::ghost({2, 2, 2, 2})}) {
    const DoubleChain vol = build_double_volume(lat);
    for (int r = 0; r <= kDim; ++r)
      for (int q = 0; q <= kDim; ++q)
        for (int t = 0; t < 5; ++t) {
          const Form phi = Form::random(lat, r, Copy::plain, rng);
          const Form w = Form::random(lat, q, Copy::plain, rng);
          const complex direct = inner_product(phi, w);
          const complex paired = pair_double(vol, phi, hodge(w.conj()));
          if (r != q) mismatched_zero = mismatched_zero && direct == complex{} && paired == complex{};
          worst = std::max(worst, std::abs(direct - paired));
        }
  }
  return {worst <= 1e-12 && mismatched_zero,
          fmt("max |direct - pairing| %.2e (tol 1e-12); mismatched degrees exactly zero: %s", worst,
              mismatched_zero ? "yes" : "no")};
}

Outcome chirality_algebra() {
  const LatticeSpec lat = LatticeSpec::periodic(3, 3, 3, 3);
  Rng rng(1005);
  double inv = 0, anti = 0, proj = 0;
  for (int t = 0; t < 100; ++t) {
    const InhomogeneousForm w = InhomogeneousForm::random(lat, Copy::plain, rng);
    inv = std::max(inv, (chiral_star(chiral_star(w)) - w).max_abs());
    InhomogeneousForm a = chiral_star(coboundary(w) + codifferential(w));
    const InhomogeneousForm sw = chiral_star(w);
    a += coboundary(sw) + codifferential(sw);
    anti = std::max(anti, a.max_abs());
    const auto [plus, minus] = chiral_project(w);
    const auto pp = chiral_project(plus);
    const auto pm = chiral_project(minus);
    proj = std::max({proj, (pp.plus - plus).max_abs(), pp.minus.max_abs(), (pm.minus - minus).max_abs(),
                     pm.plus.max_abs(), (plus + minus - w).max_abs()});
  }
  const double worst = std::max({inv, anti, proj});
  return {worst <= 1e-12,
          fmt("star star - I %.2e, star D + D star %.2e, projectors %.2e (tol 1e-12)", inv, anti, proj)};
}

const LatticeSpec k2 = LatticeSpec::periodic(2, 2, 2, 2);

Outcome massless() {
  const auto recs = certify_massless(k2);
  double worst = 0;
  for (const auto& r : recs) worst = std::max({worst, r.plus_residual, r.minus_residual});
  return {!recs.empty() && worst <= 1e-10,
          fmt("%zu kernel vectors, max ||D w+||, ||D w-|| %.2e (tol 1e-10)", recs.size(), worst)};
}

Outcome chirality_flip() {
  const auto recs = certify_flip(k2);
  double worst = 0;
  for (const auto& r : recs) worst = std::max({worst, r.flip.plus_to_minus, r.flip.minus_to_plus});
  return {!recs.empty() && worst <= 1e-9,
          fmt("%zu real positive eigenpairs, max flip residual %.2e (tol 1e-9)", recs.size(), worst)};
}

Outcome triviality() {
  std::vector<double> masses{0.5, 1.0, 2.0};
  const auto pos = real_positive_eigenvalues(eigenvalues(assemble(k2, OperatorKind::dirac_kahler).dense()));
  masses.insert(masses.end(), pos.begin(), pos.end());
  double smallest = HUGE_VAL;
  for (const auto& r : certify_prop33(k2, masses)) smallest = std::min({smallest, r.sigma_self_dual, r.sigma_anti_self_dual});
  return {smallest > 1e-8, fmt("%zu masses (%zu eigenvalues), min sigma %.3e (must exceed 1e-8)", masses.size(),
                               pos.size(), smallest)};
}

Outcome spectral() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  for (const LatticeSpec& lat : {k2, LatticeSpec::periodic(3, 2, 2, 2)}) {
    const auto ev = eigenvalues(assemble(lat, OperatorKind::dirac_kahler).dense());
    const SpectrumMatch m = match_spectra(ev, symbol_spectrum(lat));
    ok = ok && m.multiplicities_agree && m.max_deviation <= 1e-9;
    detail += fmt("%zu sites: multiplicities %s, deviation %.2e; ", lat.volume_sites(),
                  m.multiplicities_agree ? "agree" : "differ", m.max_deviation);
  }
  const double secs = seconds_since(t0);
  return {ok && secs <= 300.0, detail + fmt("tol 1e-9; %.1f s (limit 300 s)", secs)};
}

Outcome determinism() {
  const RunConfig cfg;
  const std::string a = strip_runtime(cmd_verify(cfg).to_json()).dump(2);
  const std::string b = strip_runtime(cmd_verify(cfg).to_json()).dump(2);
  return {a == b, fmt("two default verify reports (%zu bytes) %s", a.size(), a == b ? "identical" : "differ")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"structural identities", structural},
      {"Leibniz rule", leibniz},
      {"Green formula and periodic adjointness", green},
      {"inner-product cross-oracle", inner_product_oracle},
      {"chirality algebra", chirality_algebra},
      {"massless chiral invariance", massless},
      {"chirality flip", chirality_flip},
      {"massive triviality", triviality},
      {"spectral consistency", spectral},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  return failed == 0 ? 0 : 1;
}
