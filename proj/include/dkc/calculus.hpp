#ifndef DKC_CALCULUS_HPP
#define DKC_CALCULUS_HPP

#include <array>
#include <complex>
#include <span>
#include <stdexcept>

#include "dkc/chain.hpp"
#include "dkc/form.hpp"
#include "dkc/lattice.hpp"

namespace dkc {

namespace detail {

inline void require_same_lattice(const Form& a, const Form& b) {
  if (!(a.lattice() == b.lattice())) throw std::invalid_argument("forms live on different lattices");
}

// All forward neighbours of a storage site, or false if one leaves ghost storage.
inline bool forward_neighbours(const LatticeSpec& lat, std::size_t rank, std::array<std::size_t, 4>& nb) {
  for (int a = 0; a < kDim; ++a) {
    nb[static_cast<std::size_t>(a)] = lat.neighbour_rank(rank, a);
    if (nb[static_cast<std::size_t>(a)] == LatticeSpec::npos) return false;
  }
  return true;
}

}  // namespace detail

/// Forward difference of every channel along `axis`. Sites whose neighbour
/// falls outside ghost storage are left at zero.
inline Form difference(const Form& w, int axis) {
  if (axis < 0 || axis >= kDim) throw std::invalid_argument("axis out of range");
  const LatticeSpec& lat = w.lattice();
  Form out(lat, w.degree(), w.copy());
  for (std::size_t s = 0; s < lat.storage_sites(); ++s) {
    const std::size_t n = lat.neighbour_rank(s, axis);
    if (n == LatticeSpec::npos) continue;
    for (int c = 0; c < w.channels(); ++c) out.at(s, c) = w.at(n, c) - w.at(s, c);
  }
  return out;
}

/// Coboundary d^c: (d w)_S = sum_{j in S} (-1)^{pos(j,S)} Delta_j w_{S\j}.
/// Degree 4 maps to the zero 4-form.
inline Form coboundary(const Form& w) {
  const LatticeSpec& lat = w.lattice();
  if (w.degree() == kDim) return Form(lat, kDim, w.copy());
  const int out_degree = w.degree() + 1;
  Form out(lat, out_degree, w.copy());
  std::array<std::size_t, 4> nb{};
  for (std::size_t s = 0; s < lat.storage_sites(); ++s) {
    if (!detail::forward_neighbours(lat, s, nb)) continue;
    for (int rank = 0; rank < binomial4(out_degree); ++rank) {
      const DirectionSet S = DirectionSet::from_rank(out_degree, rank);
      complex acc{};
      for (int j = 0; j < kDim; ++j) {
        if (!S.contains(j)) continue;
        const int in_rank = S.without(j).rank();
        const complex diff = w.at(nb[static_cast<std::size_t>(j)], in_rank) - w.at(s, in_rank);
        acc += (S.position(j) % 2 == 0) ? diff : -diff;
      }
      out.at(s, rank) = acc;
    }
  }
  return out;
}

/// Koszul sign of the cup product of basis cochains on disjoint slot sets
/// `first` and `second`: (-1)^{#{(i in first, j in second) : i > j}}.
///
/// This is the single place fixing the tensor-extension sign of the cup
/// product; the Leibniz tests depend on it.
constexpr int cup_interchange_sign(DirectionSet first, DirectionSet second) noexcept {
  return concat_parity(first, second);
}

/// Cup product. In each slot x.x = x, e.x(shifted) = e, x.e = e, so the
/// second factor is read at k shifted once along every edge axis of the first.
inline Form cup(const Form& phi, const Form& psi) {
  detail::require_same_lattice(phi, psi);
  if (phi.copy() != psi.copy()) throw std::domain_error("cup product requires forms on the same copy");
  const LatticeSpec& lat = phi.lattice();
  const int r = phi.degree();
  const int q = psi.degree();
  if (r + q > kDim) return Form(lat, kDim, phi.copy());
  Form out(lat, r + q, phi.copy());
  for (std::size_t s = 0; s < lat.storage_sites(); ++s) {
    for (int rank = 0; rank < binomial4(r + q); ++rank) {
      const DirectionSet U = DirectionSet::from_rank(r + q, rank);
      complex acc{};
      bool defined = true;
      for (int phi_rank = 0; phi_rank < binomial4(r) && defined; ++phi_rank) {
        const DirectionSet S = DirectionSet::from_rank(r, phi_rank);
        if ((S.mask() & ~U.mask()) != 0) continue;
        const DirectionSet T = DirectionSet::from_mask(U.mask() & ~S.mask());
        std::size_t t = s;
        for (int a = 0; a < kDim && defined; ++a) {
          if (!S.contains(a)) continue;
          t = lat.neighbour_rank(t, a);
          defined = t != LatticeSpec::npos;
        }
        if (!defined) break;
        acc += static_cast<double>(cup_interchange_sign(S, T)) * phi.at(s, phi_rank) * psi.at(t, T.rank());
      }
      out.at(s, rank) = defined ? acc : complex{};
    }
  }
  return out;
}

/// Hodge star K^r -> K~^{4-r}: channel S goes to complement(S) with sign
/// time_sign(S) * levi_civita(S); no site shift.
inline Form hodge(const Form& w) {
  const int r = w.degree();
  Form out(w.lattice(), kDim - r, flip(w.copy()));
  std::array<int, 6> target{};
  std::array<double, 6> sign{};
  for (int rank = 0; rank < binomial4(r); ++rank) {
    const DirectionSet S = DirectionSet::from_rank(r, rank);
    target[static_cast<std::size_t>(rank)] = S.complement().rank();
    sign[static_cast<std::size_t>(rank)] = time_sign(S) * levi_civita(S);
  }
  for (std::size_t s = 0; s < w.lattice().storage_sites(); ++s)
    for (int rank = 0; rank < binomial4(r); ++rank)
      out.at(s, target[static_cast<std::size_t>(rank)]) = sign[static_cast<std::size_t>(rank)] * w.at(s, rank);
  return out;
}

/// Inverse Hodge star: on a degree-q form it equals (-1)^{q+1} hodge.
inline Form hodge_inverse(const Form& w) {
  Form out = hodge(w);
  if (w.degree() % 2 == 0) out *= -1.0;
  return out;
}

/// Copy swap with unchanged coefficients.
inline Form iota(const Form& w) { return w.with_copy(flip(w.copy())); }

/// Lorentz inner product (phi, w)_V = sum over the volume of
/// time_sign(S) phi_S conj(w_S); zero for forms of different degree.
inline complex inner_product(const Form& phi, const Form& w) {
  detail::require_same_lattice(phi, w);
  if (phi.copy() != w.copy()) throw std::domain_error("inner product requires forms on the same copy");
  if (phi.degree() != w.degree()) return {};
  const LatticeSpec& lat = phi.lattice();
  std::array<double, 6> sign{};
  for (int rank = 0; rank < phi.channels(); ++rank)
    sign[static_cast<std::size_t>(rank)] = time_sign(DirectionSet::from_rank(phi.degree(), rank));
  complex acc{};
  lat.for_each_volume_site([&](const SiteIndex& k) {
    const std::size_t s = lat.site_rank(k);
    for (int rank = 0; rank < phi.channels(); ++rank)
      acc += sign[static_cast<std::size_t>(rank)] * phi.at(s, rank) * std::conj(w.at(s, rank));
  });
  return acc;
}

/// One term of a codifferential stencil: out_channel += sign * Delta_axis in_channel.
struct StencilTerm {
  DirectionSet out;
  int axis;
  DirectionSet in;
  int sign;
};

namespace detail {

constexpr DirectionSet ds(std::initializer_list<int> a) { return DirectionSet::of(a); }

// delta^c on 1-forms
inline constexpr std::array<StencilTerm, 4> kCodiff1{{
    {ds({}), 0, ds({0}), +1},
    {ds({}), 1, ds({1}), -1},
    {ds({}), 2, ds({2}), -1},
    {ds({}), 3, ds({3}), -1},
}};

// delta^c on 2-forms
inline constexpr std::array<StencilTerm, 12> kCodiff2{{
    {ds({0}), 1, ds({0, 1}), +1}, {ds({0}), 2, ds({0, 2}), +1}, {ds({0}), 3, ds({0, 3}), +1},
    {ds({1}), 0, ds({0, 1}), +1}, {ds({1}), 2, ds({1, 2}), +1}, {ds({1}), 3, ds({1, 3}), +1},
    {ds({2}), 0, ds({0, 2}), +1}, {ds({2}), 1, ds({1, 2}), -1}, {ds({2}), 3, ds({2, 3}), +1},
    {ds({3}), 0, ds({0, 3}), +1}, {ds({3}), 1, ds({1, 3}), -1}, {ds({3}), 2, ds({2, 3}), -1},
}};

// delta^c on 3-forms
inline constexpr std::array<StencilTerm, 12> kCodiff3{{
    {ds({0, 1}), 2, ds({0, 1, 2}), -1}, {ds({0, 1}), 3, ds({0, 1, 3}), -1},
    {ds({0, 2}), 1, ds({0, 1, 2}), +1}, {ds({0, 2}), 3, ds({0, 2, 3}), -1},
    {ds({0, 3}), 1, ds({0, 1, 3}), +1}, {ds({0, 3}), 2, ds({0, 2, 3}), +1},
    {ds({1, 2}), 0, ds({0, 1, 2}), +1}, {ds({1, 2}), 3, ds({1, 2, 3}), -1},
    {ds({1, 3}), 0, ds({0, 1, 3}), +1}, {ds({1, 3}), 2, ds({1, 2, 3}), +1},
    {ds({2, 3}), 0, ds({0, 2, 3}), +1}, {ds({2, 3}), 1, ds({1, 2, 3}), -1},
}};

// delta^c on 4-forms
inline constexpr std::array<StencilTerm, 4> kCodiff4{{
    {ds({0, 1, 2}), 3, ds({0, 1, 2, 3}), +1},
    {ds({0, 1, 3}), 2, ds({0, 1, 2, 3}), -1},
    {ds({0, 2, 3}), 1, ds({0, 1, 2, 3}), +1},
    {ds({1, 2, 3}), 0, ds({0, 1, 2, 3}), +1},
}};

}  // namespace detail

/// Stencil of the codifferential acting on forms of the given degree (1..4).
inline std::span<const StencilTerm> codifferential_stencil(int degree) {
  switch (degree) {
    case 1: return detail::kCodiff1;
    case 2: return detail::kCodiff2;
    case 3: return detail::kCodiff3;
    case 4: return detail::kCodiff4;
    default: return {};
  }
}

/// Codifferential delta^c from its difference stencils. Degree 0 maps to the
/// zero 0-form.
inline Form codifferential(const Form& w) {
  const LatticeSpec& lat = w.lattice();
  if (w.degree() == 0) return Form(lat, 0, w.copy());
  Form out(lat, w.degree() - 1, w.copy());
  const auto stencil = codifferential_stencil(w.degree());
  std::array<std::size_t, 4> nb{};
  for (std::size_t s = 0; s < lat.storage_sites(); ++s) {
    if (!detail::forward_neighbours(lat, s, nb)) continue;
    for (const StencilTerm& t : stencil) {
      const int in = t.in.rank();
      const complex diff = w.at(nb[static_cast<std::size_t>(t.axis)], in) - w.at(s, in);
      out.at(s, t.out.rank()) += static_cast<double>(t.sign) * diff;
    }
  }
  return out;
}

/// delta^c as the composition * d^c *.
inline Form codifferential_via_star(const Form& w) {
  if (w.degree() == 0) return Form(w.lattice(), 0, w.copy());
  return hodge(coboundary(hodge(w)));
}

/// delta^c as (-1)^r *^{-1} d^c * for an r-form.
inline Form codifferential_via_inverse(const Form& w) {
  if (w.degree() == 0) return Form(w.lattice(), 0, w.copy());
  Form out = hodge_inverse(coboundary(hodge(w)));
  if (w.degree() % 2 != 0) out *= -1.0;
  return out;
}

/// Discrete Laplacian -(d delta + delta d).
inline Form laplacian(const Form& w) {
  Form out(w.lattice(), w.degree(), w.copy());
  if (w.degree() > 0) out -= coboundary(codifferential(w));
  if (w.degree() < kDim) out -= codifferential(coboundary(w));
  return out;
}

/// The three terms of the discrete Green formula for an (r-1)-form phi and an r-form w.
struct GreenTerms {
  complex coboundary_side;   // (d phi, w)_V
  complex codifferential_side;  // (phi, delta w)_V
  complex boundary_side;     // <dV, phi (x) *conj(w)>
  complex residual() const { return coboundary_side - codifferential_side - boundary_side; }
};

/// Evaluates the Green formula terms given the boundary of the double volume.
inline GreenTerms green_terms(const Form& phi, const Form& w, const DoubleChain& volume_boundary) {
  detail::require_same_lattice(phi, w);
  if (phi.degree() + 1 != w.degree()) throw std::invalid_argument("Green formula needs deg(w) = deg(phi) + 1");
  if (phi.copy() != Copy::plain || w.copy() != Copy::plain)
    throw std::domain_error("Green formula is stated for plain-copy forms");
  GreenTerms t;
  t.coboundary_side = inner_product(coboundary(phi), w);
  t.codifferential_side = inner_product(phi, codifferential(w));
  t.boundary_side = pair_double(volume_boundary, phi, hodge(w.conj()));
  return t;
}

/// (d phi, w)_V - (phi, delta w)_V - <dV, phi (x) *conj(w)>; zero up to round-off.
inline complex green_residual(const Form& phi, const Form& w) {
  const LatticeSpec& lat = phi.lattice();
  return green_terms(phi, w, boundary_double(build_double_volume(lat), lat)).residual();
}

}  // namespace dkc

#endif  // DKC_CALCULUS_HPP
