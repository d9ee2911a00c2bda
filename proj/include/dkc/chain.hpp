#ifndef DKC_CHAIN_HPP
#define DKC_CHAIN_HPP

#include <compare>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>

#include "dkc/form.hpp"
#include "dkc/lattice.hpp"

namespace dkc {

/// One cell s_k^{(r)} of either copy of the cubical complex.
struct ChainBasis {
  SiteIndex site;
  DirectionSet dirs;
  Copy copy = Copy::plain;

  friend constexpr bool operator==(const ChainBasis&, const ChainBasis&) = default;
  friend constexpr std::strong_ordering operator<=>(const ChainBasis& a, const ChainBasis& b) {
    if (auto c = a.copy <=> b.copy; c != 0) return c;
    if (auto c = a.dirs <=> b.dirs; c != 0) return c;
    return a.site <=> b.site;
  }
};

/// Sparse real chain. Zero coefficients are never stored; iteration follows
/// the canonical basis order, so reductions over a chain are reproducible.
class Chain {
 public:
  using map_type = std::map<ChainBasis, double>;

  Chain() = default;
  Chain(ChainBasis b, double coeff) { add(b, coeff); }

  void add(const ChainBasis& b, double coeff) {
    if (coeff == 0.0) return;
    auto [it, inserted] = terms_.try_emplace(b, coeff);
    if (!inserted) {
      it->second += coeff;
      if (it->second == 0.0) terms_.erase(it);
    }
  }

  double coefficient(const ChainBasis& b) const {
    auto it = terms_.find(b);
    return it == terms_.end() ? 0.0 : it->second;
  }

  const map_type& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  // Common degree of all terms, if any.
  std::optional<int> degree() const {
    std::optional<int> d;
    for (const auto& [b, c] : terms_) {
      if (d && *d != b.dirs.degree()) return std::nullopt;
      d = b.dirs.degree();
    }
    return d;
  }

  Chain& operator+=(const Chain& o) {
    for (const auto& [b, c] : o.terms_) add(b, c);
    return *this;
  }
  Chain& operator*=(double s) {
    if (s == 0.0) {
      terms_.clear();
      return *this;
    }
    for (auto& [b, c] : terms_) c *= s;
    return *this;
  }
  friend Chain operator+(Chain a, const Chain& b) { return a += b; }
  friend Chain operator*(double s, Chain a) { return a *= s; }
  friend bool operator==(const Chain&, const Chain&) = default;

 private:
  map_type terms_;
};

/// Sparse element of C(4) (x) C~(4): first factor plain, second tilde.
class DoubleChain {
 public:
  using key_type = std::pair<ChainBasis, ChainBasis>;
  using map_type = std::map<key_type, double>;

  void add(const ChainBasis& a, const ChainBasis& b, double coeff) {
    if (a.copy != Copy::plain || b.copy != Copy::tilde)
      throw std::invalid_argument("double chain factors must be (plain, tilde)");
    if (coeff == 0.0) return;
    auto [it, inserted] = terms_.try_emplace(key_type{a, b}, coeff);
    if (!inserted) {
      it->second += coeff;
      if (it->second == 0.0) terms_.erase(it);
    }
  }

  double coefficient(const ChainBasis& a, const ChainBasis& b) const {
    auto it = terms_.find(key_type{a, b});
    return it == terms_.end() ? 0.0 : it->second;
  }

  const map_type& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  DoubleChain& operator+=(const DoubleChain& o) {
    for (const auto& [k, c] : o.terms_) add(k.first, k.second, c);
    return *this;
  }
  friend bool operator==(const DoubleChain&, const DoubleChain&) = default;

 private:
  map_type terms_;
};

/// Chain boundary. Each edge slot i contributes
/// (-1)^{edges before i} (face at tau_i k - face at k).
inline Chain boundary(const Chain& a, const LatticeSpec& lattice) {
  Chain out;
  for (const auto& [b, coeff] : a.terms()) {
    for (int axis = 0; axis < kDim; ++axis) {
      if (!b.dirs.contains(axis)) continue;
      const double sign = (b.dirs.position(axis) % 2 == 0) ? 1.0 : -1.0;
      const DirectionSet face = b.dirs.without(axis);
      out.add({shift(b.site, axis, lattice), face, b.copy}, sign * coeff);
      out.add({b.site, face, b.copy}, -sign * coeff);
    }
  }
  return out;
}

/// Combinatorial star: complements the direction set, swaps copy, and
/// multiplies by the Levi-Civita sign of the input pattern.
inline Chain star_c(const Chain& a) {
  Chain out;
  for (const auto& [b, coeff] : a.terms())
    out.add({b.site, b.dirs.complement(), flip(b.copy)}, levi_civita(b.dirs) * coeff);
  return out;
}

/// Sum of every 4-cell e_k with k_i in 1..N_i.
inline Chain build_volume(const LatticeSpec& lattice) {
  Chain v;
  lattice.for_each_volume_site([&](const SiteIndex& s) { v.add({s, DirectionSet::full(), Copy::plain}, 1.0); });
  return v;
}

/// V_r = sum_k sum_{|S|=r} s_k^S (x) star_c s_k^S.
inline DoubleChain build_V_r(const LatticeSpec& lattice, int r) {
  if (r < 0 || r > kDim) throw std::invalid_argument("degree must be in 0..4");
  DoubleChain out;
  lattice.for_each_volume_site([&](const SiteIndex& s) {
    for (int rank = 0; rank < binomial4(r); ++rank) {
      const DirectionSet d = DirectionSet::from_rank(r, rank);
      out.add({s, d, Copy::plain}, {s, d.complement(), Copy::tilde}, static_cast<double>(levi_civita(d)));
    }
  });
  return out;
}

/// The double volume chain: sum of V_r over r = 0..4.
inline DoubleChain build_double_volume(const LatticeSpec& lattice) {
  DoubleChain out;
  for (int r = 0; r <= kDim; ++r) out += build_V_r(lattice, r);
  return out;
}

/// d(a (x) b) = da (x) b + (-1)^{deg a} a (x) db, extended linearly.
inline DoubleChain boundary_double(const DoubleChain& chain, const LatticeSpec& lattice) {
  DoubleChain out;
  for (const auto& [key, coeff] : chain.terms()) {
    const auto& [a, b] = key;
    const Chain da = boundary(Chain(a, 1.0), lattice);
    const Chain db = boundary(Chain(b, 1.0), lattice);
    for (const auto& [fa, ca] : da.terms()) out.add(fa, b, ca * coeff);
    const double sign = (a.dirs.degree() % 2 == 0) ? 1.0 : -1.0;
    for (const auto& [fb, cb] : db.terms()) out.add(a, fb, sign * cb * coeff);
  }
  return out;
}

namespace detail {

inline complex cochain_value(const ChainBasis& b, const Form& w) {
  if (b.dirs.degree() != w.degree()) return {};
  if (!w.lattice().in_storage(b.site)) throw std::out_of_range("chain cell outside form storage");
  return w(b.site, b.dirs);
}

}  // namespace detail

/// Chain-cochain pairing; cells of a degree other than deg(w) contribute zero.
inline complex pair(const Chain& a, const Form& w) {
  complex acc{};
  for (const auto& [b, coeff] : a.terms()) {
    if (b.copy != w.copy()) throw std::domain_error("pairing requires chain and form on the same copy");
    acc += coeff * detail::cochain_value(b, w);
  }
  return acc;
}

/// Bilinear pairing <a (x) b, phi (x) psi> = <a, phi><b, psi>.
inline complex pair_double(const DoubleChain& chain, const Form& phi, const Form& psi) {
  if (phi.copy() != Copy::plain || psi.copy() != Copy::tilde)
    throw std::domain_error("double pairing requires a plain form and a tilde form");
  complex acc{};
  for (const auto& [key, coeff] : chain.terms()) {
    const auto& [a, b] = key;
    if (a.dirs.degree() != phi.degree() || b.dirs.degree() != psi.degree()) continue;
    acc += coeff * detail::cochain_value(a, phi) * detail::cochain_value(b, psi);
  }
  return acc;
}

}  // namespace dkc

#endif  // DKC_CHAIN_HPP
