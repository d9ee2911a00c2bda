#ifndef DKC_DIRAC_KAHLER_HPP
#define DKC_DIRAC_KAHLER_HPP

#include <cmath>
#include <complex>
#include <stdexcept>

#include "dkc/calculus.hpp"
#include "dkc/form.hpp"

namespace dkc {

/// Dimensionless lattice mass, m >= 0.
class Mass {
 public:
  explicit Mass(double m) : value_(m) {
    if (!std::isfinite(m) || m < 0.0) throw std::invalid_argument("mass must be finite and non-negative");
  }
  double value() const noexcept { return value_; }

 private:
  double value_;
};

struct ChiralComponents {
  InhomogeneousForm plus;
  InhomogeneousForm minus;
};

inline constexpr complex kI{0.0, 1.0};

/// Sign (-1)^{r(r-1)/2} of the main antiautomorphism on degree r: + + - - +.
constexpr int antiautomorphism_sign(int r) noexcept { return ((r * (r - 1) / 2) % 2 == 0) ? 1 : -1; }

inline InhomogeneousForm antiautomorphism_B(const InhomogeneousForm& w) {
  InhomogeneousForm out = w;
  for (int r = 0; r <= kDim; ++r)
    if (antiautomorphism_sign(r) < 0) out[r] *= -1.0;
  return out;
}

inline InhomogeneousForm hodge(const InhomogeneousForm& w) {
  InhomogeneousForm out(w.lattice(), flip(w.copy()));
  for (int r = 0; r <= kDim; ++r) out[kDim - r] = hodge(w[r]);
  return out;
}

inline InhomogeneousForm iota(const InhomogeneousForm& w) { return w.with_copy(flip(w.copy())); }

inline InhomogeneousForm coboundary(const InhomogeneousForm& w) {
  InhomogeneousForm out(w.lattice(), w.copy());
  for (int r = 0; r < kDim; ++r) out[r + 1] = coboundary(w[r]);
  return out;
}

inline InhomogeneousForm codifferential(const InhomogeneousForm& w) {
  InhomogeneousForm out(w.lattice(), w.copy());
  for (int r = 1; r <= kDim; ++r) out[r - 1] = codifferential(w[r]);
  return out;
}

/// Modified star i * B; lands in the opposite copy and squares to the identity.
inline InhomogeneousForm chiral_star(const InhomogeneousForm& w) {
  InhomogeneousForm out = hodge(antiautomorphism_B(w));
  out *= kI;
  return out;
}

/// iota composed with the chiral star: an involution within one copy whose
/// +1/-1 eigenspaces are the self-dual/anti-self-dual forms.
inline InhomogeneousForm dual_map(const InhomogeneousForm& w) { return iota(chiral_star(w)); }

/// Dirac-Kahler operator i(d^c + delta^c). Degree r of the result is
/// i(d^c w^{r-1} + delta^c w^{r+1}).
inline InhomogeneousForm dk_operator(const InhomogeneousForm& w) {
  InhomogeneousForm out = coboundary(w);
  out += codifferential(w);
  out *= kI;
  return out;
}

/// Euclidean norm of i(d^c + delta^c)w - m w.
inline double dk_residual(const InhomogeneousForm& w, Mass m) {
  InhomogeneousForm r = dk_operator(w);
  r -= complex{m.value()} * w;
  return r.euclidean_norm();
}

/// Splits w into (w + iota*w)/2 and (w - iota*w)/2.
inline ChiralComponents chiral_project(const InhomogeneousForm& w) {
  if (w.copy() != Copy::plain) throw std::domain_error("chiral projection acts on plain-copy forms");
  const InhomogeneousForm dual = dual_map(w);
  InhomogeneousForm plus = w + dual;
  InhomogeneousForm minus = w - dual;
  plus *= 0.5;
  minus *= 0.5;
  return {std::move(plus), std::move(minus)};
}

namespace detail {

inline bool dual_within(const InhomogeneousForm& w, double sign, double tol) {
  InhomogeneousForm diff = dual_map(w);
  diff -= complex{sign} * w;
  return diff.euclidean_norm() <= tol * w.euclidean_norm();
}

}  // namespace detail

/// ||iota*w - w|| <= tol ||w||. The zero form is both self-dual and anti-self-dual.
inline bool is_self_dual(const InhomogeneousForm& w, double tol) { return detail::dual_within(w, 1.0, tol); }

inline bool is_anti_self_dual(const InhomogeneousForm& w, double tol) {
  return detail::dual_within(w, -1.0, tol);
}

struct FlipResiduals {
  double plus_to_minus;  // ||D w+ - m w-||
  double minus_to_plus;  // ||D w- - m w+||
};

/// Residuals of the chirality flip D w+ = m w-, D w- = m w+ for a solution
/// (or approximate solution) of D w = m w.
inline FlipResiduals chirality_flip_check(const InhomogeneousForm& w, Mass m) {
  const ChiralComponents parts = chiral_project(w);
  const complex mass{m.value()};
  InhomogeneousForm a = dk_operator(parts.plus);
  a -= mass * parts.minus;
  InhomogeneousForm b = dk_operator(parts.minus);
  b -= mass * parts.plus;
  return {a.euclidean_norm(), b.euclidean_norm()};
}

}  // namespace dkc

#endif  // DKC_DIRAC_KAHLER_HPP
