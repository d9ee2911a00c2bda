#ifndef DKC_FORM_HPP
#define DKC_FORM_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "dkc/lattice.hpp"

namespace dkc {

using complex = std::complex<double>;

/// Seeded source of random coefficients. Real and imaginary parts are
/// independent and uniform on [-1, 1], built from raw 64-bit mt19937_64 draws
/// so sequences are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform_pm1() {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return 2.0 * u - 1.0;
  }
  complex uniform_complex() {
    const double re = uniform_pm1();
    return {re, uniform_pm1()};
  }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Homogeneous degree-r cochain: one complex coefficient per storage site and
/// per direction set of degree r.
class Form {
 public:
  Form(const LatticeSpec& lattice, int degree, Copy copy = Copy::plain)
      : lattice_(lattice), degree_(degree), copy_(copy) {
    if (degree < 0 || degree > kDim) throw std::invalid_argument("form degree must be in 0..4");
    coeffs_.assign(lattice_.storage_sites() * static_cast<std::size_t>(channels()), complex{});
  }

  static Form random(const LatticeSpec& lattice, int degree, Copy copy, Rng& rng) {
    Form f(lattice, degree, copy);
    for (auto& c : f.coeffs_) c = rng.uniform_complex();
    return f;
  }

  const LatticeSpec& lattice() const noexcept { return lattice_; }
  int degree() const noexcept { return degree_; }
  Copy copy() const noexcept { return copy_; }
  int channels() const noexcept { return binomial4(degree_); }

  complex& at(std::size_t site_rank, int rank) {
    return coeffs_[site_rank * static_cast<std::size_t>(channels()) + static_cast<std::size_t>(rank)];
  }
  const complex& at(std::size_t site_rank, int rank) const {
    return coeffs_[site_rank * static_cast<std::size_t>(channels()) + static_cast<std::size_t>(rank)];
  }

  complex& operator()(const SiteIndex& site, DirectionSet dirs) {
    check_dirs(dirs);
    return at(lattice_.site_rank(site), dirs.rank());
  }
  const complex& operator()(const SiteIndex& site, DirectionSet dirs) const {
    check_dirs(dirs);
    return at(lattice_.site_rank(site), dirs.rank());
  }

  std::span<complex> coeffs() noexcept { return coeffs_; }
  std::span<const complex> coeffs() const noexcept { return coeffs_; }

  Form with_copy(Copy c) const {
    Form out = *this;
    out.copy_ = c;
    return out;
  }

  Form conj() const {
    Form out = *this;
    for (auto& c : out.coeffs_) c = std::conj(c);
    return out;
  }

  Form& operator+=(const Form& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  Form& operator-=(const Form& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  Form& operator*=(complex s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }

  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator*(complex s, Form a) { return a *= s; }
  friend Form operator-(Form a) { return a *= -1.0; }

  // Largest coefficient modulus over the whole storage.
  double max_abs() const {
    double m = 0.0;
    for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
  }

  // Largest coefficient modulus over the volume sites 1..N_i.
  double max_abs_volume() const {
    double m = 0.0;
    lattice_.for_each_volume_site([&](const SiteIndex& s) {
      const std::size_t r = lattice_.site_rank(s);
      for (int c = 0; c < channels(); ++c) m = std::max(m, std::abs(at(r, c)));
    });
    return m;
  }

  double squared_norm() const {
    double s = 0.0;
    for (const auto& c : coeffs_) s += std::norm(c);
    return s;
  }

 private:
  void check_dirs(DirectionSet dirs) const {
    if (dirs.degree() != degree_) throw std::invalid_argument("direction set degree does not match form");
  }
  void check_compatible(const Form& o) const {
    if (o.degree_ != degree_ || o.copy_ != copy_ || !(o.lattice_ == lattice_))
      throw std::invalid_argument("incompatible forms");
  }

  LatticeSpec lattice_;
  int degree_;
  Copy copy_;
  std::vector<complex> coeffs_;
};

/// Sum of forms of every degree 0..4 on one lattice and copy; 16 complex
/// channels per site.
class InhomogeneousForm {
 public:
  explicit InhomogeneousForm(const LatticeSpec& lattice, Copy copy = Copy::plain)
      : parts_{Form(lattice, 0, copy), Form(lattice, 1, copy), Form(lattice, 2, copy), Form(lattice, 3, copy),
               Form(lattice, 4, copy)} {}

  explicit InhomogeneousForm(std::array<Form, 5> parts) : parts_(std::move(parts)) {
    for (int r = 0; r <= kDim; ++r) {
      const Form& p = parts_[static_cast<std::size_t>(r)];
      if (p.degree() != r || p.copy() != parts_[0].copy() || !(p.lattice() == parts_[0].lattice()))
        throw std::invalid_argument("inhomogeneous form parts must have degrees 0..4 on one lattice and copy");
    }
  }

  static InhomogeneousForm random(const LatticeSpec& lattice, Copy copy, Rng& rng) {
    InhomogeneousForm out(lattice, copy);
    for (auto& p : out.parts_)
      for (auto& c : p.coeffs()) c = rng.uniform_complex();
    return out;
  }

  Form& operator[](int r) { return parts_.at(static_cast<std::size_t>(r)); }
  const Form& operator[](int r) const { return parts_.at(static_cast<std::size_t>(r)); }

  const LatticeSpec& lattice() const noexcept { return parts_[0].lattice(); }
  Copy copy() const noexcept { return parts_[0].copy(); }

  // Coefficient on flat channel 0..15 at a storage site.
  complex& channel(std::size_t site_rank, int ch) {
    const DirectionSet d = channel_dirs(ch);
    return (*this)[d.degree()].at(site_rank, d.rank());
  }
  const complex& channel(std::size_t site_rank, int ch) const {
    const DirectionSet d = channel_dirs(ch);
    return (*this)[d.degree()].at(site_rank, d.rank());
  }

  InhomogeneousForm with_copy(Copy c) const {
    InhomogeneousForm out = *this;
    for (auto& p : out.parts_) p = p.with_copy(c);
    return out;
  }

  InhomogeneousForm& operator+=(const InhomogeneousForm& o) {
    for (int r = 0; r <= kDim; ++r) (*this)[r] += o[r];
    return *this;
  }
  InhomogeneousForm& operator-=(const InhomogeneousForm& o) {
    for (int r = 0; r <= kDim; ++r) (*this)[r] -= o[r];
    return *this;
  }
  InhomogeneousForm& operator*=(complex s) {
    for (auto& p : parts_) p *= s;
    return *this;
  }
  friend InhomogeneousForm operator+(InhomogeneousForm a, const InhomogeneousForm& b) { return a += b; }
  friend InhomogeneousForm operator-(InhomogeneousForm a, const InhomogeneousForm& b) { return a -= b; }
  friend InhomogeneousForm operator*(complex s, InhomogeneousForm a) { return a *= s; }

  /// Positive-definite channel norm sqrt(sum |c|^2) over all storage.
  double euclidean_norm() const {
    double s = 0.0;
    for (const auto& p : parts_) s += p.squared_norm();
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& p : parts_) m = std::max(m, p.max_abs());
    return m;
  }

 private:
  std::array<Form, 5> parts_;
};

}  // namespace dkc

#endif  // DKC_FORM_HPP
