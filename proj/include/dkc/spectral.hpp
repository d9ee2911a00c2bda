#ifndef DKC_SPECTRAL_HPP
#define DKC_SPECTRAL_HPP

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "dkc/calculus.hpp"
#include "dkc/dirac_kahler.hpp"

namespace dkc {

using DenseMatrix = Eigen::MatrixXcd;
using DenseVector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<complex, Eigen::RowMajor>;

/// Site-major flat index: site_rank * 16 + channel, with channels laid out
/// degree-major (0 | 1..4 | 5..10 | 11..14 | 15).
class FlatIndexing {
 public:
  explicit FlatIndexing(const LatticeSpec& lattice) : lattice_(lattice) {}

  std::size_t dimension() const noexcept { return lattice_.storage_sites() * kChannels; }
  std::size_t index(std::size_t site_rank, int degree, int rank) const {
    return site_rank * kChannels + static_cast<std::size_t>(channel_offset(degree) + rank);
  }
  std::size_t index(std::size_t site_rank, DirectionSet d) const { return index(site_rank, d.degree(), d.rank()); }
  const LatticeSpec& lattice() const noexcept { return lattice_; }

 private:
  LatticeSpec lattice_;
};

inline DenseVector flatten(const InhomogeneousForm& w) {
  const FlatIndexing ix(w.lattice());
  DenseVector v(static_cast<Eigen::Index>(ix.dimension()));
  for (std::size_t s = 0; s < w.lattice().storage_sites(); ++s)
    for (int ch = 0; ch < kChannels; ++ch) v(static_cast<Eigen::Index>(s * kChannels + ch)) = w.channel(s, ch);
  return v;
}

inline InhomogeneousForm unflatten(const DenseVector& v, const LatticeSpec& lattice, Copy copy = Copy::plain) {
  const FlatIndexing ix(lattice);
  if (static_cast<std::size_t>(v.size()) != ix.dimension()) throw std::invalid_argument("vector length does not match lattice");
  InhomogeneousForm w(lattice, copy);
  for (std::size_t s = 0; s < lattice.storage_sites(); ++s)
    for (int ch = 0; ch < kChannels; ++ch) w.channel(s, ch) = v(static_cast<Eigen::Index>(s * kChannels + ch));
  return w;
}

enum class OperatorKind { coboundary, codifferential, dirac_kahler, dual, project_plus, project_minus, laplacian };

inline std::string to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::coboundary: return "coboundary";
    case OperatorKind::codifferential: return "codifferential";
    case OperatorKind::dirac_kahler: return "dirac_kahler";
    case OperatorKind::dual: return "dual";
    case OperatorKind::project_plus: return "project_plus";
    case OperatorKind::project_minus: return "project_minus";
    case OperatorKind::laplacian: return "laplacian";
  }
  return "unknown";
}

/// Sparse matrix of a linear operator on flattened inhomogeneous forms.
class OperatorMatrix {
 public:
  OperatorMatrix() = default;
  explicit OperatorMatrix(SparseMatrix m) : m_(std::move(m)) { m_.makeCompressed(); }

  Eigen::Index dimension() const noexcept { return m_.rows(); }
  const SparseMatrix& sparse() const noexcept { return m_; }
  DenseMatrix dense() const { return DenseMatrix(m_); }
  DenseVector apply(const DenseVector& v) const { return m_ * v; }
  Eigen::Index max_row_nonzeros() const {
    Eigen::Index best = 0;
    for (Eigen::Index r = 0; r < m_.outerSize(); ++r) {
      Eigen::Index n = 0;
      for (SparseMatrix::InnerIterator it(m_, r); it; ++it)
        if (it.value() != complex{}) ++n;
      best = std::max(best, n);
    }
    return best;
  }

 private:
  SparseMatrix m_;
};

namespace detail {

using Triplets = std::vector<Eigen::Triplet<complex>>;

inline void add_difference(Triplets& t, const FlatIndexing& ix, std::size_t site, int axis, DirectionSet out,
                           DirectionSet in, complex coeff) {
  const LatticeSpec& lat = ix.lattice();
  const auto row = static_cast<Eigen::Index>(ix.index(site, out));
  t.emplace_back(row, static_cast<Eigen::Index>(ix.index(lat.neighbour_rank(site, axis), in)), coeff);
  t.emplace_back(row, static_cast<Eigen::Index>(ix.index(site, in)), -coeff);
}

inline void coboundary_triplets(Triplets& t, const FlatIndexing& ix, complex scale) {
  for (std::size_t s = 0; s < ix.lattice().storage_sites(); ++s)
    for (int ch = 0; ch < kChannels; ++ch) {
      const DirectionSet S = channel_dirs(ch);
      for (int j = 0; j < kDim; ++j)
        if (S.contains(j))
          add_difference(t, ix, s, j, S, S.without(j), (S.position(j) % 2 == 0) ? scale : -scale);
    }
}

inline void codifferential_triplets(Triplets& t, const FlatIndexing& ix, complex scale) {
  for (std::size_t s = 0; s < ix.lattice().storage_sites(); ++s)
    for (int r = 1; r <= kDim; ++r)
      for (const StencilTerm& term : codifferential_stencil(r))
        add_difference(t, ix, s, term.axis, term.out, term.in, static_cast<double>(term.sign) * scale);
}

// iota * chiral star: channel S of degree r -> complement(S) with
// i (-1)^{r(r-1)/2} time_sign(S) levi_civita(S).
inline void dual_triplets(Triplets& t, const FlatIndexing& ix, complex scale) {
  for (std::size_t s = 0; s < ix.lattice().storage_sites(); ++s)
    for (int ch = 0; ch < kChannels; ++ch) {
      const DirectionSet S = channel_dirs(ch);
      const double sign = antiautomorphism_sign(S.degree()) * time_sign(S) * levi_civita(S);
      t.emplace_back(static_cast<Eigen::Index>(ix.index(s, S.complement())), static_cast<Eigen::Index>(ix.index(s, S)),
                     scale * kI * sign);
    }
}

inline void identity_triplets(Triplets& t, const FlatIndexing& ix, complex scale) {
  for (std::size_t i = 0; i < ix.dimension(); ++i)
    t.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i), scale);
}

inline SparseMatrix from_triplets(const FlatIndexing& ix, const Triplets& t) {
  const auto n = static_cast<Eigen::Index>(ix.dimension());
  SparseMatrix m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  m.prune(complex{});
  return m;
}

}  // namespace detail

/// Assembles an operator on a periodic lattice from its stencil tables.
/// The Laplacian is assembled as the square of i(d^c + delta^c).
inline OperatorMatrix assemble(const LatticeSpec& lattice, OperatorKind which) {
  if (!lattice.is_periodic()) throw std::invalid_argument("operator assembly supports periodic lattices only");
  const FlatIndexing ix(lattice);
  detail::Triplets t;
  switch (which) {
    case OperatorKind::coboundary: detail::coboundary_triplets(t, ix, 1.0); break;
    case OperatorKind::codifferential: detail::codifferential_triplets(t, ix, 1.0); break;
    case OperatorKind::dirac_kahler:
      detail::coboundary_triplets(t, ix, kI);
      detail::codifferential_triplets(t, ix, kI);
      break;
    case OperatorKind::dual: detail::dual_triplets(t, ix, 1.0); break;
    case OperatorKind::project_plus:
      detail::identity_triplets(t, ix, 0.5);
      detail::dual_triplets(t, ix, 0.5);
      break;
    case OperatorKind::project_minus:
      detail::identity_triplets(t, ix, 0.5);
      detail::dual_triplets(t, ix, -0.5);
      break;
    case OperatorKind::laplacian: {
      const SparseMatrix d = assemble(lattice, OperatorKind::dirac_kahler).sparse();
      return OperatorMatrix(SparseMatrix(d * d));
    }
  }
  return OperatorMatrix(detail::from_triplets(ix, t));
}

/// Forward-difference multipliers exp(i theta_j) - 1 for one Fourier mode.
inline std::array<complex, 4> mode_multipliers(const std::array<double, 4>& theta) {
  std::array<complex, 4> z{};
  for (std::size_t j = 0; j < 4; ++j) z[j] = std::polar(1.0, theta[j]) - 1.0;
  return z;
}

/// 16x16 blocks of d^c, delta^c and i(d^c + delta^c) on the mode
/// w_k = c exp(i theta . k).
struct FourierSymbol {
  Eigen::Matrix<complex, 16, 16> coboundary;
  Eigen::Matrix<complex, 16, 16> codifferential;
  Eigen::Matrix<complex, 16, 16> dirac_kahler;
  Eigen::Matrix<complex, 16, 16> laplacian;
};

inline FourierSymbol fourier_blocks(const std::array<double, 4>& theta) {
  const auto z = mode_multipliers(theta);
  FourierSymbol f;
  f.coboundary.setZero();
  f.codifferential.setZero();
  for (int ch = 0; ch < kChannels; ++ch) {
    const DirectionSet S = channel_dirs(ch);
    for (int j = 0; j < kDim; ++j)
      if (S.contains(j))
        f.coboundary(ch, S.without(j).channel()) += (S.position(j) % 2 == 0 ? 1.0 : -1.0) * z[static_cast<std::size_t>(j)];
  }
  for (int r = 1; r <= kDim; ++r)
    for (const StencilTerm& t : codifferential_stencil(r))
      f.codifferential(t.out.channel(), t.in.channel()) += static_cast<double>(t.sign) * z[static_cast<std::size_t>(t.axis)];
  f.dirac_kahler = kI * (f.coboundary + f.codifferential);
  f.laplacian = f.dirac_kahler * f.dirac_kahler;
  return f;
}

/// 16x16 block of i(d^c + delta^c) on a single Fourier mode.
inline Eigen::Matrix<complex, 16, 16> fourier_symbol(const std::array<double, 4>& theta) {
  return fourier_blocks(theta).dirac_kahler;
}

/// Angles theta_j = 2 pi n_j / N_j of every Fourier mode of a periodic lattice.
inline std::vector<std::array<double, 4>> lattice_modes(const LatticeSpec& lattice) {
  std::vector<std::array<double, 4>> out;
  const auto& n = lattice.extents();
  for (int a = 0; a < n[0]; ++a)
    for (int b = 0; b < n[1]; ++b)
      for (int c = 0; c < n[2]; ++c)
        for (int d = 0; d < n[3]; ++d) {
          const std::array<int, 4> m{a, b, c, d};
          std::array<double, 4> theta{};
          for (std::size_t j = 0; j < 4; ++j) theta[j] = 2.0 * std::numbers::pi * m[j] / n[j];
          out.push_back(theta);
        }
  return out;
}

inline std::vector<complex> eigenvalues(const DenseMatrix& m) {
  Eigen::ComplexEigenSolver<DenseMatrix> solver(m, false);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigenvalue iteration did not converge");
  const DenseVector& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

/// Multiset union of the symbol eigenvalues over every lattice mode.
inline std::vector<complex> symbol_spectrum(const LatticeSpec& lattice) {
  std::vector<complex> out;
  for (const auto& theta : lattice_modes(lattice)) {
    const DenseMatrix block = fourier_symbol(theta);
    const auto ev = eigenvalues(block);
    out.insert(out.end(), ev.begin(), ev.end());
  }
  return out;
}

inline void sort_spectrum(std::vector<complex>& ev) {
  std::sort(ev.begin(), ev.end(), [](complex a, complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
}

struct SpectrumMatch {
  bool multiplicities_agree = false;
  std::size_t clusters = 0;
  double max_deviation = 0.0;  // largest distance between matched cluster means
};

/// Compares two eigenvalue multisets. Values closer than `cluster_radius`
/// (single linkage) form one cluster; clusters must pair up with equal size,
/// and the deviation is measured between cluster means, which stay accurate
/// for defective eigenvalues where individual values scatter.
inline SpectrumMatch match_spectra(std::vector<complex> a, std::vector<complex> b, double cluster_radius = 1e-6) {
  struct Cluster {
    complex mean;
    std::size_t size;
  };
  auto clusterize = [cluster_radius](std::vector<complex>& v) {
    std::vector<Cluster> out;
    std::vector<int> label(v.size(), -1);
    for (std::size_t seed = 0; seed < v.size(); ++seed) {
      if (label[seed] >= 0) continue;
      const int id = static_cast<int>(out.size());
      std::vector<std::size_t> stack{seed};
      label[seed] = id;
      complex sum{};
      std::size_t n = 0;
      while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        sum += v[i];
        ++n;
        for (std::size_t j = 0; j < v.size(); ++j)
          if (label[j] < 0 && std::abs(v[j] - v[i]) <= cluster_radius) {
            label[j] = id;
            stack.push_back(j);
          }
      }
      out.push_back({sum / static_cast<double>(n), n});
    }
    return out;
  };
  SpectrumMatch res;
  if (a.size() != b.size()) return res;
  const auto ca = clusterize(a);
  auto cb = clusterize(b);
  res.clusters = ca.size();
  if (ca.size() != cb.size()) return res;
  std::vector<bool> used(cb.size(), false);
  res.multiplicities_agree = true;
  for (const Cluster& c : ca) {
    std::size_t best = cb.size();
    double best_dist = 0.0;
    for (std::size_t j = 0; j < cb.size(); ++j) {
      if (used[j]) continue;
      const double dist = std::abs(cb[j].mean - c.mean);
      if (best == cb.size() || dist < best_dist) {
        best = j;
        best_dist = dist;
      }
    }
    used[best] = true;
    if (cb[best].size != c.size) res.multiplicities_agree = false;
    res.max_deviation = std::max(res.max_deviation, best_dist);
  }
  return res;
}

/// Orthonormal basis of the numerical null space: right singular vectors
/// whose singular value is at most tol times the largest one.
inline std::vector<DenseVector> kernel(const OperatorMatrix& m, double tol = 1e-8) {
  const DenseMatrix a = m.dense();
  Eigen::BDCSVD<DenseMatrix> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const DenseMatrix& v = svd.matrixV();
  const double cutoff = sv.size() > 0 ? tol * sv(0) : 0.0;
  std::vector<DenseVector> out;
  for (Eigen::Index i = 0; i < v.cols(); ++i) {
    const double s = i < sv.size() ? sv(i) : 0.0;
    if (s <= cutoff) out.emplace_back(v.col(i));
  }
  return out;
}

inline double smallest_singular_value(const DenseMatrix& a) {
  Eigen::BDCSVD<DenseMatrix> svd(a);
  const auto& sv = svd.singularValues();
  return sv.size() > 0 ? sv(sv.size() - 1) : 0.0;
}

struct EigenPair {
  complex value;
  DenseVector vector;
};

inline std::vector<EigenPair> eigenpairs(const DenseMatrix& m) {
  Eigen::ComplexEigenSolver<DenseMatrix> solver(m, true);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigenvalue iteration did not converge");
  std::vector<EigenPair> out;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    DenseVector v = solver.eigenvectors().col(i);
    v.normalize();
    out.push_back({solver.eigenvalues()(i), std::move(v)});
  }
  std::stable_sort(out.begin(), out.end(), [](const EigenPair& x, const EigenPair& y) {
    return x.value.real() != y.value.real() ? x.value.real() < y.value.real() : x.value.imag() < y.value.imag();
  });
  return out;
}

/// Thresholds for treating a numerical eigenvalue as a real positive mass.
struct RealityFilter {
  double imag_tol = 1e-9;   // |Im m| at most this
  double zero_floor = 1e-6;  // Re m above this; smaller values belong to the massless cluster
  double merge_tol = 1e-9;  // positive values this close count as one eigenspace
};

inline bool is_real_positive(complex m, const RealityFilter& f = {}) {
  return std::abs(m.imag()) <= f.imag_tol && m.real() > f.zero_floor;
}

/// Distinct real positive eigenvalues, ascending.
inline std::vector<double> real_positive_eigenvalues(const std::vector<complex>& ev, const RealityFilter& f = {}) {
  std::vector<double> vals;
  for (complex m : ev)
    if (is_real_positive(m, f)) vals.push_back(m.real());
  std::sort(vals.begin(), vals.end());
  std::vector<double> out;
  for (double v : vals)
    if (out.empty() || v - out.back() > f.merge_tol) out.push_back(v);
  return out;
}

struct StackedRecord {
  double mass;
  double sigma_self_dual;       // smallest singular value of [D - m; I - G]
  double sigma_anti_self_dual;  // smallest singular value of [D - m; I + G]
};

inline constexpr double kFullRankThreshold = 1e-8;

/// For each m > 0, the smallest singular values of (D - mI) stacked with
/// (I -/+ G), G = iota * chiral star. Both must be bounded away from zero
/// for a massive (anti-)self-dual solution to be trivial.
inline std::vector<StackedRecord> certify_prop33(const LatticeSpec& lattice, const std::vector<double>& masses) {
  if (masses.empty()) throw std::invalid_argument("mass list is empty");
  for (double m : masses)
    if (!(m > 0.0)) throw std::invalid_argument("masses must be strictly positive");
  const DenseMatrix d = assemble(lattice, OperatorKind::dirac_kahler).dense();
  const DenseMatrix g = assemble(lattice, OperatorKind::dual).dense();
  const Eigen::Index n = d.rows();
  const DenseMatrix id = DenseMatrix::Identity(n, n);
  std::vector<StackedRecord> out;
  for (double m : masses) {
    DenseMatrix stacked(2 * n, n);
    stacked.topRows(n) = d - complex{m} * id;
    stacked.bottomRows(n) = id - g;
    const double plus = smallest_singular_value(stacked);
    stacked.bottomRows(n) = id + g;
    const double minus = smallest_singular_value(stacked);
    out.push_back({m, plus, minus});
  }
  return out;
}

struct FlipRecord {
  complex eigenvalue;
  double eigen_residual;  // ||D w - m w|| for the unit eigenvector
  FlipResiduals flip;
};

/// Chirality flip residuals for every real positive eigenpair of D.
inline std::vector<FlipRecord> certify_flip(const LatticeSpec& lattice, const RealityFilter& filter = {}) {
  const DenseMatrix d = assemble(lattice, OperatorKind::dirac_kahler).dense();
  std::vector<FlipRecord> out;
  for (const EigenPair& p : eigenpairs(d)) {
    if (!is_real_positive(p.value, filter)) continue;
    const InhomogeneousForm w = unflatten(p.vector, lattice);
    const Mass m(p.value.real());
    out.push_back({p.value, dk_residual(w, m), chirality_flip_check(w, m)});
  }
  return out;
}

struct MasslessRecord {
  double residual;        // ||D w|| for the kernel vector
  double plus_residual;   // ||D w+||
  double minus_residual;  // ||D w-||
};

/// Checks that both chiral parts of every numerical kernel vector of D are
/// again annihilated by D.
inline std::vector<MasslessRecord> certify_massless(const LatticeSpec& lattice, double tol = 1e-8) {
  const OperatorMatrix d = assemble(lattice, OperatorKind::dirac_kahler);
  std::vector<MasslessRecord> out;
  for (const DenseVector& v : kernel(d, tol)) {
    const InhomogeneousForm w = unflatten(v, lattice);
    const ChiralComponents parts = chiral_project(w);
    out.push_back({dk_operator(w).euclidean_norm(), dk_operator(parts.plus).euclidean_norm(),
                   dk_operator(parts.minus).euclidean_norm()});
  }
  return out;
}

}  // namespace dkc

#endif  // DKC_SPECTRAL_HPP
