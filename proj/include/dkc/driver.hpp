#ifndef DKC_DRIVER_HPP
#define DKC_DRIVER_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dkc/report.hpp"
#include "dkc/spectral.hpp"
#include "dkc/verify.hpp"

namespace dkc {

/// Invalid configuration or command-line usage.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::array<int, 4> lattice{3, 3, 3, 3};
  BoundaryMode boundary = BoundaryMode::periodic;
  std::array<int, 4> ghost_lattice{2, 2, 2, 2};
  std::optional<double> mass;
  std::vector<double> masses{0.5, 1.0, 2.0};
  std::uint64_t seed = 42;
  double tol = 1e-12;
  int trials = 20;
  std::string out;
  std::string csv;

  /// Masses used by the triviality certification: --mass wins over the list.
  std::vector<double> certification_masses() const { return mass ? std::vector<double>{*mass} : masses; }

  void validate() const {
    for (int n : lattice)
      if (n < 1) throw UsageError("lattice extents must be >= 1");
    for (int n : ghost_lattice)
      if (n < 1) throw UsageError("ghost_lattice extents must be >= 1");
    if (!(tol > 0.0)) throw UsageError("tol must be > 0");
    if (trials < 1) throw UsageError("trials must be >= 1");
    if (mass && !(*mass >= 0.0)) throw UsageError("mass must be >= 0");
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["lattice"] = lattice;
    j["boundary"] = to_string(boundary);
    j["ghost_lattice"] = ghost_lattice;
    if (mass) j["mass"] = *mass;
    j["masses"] = masses;
    j["seed"] = seed;
    j["tol"] = tol;
    j["trials"] = trials;
    return j;
  }
};

inline BoundaryMode parse_boundary(const std::string& s) {
  if (s == "periodic") return BoundaryMode::periodic;
  if (s == "ghost") return BoundaryMode::ghost;
  throw UsageError("boundary must be 'periodic' or 'ghost', got '" + s + "'");
}

inline std::array<int, 4> parse_extents(const std::string& s) {
  std::array<int, 4> out{};
  std::stringstream ss(s);
  std::string item;
  std::size_t n = 0;
  while (std::getline(ss, item, ',')) {
    if (n == 4) throw UsageError("lattice needs exactly four extents");
    try {
      std::size_t pos = 0;
      out[n] = std::stoi(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("invalid lattice extent '" + item + "'");
    }
    ++n;
  }
  if (n != 4) throw UsageError("lattice needs exactly four extents");
  return out;
}

/// Applies a JSON configuration document on top of `cfg`. Unknown keys are rejected.
inline void apply_json(RunConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw UsageError("configuration must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "lattice") cfg.lattice = value.get<std::array<int, 4>>();
      else if (key == "boundary") cfg.boundary = parse_boundary(value.get<std::string>());
      else if (key == "ghost_lattice") cfg.ghost_lattice = value.get<std::array<int, 4>>();
      else if (key == "mass") cfg.mass = value.get<double>();
      else if (key == "masses") cfg.masses = value.get<std::vector<double>>();
      else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
      else if (key == "tol") cfg.tol = value.get<double>();
      else if (key == "trials") cfg.trials = value.get<int>();
      else if (key == "out") cfg.out = value.get<std::string>();
      else if (key == "csv") cfg.csv = value.get<std::string>();
      else throw UsageError("unknown configuration field '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("invalid configuration value: ") + e.what());
  }
}

inline RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  RunConfig cfg;
  try {
    apply_json(cfg, nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(std::string("config is not valid JSON: ") + e.what());
  }
  return cfg;
}

/// Runs every chain, calculus and chirality invariant on seeded random data.
inline Report cmd_verify(const RunConfig& cfg) {
  cfg.validate();
  Report report("verify");
  report.set_config(cfg.to_json());
  const LatticeSpec periodic(cfg.lattice);
  const LatticeSpec ghost = LatticeSpec::ghost(cfg.boundary == BoundaryMode::ghost ? cfg.lattice : cfg.ghost_lattice);
  // Dense rank tests stay on lattices of at most 16 sites.
  const LatticeSpec small = periodic.volume_sites() <= 16 ? periodic : LatticeSpec::periodic(2, 2, 2, 2);
  const SuiteOptions opt{cfg.trials, cfg.tol, cfg.mass.value_or(1.0)};
  Rng rng(cfg.seed);
  run_complex_core_suite(report, periodic, rng, opt);
  run_calculus_suite(report, periodic, ghost, rng, opt);
  run_dirac_kahler_suite(report, periodic, small, rng, opt);
  return report;
}

inline constexpr std::size_t kDeskScaleSites = 81;

inline LatticeSpec spectral_lattice(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.boundary != BoundaryMode::periodic) throw UsageError("spectral commands need a periodic lattice");
  const LatticeSpec lattice(cfg.lattice);
  if (lattice.volume_sites() > kDeskScaleSites)
    throw UsageError("lattice has " + std::to_string(lattice.volume_sites()) +
                     " sites; dense spectral work is limited to 81 sites (3^4, dimension 1296)");
  return lattice;
}

inline void write_spectrum_csv(std::ostream& os, const std::vector<complex>& ev) {
  os << "index,re,im\n";
  os << std::setprecision(17);
  for (std::size_t i = 0; i < ev.size(); ++i) os << i << ',' << ev[i].real() << ',' << ev[i].imag() << '\n';
}

inline std::string default_csv_path(const RunConfig& cfg) {
  if (!cfg.csv.empty()) return cfg.csv;
  if (cfg.out.empty()) return "spectrum.csv";
  const auto dot = cfg.out.find_last_of('.');
  const auto slash = cfg.out.find_last_of('/');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return cfg.out.substr(0, dot) + ".csv";
  return cfg.out + ".csv";
}

/// Eigenvalues of D on a periodic lattice plus their agreement with the
/// Fourier-symbol spectrum. The sorted eigenvalues are returned via `spectrum`.
inline Report cmd_spectrum(const RunConfig& cfg, std::vector<complex>* spectrum = nullptr) {
  const LatticeSpec lattice = spectral_lattice(cfg);
  Report report("spectrum");
  report.set_config(cfg.to_json());
  std::vector<complex> ev;
  const OperatorMatrix d = assemble(lattice, OperatorKind::dirac_kahler);
  report.timed("spectrum.row_nonzeros", "assembled D has at most 16 nonzeros per row", 16.0,
               [&] { return static_cast<double>(d.max_row_nonzeros()); });
  SpectrumMatch match;
  report.timed("spectrum.symbol_match", "matrix spectrum = union of 16x16 symbol spectra (cluster means)", 1e-9, [&] {
    ev = eigenvalues(d.dense());
    match = match_spectra(ev, symbol_spectrum(lattice));
    return match.multiplicities_agree ? match.max_deviation : HUGE_VAL;
  });
  sort_spectrum(ev);
  report.record("spectrum.dimension", "eigenvalue count = 16 * sites", std::abs(static_cast<double>(ev.size()) -
                                                                         16.0 * static_cast<double>(lattice.volume_sites())),
                0.0);
  report.add_extra("spectrum", {{"dimension", ev.size()}, {"clusters", match.clusters}});
  if (spectrum) *spectrum = ev;
  return report;
}

namespace detail {

inline std::string padded(std::size_t i) {
  std::ostringstream os;
  os << std::setw(4) << std::setfill('0') << i;
  return os.str();
}

inline std::string mass_label(double m) {
  std::ostringstream os;
  os << std::setprecision(17) << m;
  return os.str();
}

}  // namespace detail

/// Triviality of massive (anti-)self-dual solutions, chiral invariance of the
/// massless kernel, and the chirality flip of every real positive eigenpair.
inline Report cmd_chirality(const RunConfig& cfg) {
  const LatticeSpec lattice = spectral_lattice(cfg);
  std::vector<double> masses = cfg.certification_masses();
  for (double m : masses)
    if (!(m > 0.0)) throw UsageError("masses for the triviality check must be > 0");
  Report report("chirality");
  report.set_config(cfg.to_json());

  const auto positive = real_positive_eigenvalues(eigenvalues(assemble(lattice, OperatorKind::dirac_kahler).dense()));
  masses.insert(masses.end(), positive.begin(), positive.end());
  const auto stacked = certify_prop33(lattice, masses);
  for (std::size_t i = 0; i < stacked.size(); ++i) {
    const auto& rec = stacked[i];
    const std::string tag = (i < masses.size() - positive.size() ? "sampled." : "eigen.") + detail::padded(i);
    report.record("triviality." + tag + ".self_dual", "sigma_min[D - m; I - iota star], m = " + detail::mass_label(rec.mass),
                  rec.sigma_self_dual, kFullRankThreshold, Comparison::greater_than);
    report.record("triviality." + tag + ".anti_self_dual",
                  "sigma_min[D - m; I + iota star], m = " + detail::mass_label(rec.mass), rec.sigma_anti_self_dual,
                  kFullRankThreshold, Comparison::greater_than);
  }

  const auto massless = certify_massless(lattice);
  for (std::size_t i = 0; i < massless.size(); ++i)
    report.record("massless.kernel." + detail::padded(i), "max(||D w+||, ||D w-||) for kernel vector w",
                  std::max(massless[i].plus_residual, massless[i].minus_residual), kKernelTol);

  const auto flips = certify_flip(lattice);
  nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < flips.size(); ++i) {
    const auto& f = flips[i];
    report.record("flip.eigenpair." + detail::padded(i),
                  "max(||D w+ - m w-||, ||D w- - m w+||), m = " + detail::mass_label(f.eigenvalue.real()),
                  std::max(f.flip.plus_to_minus, f.flip.minus_to_plus), kFlipTol);
    pairs.push_back({{"index", i},
                     {"re", f.eigenvalue.real()},
                     {"im", f.eigenvalue.imag()},
                     {"eigen_residual", f.eigen_residual},
                     {"plus_to_minus", f.flip.plus_to_minus},
                     {"minus_to_plus", f.flip.minus_to_plus}});
  }
  report.add_extra("eigenpairs", std::move(pairs));
  report.add_extra("kernel_dimension", massless.size());
  return report;
}

}  // namespace dkc

#endif  // DKC_DRIVER_HPP
