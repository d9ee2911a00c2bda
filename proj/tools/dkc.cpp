// Command-line driver: verify | spectrum | chirality.
//
// Exit status: 0 when every check passes, 1 when a check fails, 2 on usage
// errors (bad flags, invalid config, unsupported lattice).

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "dkc/driver.hpp"

namespace {

struct Flags {
  std::string config;
  std::string lattice;
  std::string boundary;
  std::optional<double> mass;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<int> trials;
  std::string out;
  std::string csv;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON configuration file");
  cmd->add_option("--lattice", f.lattice, "extents N0,N1,N2,N3");
  cmd->add_option("--boundary", f.boundary, "periodic | ghost");
  cmd->add_option("--mass", f.mass, "mass parameter");
  cmd->add_option("--seed", f.seed, "64-bit seed for random forms");
  cmd->add_option("--tol", f.tol, "absolute tolerance for identities");
  cmd->add_option("--trials", f.trials, "random trials per identity");
  cmd->add_option("--out", f.out, "JSON report path (stdout when omitted)");
}

dkc::RunConfig build_config(const Flags& f) {
  dkc::RunConfig cfg = f.config.empty() ? dkc::RunConfig{} : dkc::load_config_file(f.config);
  if (!f.lattice.empty()) cfg.lattice = dkc::parse_extents(f.lattice);
  if (!f.boundary.empty()) cfg.boundary = dkc::parse_boundary(f.boundary);
  if (f.mass) cfg.mass = *f.mass;
  if (f.seed) cfg.seed = *f.seed;
  if (f.tol) cfg.tol = *f.tol;
  if (f.trials) cfg.trials = *f.trials;
  if (!f.out.empty()) cfg.out = f.out;
  if (!f.csv.empty()) cfg.csv = f.csv;
  cfg.validate();
  return cfg;
}

void emit(const dkc::Report& report, const dkc::RunConfig& cfg) {
  const std::string text = report.to_json().dump(2) + "\n";
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream os(cfg.out);
    if (!os) throw dkc::UsageError("cannot write report to '" + cfg.out + "'");
    os << text;
  }
  std::cerr << report.command() << ": " << report.passed() << "/" << report.records().size() << " checks passed\n";
  for (const auto& r : report.records())
    if (!r.passed) std::cerr << "  FAIL " << r.id << " measured " << r.measured << " tolerance " << r.tolerance << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete Dirac-Kahler calculus: identity checks and spectral certification"};
  app.require_subcommand(1);
  Flags f;
  auto* verify = app.add_subcommand("verify", "run every chain, calculus and chirality identity on random forms");
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of i(d+delta) as CSV plus Fourier-symbol agreement");
  auto* chirality = app.add_subcommand("chirality", "massive triviality, massless chiral invariance, chirality flip");
  for (auto* cmd : {verify, spectrum, chirality}) add_common(cmd, f);
  spectrum->add_option("--csv", f.csv, "CSV output path (default: report path with .csv, else spectrum.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const dkc::RunConfig cfg = build_config(f);
    if (verify->parsed()) {
      const dkc::Report report = dkc::cmd_verify(cfg);
      emit(report, cfg);
      return report.all_passed() ? 0 : 1;
    }
    if (spectrum->parsed()) {
      std::vector<dkc::complex> ev;
      const dkc::Report report = dkc::cmd_spectrum(cfg, &ev);
      const std::string path = dkc::default_csv_path(cfg);
      std::ofstream csv(path);
      if (!csv) throw dkc::UsageError("cannot write spectrum to '" + path + "'");
      dkc::write_spectrum_csv(csv, ev);
      emit(report, cfg);
      return report.all_passed() ? 0 : 1;
    }
    const dkc::Report report = dkc::cmd_chirality(cfg);
    emit(report, cfg);
    return report.all_passed() ? 0 : 1;
  } catch (const dkc::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
