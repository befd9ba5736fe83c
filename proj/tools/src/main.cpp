#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "snls/error.hpp"
#include "snls/harness/config.hpp"
#include "snls/harness/experiments.hpp"
#include "snls/harness/table.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kError = 1;
constexpr int kFail = 2;

struct Subcommand {
  const char* name;
  const char* help;
};

const std::vector<Subcommand> kSubcommands = {
    {"solve", "Solve every configured member and report norms and mass drift"},
    {"uniform-bound", "L^rho_omega estimates of the X norms over (epsilon, m, A) and the data bank"},
    {"double-limit", "Distance to the (max m, min epsilon) corner under common noise"},
    {"stopping-time", "Ordering of stopping times for nested truncation levels"},
    {"stability", "Response to perturbations of the data, forcing and offset"},
    {"dispersive-check", "Fit the dispersive decay exponent of the free flow"},
    {"symmetry-check", "Unitarity, transport invariance and profile orthogonality"},
    {"noise-check", "Covariance operator and increment statistics"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Experiments for the truncated stochastic mass-critical NLS", "snls"};
  app.set_version_flag("--version", std::string("snls ") + SNLS_VERSION);
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> paths;
  std::optional<std::string> out_dir;
  std::optional<unsigned> threads;
  bool quiet = false;
  app.add_option("-c,--config", config_path, "INI run configuration")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Master seed");
  app.add_option("--paths", paths, "Monte Carlo paths");
  app.add_option("-o,--out", out_dir, "Output directory for CSV tables and the manifest");
  app.add_option("-j,--threads", threads, "Worker threads (results do not depend on this)");
  app.add_flag("-q,--quiet", quiet, "Only print the verdict line");
  app.require_subcommand(1, 1);
  for (const auto& s : kSubcommands) app.add_subcommand(s.name, s.help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    const auto extra = app.remaining();
    if (app.get_subcommands().empty() && !extra.empty()) {
      std::cerr << "error: unknown subcommand '" << extra.front() << "'\n\n" << app.help();
    } else {
      std::cerr << "error: " << e.what() << "\n\n" << app.help();
    }
    return kError;
  }
  const std::string name = app.get_subcommands().front()->get_name();

  try {
    snls::harness::RunConfig cfg;
    if (!config_path.empty()) cfg = snls::harness::load_run_config(config_path);
    if (seed) cfg.seed = *seed;
    if (paths) cfg.paths = *paths;
    if (out_dir) cfg.output_directory = *out_dir;
    if (threads) cfg.threads = *threads;
    cfg.validate();

    const auto result = snls::harness::run_experiment(name, cfg);
    snls::harness::Manifest header = {{"subcommand", name}, {"version", SNLS_VERSION}};
    for (auto& kv : cfg.entries()) header.push_back(std::move(kv));
    const auto written = snls::harness::write_outputs(result, header, cfg.output_directory,
                                                      snls::harness::utc_timestamp(), cfg.threads);
    if (!quiet) {
      for (const auto& f : result.findings) std::cout << "  " << f << "\n";
      for (const auto& w : written) std::cout << "  wrote " << w << "\n";
    }
    std::cout << name << ": " << (result.pass ? "PASS" : "FAIL") << "\n";
    return result.pass ? kPass : kFail;
  } catch (const snls::ExperimentFailure& e) {
    std::cerr << name << ": error: " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    std::cerr << name << ": error: " << e.what() << "\n";
    return kError;
  }
}
