#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "snls/harness/initial_data.hpp"
#include "snls/noise.hpp"
#include "snls/nonlinearity.hpp"
#include "snls/norms.hpp"
#include "snls/solver_config.hpp"

namespace snls::harness {

/// Everything an experiment run needs. Defaults describe a desk-scale run.
struct RunConfig {
  // [grid]
  double half_length = 20.0 * 3.141592653589793;
  std::size_t points = 1024;

  // [solver]
  double dt = 1e-2;
  double horizon = 1.0;
  Scheme scheme = Scheme::kStrang;
  CutoffProfile profile = CutoffProfile::kBump;
  std::vector<double> epsilons = {0.0, 0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 1.0};
  std::vector<ExtendedReal> scales = {0.5, 1.0, 2.0, 4.0, 8.0, kInfinity};
  std::vector<double> couplings = {0.0, 0.5, 1.0};
  std::vector<double> offsets = {0.0};
  double boundary_tolerance = 1e-10;

  // [data]
  std::vector<DataFamily> families = {DataFamily::kGaussian, DataFamily::kModulatedGaussian,
                                      DataFamily::kTwoBump};
  std::vector<double> norms = {1.0, 2.0};

  // [noise]
  bool noise_enabled = true;
  NoiseModelParams noise;

  // [monte_carlo]
  std::size_t paths = 64;
  double rho = 5.0;
  std::uint64_t seed = 20240601;
  std::size_t resamples = 200;
  unsigned threads = 1;

  // [output]
  std::string output_directory = "results";

  // [stopping_time]
  std::vector<std::pair<double, double>> stopping_pairs = {{1.0, 2.0}, {2.0, 4.0}, {4.0, 8.0}};
  double stopping_epsilon = 0.5;
  double stopping_norm = 2.0;

  // [stability]
  double stability_epsilon = 0.5;
  ExtendedReal stability_scale = 1.0;
  double stability_offset = 1.2;
  std::vector<double> stability_deltas = {1e-3, 1e-4, 1e-5};

  // [dispersive]
  double dispersive_half_length = 256.0 * 3.141592653589793;
  std::size_t dispersive_points = 16384;
  std::vector<double> dispersive_exponents = {1.0, 1.5, 2.0};
  double dispersive_t_min = 1.0;
  double dispersive_t_max = 50.0;
  std::size_t dispersive_samples = 40;

  // [symmetry]
  double symmetry_half_length = 16.0 * 3.141592653589793;
  std::size_t symmetry_points = 2048;

  // [noise_check]
  std::size_t noise_check_samples = 100000;
  std::size_t noise_check_rotations = 20;

  /// Throws ConfigError naming the offending field.
  void validate() const;
  /// Canonical one-line-per-key rendering used in output headers.
  std::vector<std::pair<std::string, std::string>> entries() const;
};

/// Parses INI text. Unknown sections or keys, malformed values and invalid
/// combinations raise ConfigError with the section, key and line.
RunConfig parse_run_config(const std::string& text, const std::string& source = "<string>");
RunConfig load_run_config(const std::string& path);

/// Shortest round-trip decimal rendering; "inf" for infinity.
std::string format_number(double v);
std::string format_number(ExtendedReal v);

}  // namespace snls::harness
