// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--only 3,7] [--threads N] [--out DIR]
//
// Exit status 0 when every selected criterion passes, 1 otherwise.

#include <fftw3.h>
#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "snls/harness/config.hpp"
#include "snls/harness/experiments.hpp"
#include "snls/harness/initial_data.hpp"
#include "snls/harness/parallel.hpp"
#include "snls/harness/table.hpp"
#include "snls/integrator.hpp"
#include "snls/noise.hpp"
#include "snls/norms.hpp"
#include "snls/propagator.hpp"
#include "support/oracles.hpp"

using namespace snls;
using namespace snls::harness;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Options {
  unsigned threads = 1;
  fs::path out = fs::temp_directory_path() / "snls_acceptance";
};

std::string num(double v) { return format_number(v); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Mass conservation over the bank and the (m, eps) grid at dt = 1e-3.
Verdict mass_conservation(const Options&) {
  RunConfig cfg;
  cfg.dt = 1e-3;
  cfg.couplings = {1.0};
  cfg.paths = 1;
  const auto t0 = std::chrono::steady_clock::now();
  cfg.noise_enabled = false;
  const auto det = solve_experiment(cfg);
  cfg.noise_enabled = true;
  const auto sto = solve_experiment(cfg);
  const double elapsed = seconds_since(t0);
  const double d = det.metric("max_mass_drift"), s = sto.metric("max_mass_drift");
  return {d < 1e-10 && s < 1e-9 && elapsed < 120.0,
          "deterministic drift " + num(d) + ", stochastic drift " + num(s) + " over " +
              num(det.metric("runs") + sto.metric("runs")) + " runs in " + num(std::round(elapsed)) +
              " s single-threaded"};
}

// 2. Free Gaussian against the closed form on the default grid.
Verdict propagator_closed_form(const Options&) {
  const auto g = SpectralGrid::make_default();
  const Field f = Field::from_function(g, [](double x) { return Complex(std::exp(-x * x)); });
  const Field exact = Field::from_function(g, [](double x) { return oracle::free_gaussian(0.5, x); });
  const double err = lebesgue_norm(free_evolve(f, 0.5) - exact, 2.0);
  return {err < 1e-8, "L2 error at t = 0.5: " + num(err)};
}

// 3. Sup-norm decay exponent.
Verdict dispersive_decay(const Options&) {
  RunConfig cfg;
  cfg.dispersive_exponents = {1.0};
  const auto r = dispersive_suite(cfg);
  const double e = r.metric("exponent_p1");
  return {std::abs(e + 0.5) <= 0.05, "fitted exponent " + num(e) + " over t in [1, 50]"};
}

// 4. Strichartz ratios.
Verdict strichartz(const Options&) {
  const auto g = SpectralGrid::make(20.0 * M_PI, 1024);
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> center(-4, 4), width(0.5, 2), freq(-3, 3), phase(0, 2 * M_PI);
  double worst_energy = 0.0, worst_scaling = 0.0, max_ratio = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double c1 = center(gen), w1 = width(gen), k1 = freq(gen), c2 = center(gen), w2 = width(gen),
                 k2 = freq(gen), p = phase(gen);
    Field f = Field::from_function(g, [&](double x) {
      return std::exp(-(x - c1) * (x - c1) / (w1 * w1)) * std::polar(1.0, k1 * x) +
             0.5 * std::exp(-(x - c2) * (x - c2) / (w2 * w2)) * std::polar(1.0, k2 * x + p);
    });
    f *= 1.0 / lebesgue_norm(f, 2.0);
    worst_energy = std::max(worst_energy, std::abs(strichartz_ratio(f, AdmissiblePair::energy(), 1.0, 100) - 1.0));
    const double r = strichartz_ratio(f, AdmissiblePair::x2(), 1.0, 100);
    const double r3 = strichartz_ratio(3.7 * f, AdmissiblePair::x2(), 1.0, 100);
    max_ratio = std::max(max_ratio, r);
    worst_scaling = std::max(worst_scaling, std::abs(r3 / r - 1.0));
  }
  return {worst_energy <= 1e-12 && std::isfinite(max_ratio) && worst_scaling <= 1e-12,
          "(inf,2) deviation " + num(worst_energy) + ", max (5,10) ratio " + num(max_ratio) +
              ", rescaling deviation " + num(worst_scaling)};
}

// 5. Basis independence of the noise correction.
Verdict basis_independence(const Options&) {
  RunConfig cfg;
  cfg.noise.rank = 4;
  cfg.noise_check_samples = 2000;
  const auto r = noise_suite(cfg);
  const double d = r.metric("basis_rotation");
  return {d <= 1e-12, "max pointwise difference over " + std::to_string(cfg.noise_check_rotations) +
                          " rotations: " + num(d)};
}

// 6. Monte Carlo mean against the mean-field equation m_t = i m_xx - F m / 2.
Verdict mean_field(const Options& opt) {
  RunConfig cfg;
  const auto g = SpectralGrid::make(cfg.half_length, cfg.points);
  const auto noise = make_noise(cfg, g);
  const double horizon = 0.5;
  const std::size_t paths = 10000;
  const Field u0 = make_initial_data(g, {DataFamily::kGaussian, 1.0});
  SolverConfig s = member_config(cfg, 0.0, 0.0, kInfinity, 0.0, noise);
  s.horizon = horizon;

  const std::size_t n = g->size();
  std::vector<double> xs;
  for (double x = -2.0; x <= 2.0 + 1e-9; x += 0.5) xs.push_back(x);
  std::vector<std::size_t> at;
  for (double x : xs) {
    std::size_t best = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (std::abs(g->x(j) - x) < std::abs(g->x(best) - x)) best = j;
    at.push_back(best);
  }
  std::vector<std::vector<Complex>> samples(paths, std::vector<Complex>(at.size()));
  parallel_for(paths, opt.threads, [&](std::size_t p) {
    Stepper st(u0, s);
    NoiseStream stream{cfg.seed, p, 0};
    while (!st.done()) {
      const NoiseIncrement inc = sample_increment(*noise, s.dt, stream);
      st.advance(&inc);
    }
    for (std::size_t i = 0; i < at.size(); ++i) samples[p][i] = st.state()[at[i]];
  });

  // Oracle with its own transforms.
  std::vector<oracle::cplx> buf(n);
  auto* io = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_plan fwd = fftw_plan_dft_1d(static_cast<int>(n), io, io, FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_plan bwd = fftw_plan_dft_1d(static_cast<int>(n), io, io, FFTW_BACKWARD, FFTW_ESTIMATE);
  oracle::MeanFieldProblem pb;
  pb.to_spectral = [&](const std::vector<oracle::cplx>& v) {
    buf = v;
    fftw_execute(fwd);
    return buf;
  };
  pb.to_physical = [&](const std::vector<oracle::cplx>& v) {
    buf = v;
    fftw_execute(bwd);
    for (auto& z : buf) z /= static_cast<double>(n);
    return buf;
  };
  const double dk = M_PI / cfg.half_length;
  for (std::size_t j = 0; j < n; ++j) {
    const double m = j < n / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(n);
    pb.wavenumbers.push_back(m * dk);
  }
  pb.correction = noise->correction().values;
  std::vector<oracle::cplx> init(n);
  for (std::size_t j = 0; j < n; ++j) init[j] = u0[j];
  const auto mean_field = pb.to_physical(oracle::mean_field_rk4(pb, pb.to_spectral(init), horizon, 2000));
  fftw_destroy_plan(fwd);
  fftw_destroy_plan(bwd);

  double worst_z = 0.0;
  const double P = static_cast<double>(paths);
  for (std::size_t i = 0; i < at.size(); ++i) {
    Complex mean = 0.0;
    for (const auto& row : samples) mean += row[i];
    mean /= P;
    double vr = 0.0, vi = 0.0;
    for (const auto& row : samples) {
      vr += std::pow(row[i].real() - mean.real(), 2);
      vi += std::pow(row[i].imag() - mean.imag(), 2);
    }
    const double se_r = std::sqrt(vr / (P - 1) / P), se_i = std::sqrt(vi / (P - 1) / P);
    const Complex expected = mean_field[at[i]];
    worst_z = std::max({worst_z, std::abs(mean.real() - expected.real()) / se_r,
                        std::abs(mean.imag() - expected.imag()) / se_i});
  }
  return {worst_z < 3.0, "largest |mean - oracle| / SE over " + std::to_string(at.size()) +
                             " points (real and imaginary parts): " + num(worst_z) + ", P = 10000, T = 0.5"};
}

// 7. Duhamel residual.
Verdict duhamel(const Options&) {
  const auto g = SpectralGrid::make(20.0 * M_PI, 1024);
  const Field u0 = Field::from_function(g, [](double x) { return Complex(1.2 * std::exp(-x * x)); });
  SolverConfig lin;
  lin.exponent = NonlinearityExponent(0.0, 0.0);
  lin.dt = 1e-2;
  const double linear = duhamel_residual(solve(u0, lin), 1.0);
  std::vector<double> res;
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    SolverConfig c;
    c.exponent = NonlinearityExponent(1.0, 1.0);
    c.dt = dt;
    res.push_back(duhamel_residual(solve(u0, c), 1.0));
  }
  const double r1 = res[0] / res[1], r2 = res[1] / res[2];
  const bool ok = linear < 1e-12 && std::abs(r1 - 2.0) <= 0.4 && std::abs(r2 - 2.0) <= 0.4;
  return {ok, "halving ratios " + num(r1) + ", " + num(r2) + "; linear residual " + num(linear)};
}

// 8. Stopping-time lemma.
Verdict stopping_time(const Options& opt) {
  RunConfig cfg;
  cfg.paths = 256;
  cfg.threads = opt.threads;
  cfg.stopping_pairs = {{1.0, 2.0}, {2.0, 4.0}, {4.0, 8.0}};
  const auto r = stopping_time_experiment(cfg);
  return {r.pass, num(r.metric("violations")) + " violations, max pre-tau gap " + num(r.metric("max_pre_tau_gap")) +
                      ", stopped fraction " + num(r.metric("stopped_fraction_m1"))};
}

// 9. Uniform bound.
Verdict uniform_bound(const Options& opt) {
  RunConfig cfg;
  cfg.couplings = {1.0};
  cfg.threads = opt.threads;
  const auto r = uniform_bound_experiment(cfg);
  fs::create_directories(opt.out);
  write_outputs(r, {{"subcommand", "uniform-bound"}}, (opt.out / "uniform_bound").string(), "", 1);
  return {r.pass, "max " + num(r.metric("max_value")) + (r.metric("all_finite") == 1.0 ? " finite" : " NOT finite") +
                      ", worst growth excess over 2 SE " + num(r.metric("worst_growth_excess")) +
                      ", deterministic ratio " + num(r.metric("worst_det_ratio"))};
}

// 10. Double limit.
Verdict double_limit(const Options& opt) {
  RunConfig cfg;
  cfg.threads = opt.threads;
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = double_limit_experiment(cfg);
  const double elapsed = seconds_since(t0);
  return {r.pass && elapsed < 1800.0,
          std::string("row ") + (r.metric("row_monotone") == 1.0 ? "monotone" : "NOT monotone") + ", column " +
              (r.metric("column_monotone") == 1.0 ? "monotone" : "NOT monotone") + ", corner |diff| " +
              num(r.metric("corner_difference")) + " vs 2 SE " + num(2 * r.metric("corner_se")) + ", " +
              num(std::round(elapsed)) + " s"};
}

// 11. Stability.
Verdict stability(const Options&) {
  const auto r = stability_suite(RunConfig{});
  return {r.pass, "max variation across decades " + num(r.metric("worst_variation")) +
                      ", forcing vs data ratio " + num(r.metric("worst_cross_ratio"))};
}

// 12. Symmetry.
Verdict symmetry(const Options&) {
  const auto r = symmetry_suite(RunConfig{});
  return {r.pass, "unitarity " + num(r.metric("unitarity")) + ", transport " + num(r.metric("transport_invariance")) +
                      ", defect at 40 " + num(r.metric("mass_defect_40")) + ", product decay " +
                      num(r.metric("product_decay")) +
                      (r.metric("product_monotone") == 1.0 ? " (monotone)" : " (NOT monotone)")};
}

// 13. Byte-identical CSV across reruns and thread counts.
int run_cli(const std::string& args) {
  const std::string cmd = std::string(SNLS_CLI) + " -q " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Verdict reproducibility(const Options& opt) {
  const fs::path dir = opt.out / "repro";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path ini = dir / "run.ini";
  std::ofstream(ini) << "[solver]\nepsilons = 0, 0.5, 1\nscales = 1, 4, inf\ncouplings = 1\n"
                        "[data]\nnorms = 2\n[monte_carlo]\npaths = 16\n";
  std::size_t files = 0, identical = 0;
  for (const std::string sub : {"uniform-bound", "double-limit", "stopping-time"}) {
    const std::string base = "-c " + ini.string() + " --seed 77 ";
    const int a = run_cli(base + "--threads 1 " + sub + " --out " + (dir / "a").string());
    const int b = run_cli(base + "--threads 1 " + sub + " --out " + (dir / "b").string());
    const int c = run_cli(base + "--threads 8 " + sub + " --out " + (dir / "c").string());
    if (a < 0 || a == 1 || a != b || a != c) return {false, sub + " exit codes " + std::to_string(a) + "/" +
                                                                 std::to_string(b) + "/" + std::to_string(c)};
  }
  for (const auto& e : fs::directory_iterator(dir / "a")) {
    if (e.path().extension() != ".csv") continue;
    ++files;
    const std::string x = strip_timestamp(slurp(e.path()));
    if (x == strip_timestamp(slurp(dir / "b" / e.path().filename())) &&
        x == strip_timestamp(slurp(dir / "c" / e.path().filename()))) {
      ++identical;
    }
  }
  return {files > 0 && identical == files,
          std::to_string(identical) + " of " + std::to_string(files) + " CSV files identical (threads 1, 1, 8)"};
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--threads" && i + 1 < argc) {
      opt.threads = static_cast<unsigned>(std::stoul(argv[++i]));
    } else if (a == "--out" && i + 1 < argc) {
      opt.out = argv[++i];
    } else if (a == "--only" && i + 1 < argc) {
      std::stringstream s(argv[++i]);
      std::string item;
      while (std::getline(s, item, ',')) only.insert(std::stoi(item));
    } else {
      std::cerr << "usage: acceptance [--only 1,2,...] [--threads N] [--out DIR]\n";
      return 1;
    }
  }

  const std::vector<std::pair<std::string, std::function<Verdict(const Options&)>>> criteria = {
      {"mass conservation", mass_conservation},
      {"linear propagator", propagator_closed_form},
      {"dispersive decay", dispersive_decay},
      {"strichartz ratios", strichartz},
      {"noise basis independence", basis_independence},
      {"stochastic mean field", mean_field},
      {"duhamel residual", duhamel},
      {"stopping-time lemma", stopping_time},
      {"uniform bound", uniform_bound},
      {"double limit", double_limit},
      {"stability", stability},
      {"symmetry suite", symmetry},
      {"reproducibility", reproducibility},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Verdict v;
    try {
      v = criteria[i].second(opt);
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    all = all && v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " " << id << " " << criteria[i].first << ": " << v.detail
              << std::endl;
  }
  return all ? 0 : 1;
}
