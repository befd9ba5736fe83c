#include "snls/harness/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "snls/error.hpp"
#include "snls/harness/initial_data.hpp"
#include "snls/harness/monte_carlo.hpp"
#include "snls/harness/parallel.hpp"
#include "snls/integrator.hpp"
#include "snls/norms.hpp"
#include "snls/propagator.hpp"
#include "snls/rng.hpp"
#include "snls/symmetry.hpp"

namespace snls::harness {
namespace {

using std::to_string;
std::string num(double v) { return format_number(v); }
std::string num(ExtendedReal v) { return format_number(v); }

// Keeps bootstrap resampling separate from the per-cell estimates.
constexpr std::uint64_t kPairedBootstrapSalt = 0x9a1f3c5e7d2b4a68ull;

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

std::string verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

struct CheckRow {
  Table* table;
  bool* pass;
  void operator()(const std::string& check, const std::string& parameters, double value,
                  const std::string& relation, double threshold, bool ok) const {
    table->add_row({check, parameters, num(value), relation, num(threshold), verdict(ok)});
    *pass = *pass && ok;
  }
};

Table check_table(const std::string& name) {
  return Table{name, {"check", "parameters", "value", "relation", "threshold", "verdict"}, {}};
}

}  // namespace

std::shared_ptr<const NoiseModel> make_noise(const RunConfig& cfg, const GridPtr& grid) {
  if (!cfg.noise_enabled || cfg.noise.rank == 0) return nullptr;
  return std::make_shared<const NoiseModel>(build_noise_model(grid, cfg.noise));
}

SolverConfig member_config(const RunConfig& cfg, double epsilon, double mu, ExtendedReal scale,
                           double offset, std::shared_ptr<const NoiseModel> noise) {
  SolverConfig s;
  s.exponent = NonlinearityExponent(epsilon, mu);
  s.cutoff = CutoffSpec(scale, offset, cfg.profile);
  s.dt = cfg.dt;
  s.horizon = cfg.horizon;
  s.noise = std::move(noise);
  s.scheme = cfg.scheme;
  s.record_stride = 1;
  s.boundary_tolerance = cfg.boundary_tolerance;
  return s;
}

// ---------------------------------------------------------------- solve

ExperimentResult solve_experiment(const RunConfig& cfg) {
  cfg.validate();
  const GridPtr grid = SpectralGrid::make(cfg.half_length, cfg.points);
  const auto noise = make_noise(cfg, grid);
  const auto bank = make_bank(cfg.families, cfg.norms);
  const std::size_t paths = noise ? cfg.paths : 1;

  struct Cell {
    std::size_t datum;
    double mu, eps;
    ExtendedReal m;
    double a;
  };
  std::vector<Cell> cells;
  for (std::size_t d = 0; d < bank.size(); ++d)
    for (double mu : cfg.couplings)
      for (double eps : cfg.epsilons)
        for (auto m : cfg.scales)
          for (double a : cfg.offsets) cells.push_back({d, mu, eps, m, a});

  std::vector<Field> data;
  for (const auto& d : bank) data.push_back(make_initial_data(grid, d));
  std::vector<PathNorms> results(cells.size() * paths);
  parallel_for(results.size(), cfg.threads, [&](std::size_t i) {
    const Cell& c = cells[i / paths];
    const SolverConfig s = member_config(cfg, c.eps, c.mu, c.m, c.a, noise);
    results[i] = run_path(data[c.datum], s, NoiseStream{cfg.seed, i % paths, 0});
  });

  ExperimentResult out;
  out.experiment = "solve";
  Table t{"solve",
          {"data", "family", "norm", "mu", "epsilon", "m", "offset", "path", "x1", "x2", "x",
           "mass_drift", "stopping_time"},
          {}};
  const double tolerance = noise ? 1e-9 : 1e-10;
  double worst = 0.0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const Cell& c = cells[i / paths];
    const PathNorms& r = results[i];
    worst = std::max(worst, r.mass_drift);
    t.add_row({bank[c.datum].label(), family_name(bank[c.datum].family), num(bank[c.datum].norm),
               num(c.mu), num(c.eps), num(c.m), num(c.a), noise ? to_string(i % paths) : "none",
               num(r.x1), num(r.x2), num(r.x()), num(r.mass_drift),
               r.stopping_time ? num(*r.stopping_time) : "none"});
  }
  out.tables.push_back(std::move(t));
  out.pass = worst < tolerance;
  out.metrics = {{"runs", static_cast<double>(results.size())}, {"max_mass_drift", worst}};
  out.findings.push_back(to_string(results.size()) + " runs, max relative mass drift " +
                         num(worst) + " (tolerance " + num(tolerance) + ")");
  return out;
}

// ---------------------------------------------------------------- uniform bound

ExperimentResult uniform_bound_experiment(const RunConfig& cfg) {
  cfg.validate();
  const GridPtr grid = SpectralGrid::make(cfg.half_length, cfg.points);
  const auto noise = make_noise(cfg, grid);
  const auto bank = make_bank(cfg.families, cfg.norms);
  const std::size_t paths = cfg.paths;
  const std::size_t nd = bank.size(), nmu = cfg.couplings.size(), ne = cfg.epsilons.size(),
                    nm = cfg.scales.size(), na = cfg.offsets.size();
  const std::size_t cells = nd * nmu * ne * nm * na;
  const auto cell_index = [&](std::size_t d, std::size_t u, std::size_t e, std::size_t m,
                              std::size_t a) { return (((d * nmu + u) * ne + e) * nm + m) * na + a; };

  std::vector<Field> data;
  for (const auto& d : bank) data.push_back(make_initial_data(grid, d));

  struct Cell {
    std::size_t d, u, e, m, a;
  };
  std::vector<Cell> cell_list(cells);
  for (std::size_t d = 0; d < nd; ++d)
    for (std::size_t u = 0; u < nmu; ++u)
      for (std::size_t e = 0; e < ne; ++e)
        for (std::size_t m = 0; m < nm; ++m)
          for (std::size_t a = 0; a < na; ++a) cell_list[cell_index(d, u, e, m, a)] = {d, u, e, m, a};

  const auto config_of = [&](const Cell& c, std::shared_ptr<const NoiseModel> n) {
    return member_config(cfg, cfg.epsilons[c.e], cfg.couplings[c.u], cfg.scales[c.m],
                         cfg.offsets[c.a], std::move(n));
  };

  // Deterministic slice, then every (cell, path) with the noise on.
  std::vector<PathNorms> det(cells);
  const std::size_t noisy_paths = noise ? paths : 0;
  std::vector<PathNorms> sto(cells * noisy_paths);
  parallel_for(cells + sto.size(), cfg.threads, [&](std::size_t i) {
    if (i < cells) {
      det[i] = run_path(data[cell_list[i].d], config_of(cell_list[i], nullptr), {});
    } else {
      const std::size_t j = i - cells;
      const Cell& c = cell_list[j / paths];
      sto[j] = run_path(data[c.d], config_of(c, noise), NoiseStream{cfg.seed, j % paths, 0});
    }
  });
  // Without noise every path is the deterministic run.
  const auto sample = [&](std::size_t cell, std::size_t p) -> const PathNorms& {
    return noise ? sto[cell * paths + p] : det[cell];
  };

  std::vector<LomegaEstimate> est_x(cells), est_x2(cells);
  std::vector<std::vector<double>> x2_samples(cells, std::vector<double>(paths));
  bool all_finite = true;
  for (std::size_t c = 0; c < cells; ++c) {
    std::vector<double> xs(paths);
    for (std::size_t p = 0; p < paths; ++p) {
      xs[p] = sample(c, p).x();
      x2_samples[c][p] = sample(c, p).x2;
    }
    est_x[c] = summarize_lomega(xs, cfg.rho, cfg.seed, cfg.resamples);
    est_x2[c] = summarize_lomega(x2_samples[c], cfg.rho, cfg.seed, cfg.resamples);
    all_finite = all_finite && std::isfinite(est_x[c].value) && std::isfinite(est_x[c].standard_error) &&
                 std::isfinite(det[c].x());
  }

  ExperimentResult out;
  out.experiment = "uniform-bound";
  Table cells_table{"uniform_bound",
                    {"data", "family", "norm", "mu", "epsilon", "m", "offset", "paths", "rho",
                     "det_x1", "det_x2", "det_x", "lomega_x", "lomega_x_se", "lomega_x2",
                     "lomega_x2_se"},
                    {}};
  double max_value = 0.0;
  for (std::size_t c = 0; c < cells; ++c) {
    const Cell& k = cell_list[c];
    max_value = std::max({max_value, est_x[c].value, det[c].x()});
    cells_table.add_row({bank[k.d].label(), family_name(bank[k.d].family), num(bank[k.d].norm),
                         num(cfg.couplings[k.u]), num(cfg.epsilons[k.e]), num(cfg.scales[k.m]),
                         num(cfg.offsets[k.a]), to_string(paths), num(cfg.rho), num(det[c].x1),
                         num(det[c].x2), num(det[c].x()), num(est_x[c].value),
                         num(est_x[c].standard_error), num(est_x2[c].value),
                         num(est_x2[c].standard_error)});
  }

  // Growth of log X_2 as epsilon -> 0: g = -(slope of log X_2 against epsilon).
  Table growth_table{"uniform_bound_growth",
                     {"data", "family", "norm", "mu", "m", "offset", "growth", "growth_se",
                      "det_growth", "threshold", "verdict"},
                     {}};
  const auto sets = bootstrap_indices(paths, cfg.resamples, cfg.seed ^ kPairedBootstrapSalt);
  bool growth_ok = true;
  double worst_excess = -std::numeric_limits<double>::infinity();
  if (ne >= 2) {
    for (std::size_t d = 0; d < nd; ++d)
      for (std::size_t u = 0; u < nmu; ++u)
        for (std::size_t m = 0; m < nm; ++m)
          for (std::size_t a = 0; a < na; ++a) {
            std::vector<std::size_t> idx(ne);
            bool positive = true;
            for (std::size_t e = 0; e < ne; ++e) {
              idx[e] = cell_index(d, u, e, m, a);
              positive = positive && est_x2[idx[e]].value > 0.0 && det[idx[e]].x2 > 0.0;
            }
            double g = 0.0, se = 0.0, gdet = 0.0;
            if (positive) {
              std::vector<double> logs(ne), logd(ne);
              for (std::size_t e = 0; e < ne; ++e) {
                logs[e] = std::log(est_x2[idx[e]].value);
                logd[e] = std::log(det[idx[e]].x2);
              }
              g = -fit_slope(cfg.epsilons, logs);
              gdet = -fit_slope(cfg.epsilons, logd);
              std::vector<double> draw(paths), y(ne);
              se = bootstrap_error(sets, [&](const std::vector<std::size_t>& s) {
                for (std::size_t e = 0; e < ne; ++e) {
                  for (std::size_t p = 0; p < paths; ++p) draw[p] = x2_samples[idx[e]][s[p]];
                  y[e] = std::log(power_mean(draw, cfg.rho));
                }
                return -fit_slope(cfg.epsilons, y);
              });
            }
            // Roundoff floor: identical cells (mu = 0) give slopes of order 1e-16.
            const double threshold = 2.0 * se + 1e-12;
            const bool ok = g <= threshold;
            growth_ok = growth_ok && ok;
            worst_excess = std::max(worst_excess, g - threshold);
            growth_table.add_row({bank[d].label(), family_name(bank[d].family), num(bank[d].norm),
                                  num(cfg.couplings[u]), num(cfg.scales[m]), num(cfg.offsets[a]),
                                  num(g), num(se), num(gdet), num(threshold), verdict(ok)});
          }
  }

  // Deterministic max/min ratio over (epsilon, m, A) for each (datum, mu).
  Table ratio_table{"uniform_bound_ratio",
                    {"data", "family", "norm", "mu", "det_min_x", "det_max_x", "ratio", "verdict"},
                    {}};
  bool ratio_ok = true;
  double worst_ratio = 1.0;
  for (std::size_t d = 0; d < nd; ++d)
    for (std::size_t u = 0; u < nmu; ++u) {
      double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
      for (std::size_t e = 0; e < ne; ++e)
        for (std::size_t m = 0; m < nm; ++m)
          for (std::size_t a = 0; a < na; ++a) {
            const double v = det[cell_index(d, u, e, m, a)].x();
            lo = std::min(lo, v);
            hi = std::max(hi, v);
          }
      const double ratio = lo > 0.0 ? hi / lo : (hi == 0.0 ? 1.0 : std::numeric_limits<double>::infinity());
      const bool ok = ratio < 1.5;
      ratio_ok = ratio_ok && ok;
      worst_ratio = std::max(worst_ratio, ratio);
      ratio_table.add_row({bank[d].label(), family_name(bank[d].family), num(bank[d].norm),
                           num(cfg.couplings[u]), num(lo), num(hi), num(ratio), verdict(ok)});
    }

  // Direction of X_2 in m along each path (reported, not part of the verdict).
  std::size_t up = 0, down = 0, flat = 0;
  for (std::size_t d = 0; d < nd; ++d)
    for (std::size_t u = 0; u < nmu; ++u)
      for (std::size_t e = 0; e < ne; ++e)
        for (std::size_t a = 0; a < na; ++a)
          for (std::size_t p = 0; p < paths; ++p) {
            bool inc = true, dec = true, eq = true;
            for (std::size_t m = 1; m < nm; ++m) {
              const double prev = sample(cell_index(d, u, e, m - 1, a), p).x2;
              const double cur = sample(cell_index(d, u, e, m, a), p).x2;
              const double tol = 1e-12 * std::max(prev, cur);
              if (cur < prev - tol) inc = false;
              if (cur > prev + tol) dec = false;
              if (std::abs(cur - prev) > tol) eq = false;
            }
            if (eq) {
              ++flat;
            } else if (inc) {
              ++up;
            } else if (dec) {
              ++down;
            }
          }
  // m values are only ordered when the configured list is ascending.
  const bool m_sorted = std::is_sorted(cfg.scales.begin(), cfg.scales.end(), [](auto x, auto y) {
    return !x.is_infinite() && (y.is_infinite() || x.value() < y.value());
  });

  out.tables.push_back(std::move(cells_table));
  out.tables.push_back(std::move(growth_table));
  out.tables.push_back(std::move(ratio_table));
  out.pass = all_finite && growth_ok && ratio_ok;
  const double sequences = static_cast<double>(nd * nmu * ne * na * paths);
  out.metrics = {{"cells", static_cast<double>(cells)},
                 {"max_value", max_value},
                 {"all_finite", all_finite ? 1.0 : 0.0},
                 {"growth_ok", growth_ok ? 1.0 : 0.0},
                 {"worst_growth_excess", worst_excess},
                 {"ratio_ok", ratio_ok ? 1.0 : 0.0},
                 {"worst_det_ratio", worst_ratio},
                 {"x2_m_nondecreasing_fraction", m_sorted ? up / sequences : 0.0},
                 {"x2_m_nonincreasing_fraction", m_sorted ? down / sequences : 0.0},
                 {"x2_m_constant_fraction", m_sorted ? flat / sequences : 0.0}};
  out.findings.push_back("max L^rho X-norm over the grid " + num(max_value) +
                         (all_finite ? " (all finite)" : " (non-finite values present)"));
  out.findings.push_back(std::string("epsilon -> 0 growth of log X_2 within 2 SE: ") +
                         (growth_ok ? "yes" : "no") + ", worst excess over threshold " +
                         num(worst_excess));
  out.findings.push_back("deterministic max/min X ratio " + num(worst_ratio) + " (limit 1.5)");
  if (m_sorted) {
    out.findings.push_back("X_2 along increasing m per path: " + to_string(up) + " nondecreasing, " +
                           to_string(down) + " nonincreasing, " + to_string(flat) + " constant of " +
                           num(sequences));
  }
  return out;
}

// ---------------------------------------------------------------- double limit

ExperimentResult double_limit_experiment(const RunConfig& cfg) {
  cfg.validate();
  const GridPtr grid = SpectralGrid::make(cfg.half_length, cfg.points);
  const auto noise = make_noise(cfg, grid);
  const InitialDatum datum{cfg.families.front(), *std::max_element(cfg.norms.begin(), cfg.norms.end())};
  const Field u0 = make_initial_data(grid, datum);
  const double mu = *std::max_element(cfg.couplings.begin(), cfg.couplings.end());
  const double offset = cfg.offsets.front();

  std::vector<ExtendedReal> ms = cfg.scales;
  std::sort(ms.begin(), ms.end(), [](ExtendedReal x, ExtendedReal y) {
    return !x.is_infinite() && (y.is_infinite() || x.value() < y.value());
  });
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
  std::vector<double> es = cfg.epsilons;
  std::sort(es.begin(), es.end(), std::greater<>());
  es.erase(std::unique(es.begin(), es.end()), es.end());
  const std::size_t nm = ms.size(), ne = es.size(), cells = nm * ne;
  const auto idx = [&](std::size_t m, std::size_t e) { return m * ne + e; };
  const std::size_t ref = idx(nm - 1, ne - 1);

  struct PathResult {
    std::vector<double> d;  // ||u_cell - u_ref||_X per cell
    std::vector<double> x;  // ||u_cell||_X per cell
    double critical_x = 0.0;
    double critical_gap = 0.0;  // ||u_ref - u_crit||_X
  };

  const auto run_lockstep = [&](std::shared_ptr<const NoiseModel> model, std::uint64_t path) {
    PathResult r;
    try {
      std::vector<Stepper> steppers;
      steppers.reserve(cells + 1);
      for (std::size_t m = 0; m < nm; ++m)
        for (std::size_t e = 0; e < ne; ++e)
          steppers.emplace_back(u0, member_config(cfg, es[e], mu, ms[m], offset, model));
      steppers.emplace_back(u0, member_config(cfg, 0.0, mu, kInfinity, offset, model));
      const std::size_t crit = cells;
      std::vector<double> sup(cells + 1, 0.0), integral(cells + 1, 0.0);
      const auto measure = [&](bool add_integral) {
        const Field& uref = steppers[ref].state();
        for (std::size_t c = 0; c <= cells; ++c) {
          const Field gap = c == crit ? steppers[crit].state() - uref : steppers[c].state() - uref;
          sup[c] = std::max(sup[c], lebesgue_norm(gap, 2.0));
          if (add_integral) integral[c] += l10_fifth_power(gap) * cfg.dt;
        }
      };
      NoiseStream stream{cfg.seed, path, 0};
      while (!steppers.front().done()) {
        measure(true);
        if (model) {
          const NoiseIncrement inc = sample_increment(*model, cfg.dt, stream);
          for (auto& s : steppers) s.advance(&inc);
        } else {
          for (auto& s : steppers) s.advance();
        }
      }
      measure(false);
      for (const auto& s : steppers) {
        if (cfg.boundary_tolerance > 0.0 && boundary_mass_fraction(s.state()) > cfg.boundary_tolerance) {
          throw BoxTooSmall("boundary mass fraction exceeds tolerance at the horizon");
        }
      }
      r.d.resize(cells);
      r.x.resize(cells);
      for (std::size_t c = 0; c < cells; ++c) {
        r.d[c] = sup[c] + std::pow(integral[c], 0.2);
        const auto& acc = steppers[c].accumulator();
        r.x[c] = acc.sup_mass + std::pow(acc.power_integral, 0.2);
      }
      const auto& acc = steppers[crit].accumulator();
      r.critical_x = acc.sup_mass + std::pow(acc.power_integral, 0.2);
      r.critical_gap = sup[crit] + std::pow(integral[crit], 0.2);
    } catch (const ExperimentFailure&) {
      throw;
    } catch (const std::exception& e) {
      throw ExperimentFailure(e.what(), path);
    }
    return r;
  };

  const PathResult det = run_lockstep(nullptr, 0);
  const std::size_t paths = noise ? cfg.paths : 1;
  std::vector<PathResult> sto(paths);
  if (noise) {
    parallel_for(paths, cfg.threads, [&](std::size_t p) { sto[p] = run_lockstep(noise, p); });
  } else {
    sto[0] = det;
  }

  const auto estimate = [&](auto getter) {
    std::vector<double> v(paths);
    for (std::size_t p = 0; p < paths; ++p) v[p] = getter(sto[p]);
    return summarize_lomega(v, cfg.rho, cfg.seed, cfg.resamples);
  };
  std::vector<LomegaEstimate> dest(cells), xest(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    dest[c] = estimate([c](const PathResult& r) { return r.d[c]; });
    xest[c] = estimate([c](const PathResult& r) { return r.x[c]; });
  }
  const LomegaEstimate crit_x = estimate([](const PathResult& r) { return r.critical_x; });
  const LomegaEstimate crit_gap = estimate([](const PathResult& r) { return r.critical_gap; });

  const auto nonincreasing = [](const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (v[i] > v[i - 1] * (1.0 + 1e-9) + 1e-14) return false;
    }
    return true;
  };
  std::vector<double> row_mc, col_mc, row_det, col_det;
  for (std::size_t e = 0; e < ne; ++e) {
    row_mc.push_back(dest[idx(nm - 1, e)].value);
    row_det.push_back(det.d[idx(nm - 1, e)]);
  }
  for (std::size_t m = 0; m < nm; ++m) {
    col_mc.push_back(dest[idx(m, ne - 1)].value);
    col_det.push_back(det.d[idx(m, ne - 1)]);
  }
  const bool row_ok = nonincreasing(row_mc) && nonincreasing(row_det);
  const bool col_ok = nonincreasing(col_mc) && nonincreasing(col_det);
  const double corner_se = std::hypot(xest[ref].standard_error, crit_x.standard_error);
  const double corner_diff = std::abs(xest[ref].value - crit_x.value);
  const bool corner_ok = corner_diff <= 2.0 * corner_se + 1e-12 &&
                         crit_gap.value <= 2.0 * crit_gap.standard_error + 1e-12;

  ExperimentResult out;
  out.experiment = "double-limit";
  Table t{"double_limit",
          {"data", "mu", "offset", "m", "epsilon", "paths", "rho", "d_lomega", "d_se", "d_det",
           "x_lomega", "x_se", "diagonal"},
          {}};
  for (std::size_t m = 0; m < nm; ++m)
    for (std::size_t e = 0; e < ne; ++e) {
      const std::size_t c = idx(m, e);
      std::string diag;
      if (c == ref) {
        diag = "corner";
      } else if (m == nm - 1) {
        diag = "epsilon_to_0_at_max_m";
      } else if (e == ne - 1) {
        diag = "m_to_max_at_min_epsilon";
      }
      t.add_row({datum.label(), num(mu), num(offset), num(ms[m]), num(es[e]), to_string(paths),
                 num(cfg.rho), num(dest[c].value), num(dest[c].standard_error), num(det.d[c]),
                 num(xest[c].value), num(xest[c].standard_error), diag});
    }
  t.add_row({datum.label(), num(mu), num(offset), "inf", "0", to_string(paths), num(cfg.rho),
             num(crit_gap.value), num(crit_gap.standard_error), num(det.critical_gap),
             num(crit_x.value), num(crit_x.standard_error), "critical_cross_check"});
  out.tables.push_back(std::move(t));
  out.pass = row_ok && col_ok && corner_ok;
  out.metrics = {{"row_monotone", row_ok ? 1.0 : 0.0},
                 {"column_monotone", col_ok ? 1.0 : 0.0},
                 {"corner_agreement", corner_ok ? 1.0 : 0.0},
                 {"corner_difference", corner_diff},
                 {"corner_se", corner_se},
                 {"corner_d", dest[ref].value},
                 {"critical_gap", crit_gap.value}};
  out.findings.push_back(std::string("D nonincreasing as epsilon decreases at max m: ") +
                         (row_ok ? "yes" : "no"));
  out.findings.push_back(std::string("D nonincreasing as m increases at min epsilon: ") +
                         (col_ok ? "yes" : "no"));
  out.findings.push_back("corner vs critical run: |diff| " + num(corner_diff) + ", 2 SE " +
                         num(2 * corner_se) + ", gap " + num(crit_gap.value));
  return out;
}

// ---------------------------------------------------------------- stopping time

ExperimentResult stopping_time_experiment(const RunConfig& cfg) {
  cfg.validate();
  const GridPtr grid = SpectralGrid::make(cfg.half_length, cfg.points);
  const auto noise = make_noise(cfg, grid);
  const InitialDatum datum{cfg.families.front(), cfg.stopping_norm};
  const Field u0 = make_initial_data(grid, datum);
  const double mu = *std::max_element(cfg.couplings.begin(), cfg.couplings.end());
  const double offset = cfg.offsets.front();
  const double eps = cfg.stopping_epsilon;

  std::vector<double> levels;
  for (const auto& [a, b] : cfg.stopping_pairs) {
    levels.push_back(a);
    levels.push_back(b);
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  const auto level_index = [&](double m) {
    return static_cast<std::size_t>(std::lower_bound(levels.begin(), levels.end(), m) - levels.begin());
  };
  const std::size_t nl = levels.size(), np = cfg.stopping_pairs.size();
  const std::size_t paths = noise ? cfg.paths : 1;

  struct PathResult {
    std::vector<std::optional<double>> tau;  // per level
    std::vector<double> gap;                 // per pair: max L^2 gap up to tau_{m1}
  };
  std::vector<PathResult> results(paths);
  parallel_for(paths, cfg.threads, [&](std::size_t p) {
    try {
      std::vector<Stepper> steppers;
      steppers.reserve(nl);
      for (double m : levels) steppers.emplace_back(u0, member_config(cfg, eps, mu, m, offset, noise));
      PathResult& r = results[p];
      r.tau.assign(nl, std::nullopt);
      r.gap.assign(np, 0.0);
      const auto observe = [&] {
        for (std::size_t l = 0; l < nl; ++l) {
          if (!r.tau[l] && offset + steppers[l].accumulator().power_integral >= levels[l]) {
            r.tau[l] = steppers[l].state().time();
          }
        }
        for (std::size_t q = 0; q < np; ++q) {
          const std::size_t a = level_index(cfg.stopping_pairs[q].first);
          const std::size_t b = level_index(cfg.stopping_pairs[q].second);
          // Up to and including tau_{m1}; the step that reaches tau counts.
          const bool before = !r.tau[a] || *r.tau[a] >= steppers[a].state().time();
          if (before) {
            r.gap[q] = std::max(r.gap[q], lebesgue_norm(steppers[a].state() - steppers[b].state(), 2.0));
          }
        }
      };
      observe();
      NoiseStream stream{cfg.seed, p, 0};
      while (!steppers.front().done()) {
        if (noise) {
          const NoiseIncrement inc = sample_increment(*noise, cfg.dt, stream);
          for (auto& s : steppers) s.advance(&inc);
        } else {
          for (auto& s : steppers) s.advance();
        }
        observe();
      }
    } catch (const std::exception& e) {
      throw ExperimentFailure(e.what(), p);
    }
  });

  ExperimentResult out;
  out.experiment = "stopping-time";
  Table t{"stopping_time",
          {"data", "mu", "epsilon", "offset", "m1", "m2", "path", "tau_m1", "tau_m2", "stopped_m1",
           "stopped_m2", "ordered", "max_pre_tau_gap"},
          {}};
  std::size_t violations = 0, stopped = 0;
  double worst_gap = 0.0;
  for (std::size_t q = 0; q < np; ++q) {
    const auto [m1, m2] = cfg.stopping_pairs[q];
    const std::size_t a = level_index(m1), b = level_index(m2);
    for (std::size_t p = 0; p < paths; ++p) {
      const auto& r = results[p];
      const double t1 = r.tau[a].value_or(cfg.horizon), t2 = r.tau[b].value_or(cfg.horizon);
      const bool ordered = t1 <= t2;
      violations += ordered ? 0 : 1;
      stopped += r.tau[a] ? 1 : 0;
      worst_gap = std::max(worst_gap, r.gap[q]);
      t.add_row({datum.label(), num(mu), num(eps), num(offset), num(m1), num(m2),
                 noise ? to_string(p) : "none", num(t1), num(t2), r.tau[a] ? "yes" : "no",
                 r.tau[b] ? "yes" : "no", ordered ? "yes" : "no", num(r.gap[q])});
    }
  }
  out.tables.push_back(std::move(t));
  out.pass = violations == 0 && worst_gap < 1e-10;
  const double total = static_cast<double>(np * paths);
  out.metrics = {{"violations", static_cast<double>(violations)},
                 {"max_pre_tau_gap", worst_gap},
                 {"stopped_fraction_m1", stopped / total}};
  out.findings.push_back(to_string(violations) + " ordering violations over " + num(total) +
                         " (pair, path) combinations");
  out.findings.push_back("max L^2 gap before tau_m1: " + num(worst_gap));
  out.findings.push_back("fraction of runs with tau_m1 < T: " + num(stopped / total));
  return out;
}

// ---------------------------------------------------------------- stability

ExperimentResult stability_suite(const RunConfig& cfg) {
  cfg.validate();
  const GridPtr grid = SpectralGrid::make(cfg.half_length, cfg.points);
  const auto noise = make_noise(cfg, grid);
  const InitialDatum datum{cfg.families.front(), cfg.norms.front()};
  const Field w0 = make_initial_data(grid, datum);
  const double mu = *std::max_element(cfg.couplings.begin(), cfg.couplings.end());
  Field bump = Field::from_function(grid, [](double x) { return Complex(x * std::exp(-x * x)); });
  bump *= 1.0 / lebesgue_norm(bump, 2.0);

  enum Channel { kInitial, kForcing, kOffset };
  const char* names[] = {"initial_data", "forcing", "offset"};
  const bool offset_active = !cfg.stability_scale.is_infinite();

  ExperimentResult out;
  out.experiment = "stability";
  Table t{"stability",
          {"data", "mu", "epsilon", "m", "offset", "mode", "channel", "delta", "initial_gap",
           "forcing_norm", "offset_gap", "response_x1", "response_x2", "response", "ratio"},
          {}};
  Table summary{"stability_summary",
                {"mode", "channel", "min_ratio", "max_ratio", "variation", "verdict"},
                {}};

  std::vector<std::pair<std::string, std::shared_ptr<const NoiseModel>>> modes = {{"deterministic", nullptr}};
  if (noise) modes.emplace_back("noise_path_0", noise);
  bool pass = true;
  double worst_variation = 1.0, worst_cross = 1.0;
  for (const auto& [mode, model] : modes) {
    const SolverConfig cw = member_config(cfg, cfg.stability_epsilon, mu, cfg.stability_scale,
                                          cfg.stability_offset, model);
    std::vector<std::vector<double>> ratios(3);
    for (int ch = kInitial; ch <= kOffset; ++ch) {
      if (ch == kOffset && !offset_active) continue;
      for (double delta : cfg.stability_deltas) {
        SolverConfig cv = cw;
        Field v0 = w0;
        Forcing forcing;
        if (ch == kInitial) v0 += delta * bump;
        if (ch == kForcing) {
          const Field e = (delta / cfg.horizon) * bump;
          forcing = [e](double) { return e; };
        }
        if (ch == kOffset) cv.cutoff = CutoffSpec(cfg.stability_scale, cfg.stability_offset + delta, cfg.profile);
        const StabilityReport rep = stability_experiment(w0, v0, forcing, cw, cv, NoiseStream{cfg.seed, 0, 0});
        ratios[ch].push_back(rep.ratio);
        t.add_row({datum.label(), num(mu), num(cfg.stability_epsilon), num(cfg.stability_scale),
                   num(cfg.stability_offset), mode, names[ch], num(delta), num(rep.initial_gap),
                   num(rep.forcing_norm), num(rep.offset_gap), num(rep.response_x1),
                   num(rep.response_x2), num(rep.response), num(rep.ratio)});
      }
      const auto [lo, hi] = std::minmax_element(ratios[ch].begin(), ratios[ch].end());
      const double variation = *lo > 0.0 ? *hi / *lo : std::numeric_limits<double>::infinity();
      const bool ok = variation < 2.0;
      pass = pass && ok;
      worst_variation = std::max(worst_variation, variation);
      summary.add_row({mode, names[ch], num(*lo), num(*hi), num(variation), verdict(ok)});
    }
    // Forcing against initial-data ratio at the middle decade.
    const std::size_t mid = cfg.stability_deltas.size() / 2;
    const double a = ratios[kForcing][mid], b = ratios[kInitial][mid];
    const double cross = a > 0.0 && b > 0.0 ? std::max(a / b, b / a) : std::numeric_limits<double>::infinity();
    const bool ok = cross < 3.0;
    pass = pass && ok;
    worst_cross = std::max(worst_cross, cross);
    summary.add_row({mode, "forcing_vs_initial_data", num(std::min(a, b)), num(std::max(a, b)),
                     num(cross), verdict(ok)});
  }
  out.tables.push_back(std::move(t));
  out.tables.push_back(std::move(summary));
  out.pass = pass;
  out.metrics = {{"worst_variation", worst_variation}, {"worst_cross_ratio", worst_cross}};
  out.findings.push_back("largest max/min response ratio across decades " + num(worst_variation) +
                         " (limit 2)");
  out.findings.push_back("forcing vs initial-data ratio " + num(worst_cross) + " (limit 3)");
  if (!offset_active) out.findings.push_back("offset channel skipped: truncation scale is infinite");
  return out;
}

// ---------------------------------------------------------------- dispersive

ExperimentResult dispersive_suite(const RunConfig& cfg) {
  cfg.validate();
  const GridPtr grid = SpectralGrid::make(cfg.dispersive_half_length, cfg.dispersive_points);
  const Field f = Field::from_function(grid, [](double x) { return Complex(std::exp(-x * x)); });
  ExperimentResult out;
  out.experiment = "dispersive-check";
  Table t{"dispersive_samples", {"p", "t", "norm_lpprime"}, {}};
  Table fit{"dispersive_fit",
            {"p", "t_min", "t_max", "samples", "fitted_exponent", "expected_exponent", "fit_residual",
             "tolerance", "verdict"},
            {}};
  bool pass = true;
  for (double p : cfg.dispersive_exponents) {
    const auto rep = check_dispersive_decay(f, p, cfg.dispersive_t_min, cfg.dispersive_t_max,
                                            cfg.dispersive_samples);
    for (std::size_t i = 0; i < rep.times.size(); ++i) t.add_row({num(p), num(rep.times[i]), num(rep.norms[i])});
    const double tol = p == 2.0 ? 0.02 : 0.05;
    const bool ok = std::abs(rep.fitted_exponent - rep.expected_exponent) <= tol;
    pass = pass && ok;
    fit.add_row({num(p), num(cfg.dispersive_t_min), num(cfg.dispersive_t_max),
                 to_string(cfg.dispersive_samples), num(rep.fitted_exponent),
                 num(rep.expected_exponent), num(rep.fit_residual), num(tol), verdict(ok)});
    out.metrics.emplace_back("exponent_p" + num(p), rep.fitted_exponent);
    out.findings.push_back("p = " + num(p) + ": fitted exponent " + num(rep.fitted_exponent) +
                           ", expected " + num(rep.expected_exponent));
  }
  out.tables.push_back(std::move(fit));
  out.tables.push_back(std::move(t));
  out.pass = pass;
  return out;
}

// ---------------------------------------------------------------- symmetry

ExperimentResult symmetry_suite(const RunConfig& cfg) {
  cfg.validate();
  const GridPtr grid = SpectralGrid::make(cfg.symmetry_half_length, cfg.symmetry_points);
  const auto gaussian = [&](double center, double amplitude) {
    return Field::from_function(grid, [=](double x) {
      return Complex(amplitude * std::exp(-(x - center) * (x - center)));
    });
  };
  ExperimentResult out;
  out.experiment = "symmetry-check";
  Table t = check_table("symmetry");
  bool pass = true;
  CheckRow row{&t, &pass};

  // Unitarity and inverse over random parameters in the guarded box.
  const Field f = Field::from_function(grid, [](double x) {
    return std::exp(-(x - 0.5) * (x - 0.5)) * std::polar(1.0, 0.3 * x) + 0.5 * std::exp(-(x + 1) * (x + 1));
  });
  auto gen = substream(cfg.seed, 0x5E77ull, 0);
  std::uniform_real_distribution<double> ux0(-10, 10), uxi(-4, 4), ulam(std::log(0.5), std::log(2.0)), ut0(-1, 1);
  double worst_mass = 0.0, worst_inverse = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double a = ux0(gen), b = uxi(gen), c = std::exp(ulam(gen)), d = ut0(gen);
    const SymmetryParams p{a, b, c, d};
    const Field h = group_apply(f, p);
    worst_mass = std::max(worst_mass, std::abs(mass(h) / mass(f) - 1.0));
    worst_inverse = std::max(worst_inverse, lebesgue_norm(group_apply_inverse(h, p) - f, 2.0));
  }
  row("unitarity", "20 random parameter sets", worst_mass, "<=", 1e-10, worst_mass <= 1e-10);
  row("inverse", "20 random parameter sets", worst_inverse, "<=", 1e-9, worst_inverse <= 1e-9);

  // Strichartz invariance of transported solutions.
  SolverConfig base;
  base.dt = 1e-2;
  base.horizon = 0.5;
  base.boundary_tolerance = cfg.boundary_tolerance;
  const Trajectory psi = solve(gaussian(0.0, 1.2), base);
  const double x2 = x2_norm(psi);
  double worst_transport = 0.0;
  for (double lambda : {0.5, 1.0, 2.0})
    for (double xi : {-4.0, 0.0, 4.0}) {
      const Trajectory phi = transported_solution(psi, {1.0, xi, lambda, 0.3});
      worst_transport = std::max(worst_transport, std::abs(x2_norm(phi) / x2 - 1.0));
    }
  row("strichartz_invariance", "lambda in {1/2,1,2}, xi in {-4,0,4}", worst_transport, "<=", 1e-6,
      worst_transport <= 1e-6);

  // Transported eps = 0 solution versus a direct solve; eps = 0.5 breaks it.
  const SymmetryParams tp{1.0, 1.0, 1.5, 0.0};
  const auto covariance_gap = [&](double eps) {
    SolverConfig c = base;
    c.exponent = NonlinearityExponent(eps, 1.0);
    const Trajectory ps = solve(gaussian(0.0, 1.5), c);
    const Trajectory ph = transported_solution(ps, tp);
    SolverConfig direct = c;
    direct.dt = tp.lambda0 * tp.lambda0 * c.dt;
    direct.horizon = tp.lambda0 * tp.lambda0 * c.horizon;
    const Field start = group_apply(ps.initial(), tp);
    const Field solved = solve(start, direct).final();
    SolverConfig fine = direct;
    fine.dt /= 2;
    const double tol = lebesgue_norm(solve(start, fine).final() - solved, 2.0);
    return std::pair{lebesgue_norm(ph.final() - solved, 2.0), tol};
  };
  const auto [gap0, tol0] = covariance_gap(0.0);
  row("scale_covariance_eps0", "x0=1 xi0=1 lambda0=1.5", gap0, "<", 5 * tol0, gap0 < 5 * tol0);
  const auto [gap5, tol5] = covariance_gap(0.5);
  row("scale_covariance_broken_eps0.5", "x0=1 xi0=1 lambda0=1.5", gap5, ">", 5 * tol5, gap5 > 5 * tol5);

  // Profile diagnostics on the run grid, which has room for wide separations.
  const GridPtr wide = SpectralGrid::make(cfg.half_length, cfg.points);
  const auto profile = [&](double amplitude) {
    return Field::from_function(wide, [=](double x) { return Complex(amplitude * std::exp(-x * x)); });
  };

  // Mass decoupling.
  const auto two = [&](std::function<SymmetryParams(int)> second) {
    ProfileSet ps;
    ps.profiles = {profile(1.0), profile(1.0)};
    ps.parameters = {[](int) { return SymmetryParams{}; }, std::move(second)};
    return ps;
  };
  ProfileSet split;
  split.profiles = {profile(1.0), profile(1.0)};
  split.parameters = {[](int n) { return SymmetryParams{-0.5 * n, 0, 1, 0}; },
                      [](int n) { return SymmetryParams{0.5 * n, 0, 1, 0}; }};
  const double defect40 = mass_defect(split, 40);
  row("mass_defect", "two Gaussians at separation 40", defect40, "<", 1e-3, defect40 < 1e-3);
  const std::vector<std::pair<std::string, std::function<SymmetryParams(int)>>> channels = {
      {"translation", [](int n) { return SymmetryParams{static_cast<double>(n), 0, 1, 0}; }},
      {"modulation", [](int n) { return SymmetryParams{0, 0.5 * n, 1, 0}; }},
      {"scale", [](int n) { return SymmetryParams{0, 0, std::pow(2.0, 0.5 * n), 0}; }},
      {"time", [](int n) { return SymmetryParams{0, 0, 1, 0.5 * n}; }},
  };
  for (const auto& [name, params] : channels) {
    const ProfileSet ps = two(params);
    int decreasing = 0;
    double prev = mass_defect(ps, 0);
    for (int n = 1; n <= 6; ++n) {
      const double d = mass_defect(ps, n);
      decreasing += d < prev ? 1 : 0;
      prev = d;
    }
    row("mass_defect_monotone_" + name, "n = 0..6", decreasing, "==", 6, decreasing == 6);
  }

  // Strichartz-product orthogonality under translation and scale separation.
  ProfileSet apart;
  apart.profiles = {profile(1.0), profile(1.0)};
  apart.parameters = {[](int n) { return SymmetryParams{-2.0 * n, 0, 1, 0}; },
                      [](int n) { return SymmetryParams{2.0 * n, 0, 1, 0}; }};
  const double self = pairwise_strichartz_product(apart, 0, 0, 1, 1.0, 100);
  row("self_product_positive", "j = j'", self, ">", 0.0, self > 0.0);
  std::vector<double> prod;
  for (int n = 1; n <= 10; ++n) prod.push_back(pairwise_strichartz_product(apart, 0, 1, n, 1.0, 100));
  int mono = 0;
  for (std::size_t i = 1; i < prod.size(); ++i) mono += prod[i] < prod[i - 1] ? 1 : 0;
  row("product_monotone_translation", "separation 4n, n = 1..10", mono, "==", 9, mono == 9);
  row("product_decay_translation", "n = 10 relative to n = 1", prod.back() / prod.front(), "<", 0.1,
      prod.back() / prod.front() < 0.1);
  const ProfileSet scaled = two([](int n) { return SymmetryParams{0, 0, std::pow(2.0, n), 0}; });
  std::vector<double> sprod;
  for (int n = 0; n <= 3; ++n) sprod.push_back(pairwise_strichartz_product(scaled, 0, 1, n, 1.0, 100));
  int smono = 0;
  for (std::size_t i = 1; i < sprod.size(); ++i) smono += sprod[i] < sprod[i - 1] ? 1 : 0;
  row("product_monotone_scale", "lambda ratio 2^n, n = 0..3", smono, "==", 3, smono == 3);

  out.tables.push_back(std::move(t));
  out.pass = pass;
  out.metrics = {{"unitarity", worst_mass},
                 {"inverse", worst_inverse},
                 {"transport_invariance", worst_transport},
                 {"mass_defect_40", defect40},
                 {"product_decay", prod.back() / prod.front()},
                 {"product_monotone", mono == 9 && smono == 3 ? 1.0 : 0.0}};
  for (const auto& r : out.tables.front().rows) {
    if (r.back() == "FAIL") out.findings.push_back("failed: " + r.front());
  }
  if (pass) out.findings.push_back("all symmetry checks passed");
  return out;
}

// ---------------------------------------------------------------- noise

ExperimentResult noise_suite(const RunConfig& cfg) {
  cfg.validate();
  const GridPtr grid = SpectralGrid::make(cfg.half_length, cfg.points);
  ExperimentResult out;
  out.experiment = "noise-check";
  Table t = check_table("noise");
  bool pass = true;
  CheckRow row{&t, &pass};

  NoiseModelParams params = cfg.noise;
  if (params.rank == 0) params.rank = 1;
  const NoiseModel model = build_noise_model(grid, params);
  const std::size_t rank = model.rank();

  // Basis independence of F_Phi under random rotations of a rank <= 4 model.
  NoiseModelParams small = params;
  small.rank = std::min<std::size_t>(rank, 4);
  const NoiseModel m4 = build_noise_model(grid, small);
  auto gen = substream(cfg.seed, 0x0F1Cull, 0);
  std::normal_distribution<double> n01;
  double worst_rotation = 0.0;
  const std::size_t r4 = m4.rank();
  for (std::size_t trial = 0; trial < cfg.noise_check_rotations; ++trial) {
    std::vector<std::vector<double>> q(r4, std::vector<double>(r4));
    for (auto& v : q)
      for (auto& x : v) x = n01(gen);
    for (std::size_t i = 0; i < r4; ++i)
      for (int pass2 = 0; pass2 < 2; ++pass2) {
        for (std::size_t j = 0; j < i; ++j) {
          double c = 0;
          for (std::size_t k = 0; k < r4; ++k) c += q[i][k] * q[j][k];
          for (std::size_t k = 0; k < r4; ++k) q[i][k] -= c * q[j][k];
        }
        double nrm = 0;
        for (double x : q[i]) nrm += x * x;
        for (double& x : q[i]) x /= std::sqrt(nrm);
      }
    RealField fr(grid);
    for (std::size_t i = 0; i < r4; ++i) {
      RealField e(grid);
      for (std::size_t k = 0; k < r4; ++k)
        for (std::size_t j = 0; j < e.size(); ++j) e.values[j] += q[i][k] * m4.input_basis()[k].values[j];
      const RealField img = m4.apply(e);
      for (std::size_t j = 0; j < fr.size(); ++j) fr.values[j] += img.values[j] * img.values[j];
    }
    for (std::size_t j = 0; j < fr.size(); ++j)
      worst_rotation = std::max(worst_rotation, std::abs(fr.values[j] - m4.correction().values[j]));
  }
  row("basis_independence", "rank " + to_string(r4) + ", " + to_string(cfg.noise_check_rotations) +
                                " random rotations",
      worst_rotation, "<=", 1e-12, worst_rotation <= 1e-12);

  // Positivity, boundary decay, weighted norms.
  const RealField& fphi = model.correction();
  const double peak = fphi.max_abs();
  double edge = 0.0, minimum = 0.0;
  for (std::size_t j = 0; j < fphi.size(); ++j) {
    minimum = std::min(minimum, fphi.values[j]);
    if (std::abs(grid->x(j)) > 0.875 * grid->half_length()) edge = std::max(edge, fphi.values[j]);
  }
  row("correction_nonnegative", "min F_Phi", minimum, ">=", 0.0, minimum >= 0.0);
  row("correction_boundary_decay", "max F_Phi in outer eighth / peak", edge / peak, "<", 1e-12,
      edge / peak < 1e-12);
  double worst_weighted = 0.0;
  for (const auto& g : model.modes()) {
    worst_weighted = std::max(worst_weighted, weighted_sobolev_norm(g, model.weight_exponent(), model.smoothness()));
  }
  row("weighted_norms_finite", "max over modes", worst_weighted, "<", std::numeric_limits<double>::max(),
      std::isfinite(worst_weighted));

  // Pointwise increment statistics at the centre.
  const std::size_t x0 = grid->size() / 2;
  const std::size_t n = cfg.noise_check_samples;
  const auto moments = [&](double dt, std::uint64_t salt) {
    double s1 = 0, s2 = 0, s4 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      NoiseStream st{cfg.seed ^ salt, i, 0};
      const double w = sample_increment(model, dt, st).delta_w.values[x0];
      s1 += w;
      s2 += w * w;
      s4 += w * w * w * w;
    }
    const double N = static_cast<double>(n);
    return std::array<double, 4>{s1 / N, s2 / N, std::sqrt(s2 / N / N), std::sqrt((s4 / N - s2 * s2 / N / N) / N)};
  };
  const double dt = cfg.dt;
  double analytic = 0.0;
  for (std::size_t k = 0; k < rank; ++k) {
    const double v = model.singular_values()[k] * model.modes()[k].values[x0];
    analytic += v * v;
  }
  analytic *= dt;
  const auto m1 = moments(dt, 0x11);
  row("increment_mean", "x = 0, " + to_string(n) + " samples", std::abs(m1[0]), "<", 3 * m1[2],
      std::abs(m1[0]) < 3 * m1[2]);
  row("increment_variance", "x = 0, dt " + num(dt), std::abs(m1[1] - analytic), "<", 3 * m1[3],
      std::abs(m1[1] - analytic) < 3 * m1[3]);
  const auto m4dt = moments(4 * dt, 0x22);
  const double ratio = m4dt[1] / m1[1];
  const double ratio_se = ratio * std::hypot(m1[3] / m1[1], m4dt[3] / m4dt[1]);
  row("variance_scaling", "Var(4 dt) / Var(dt) - 4", std::abs(ratio - 4.0), "<", 3 * ratio_se,
      std::abs(ratio - 4.0) < 3 * ratio_se);
  {
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
      NoiseStream st{cfg.seed ^ 0x33, i, 0};
      const double a = sample_increment(model, dt, st).delta_w.values[x0];
      const double b = sample_increment(model, dt, st).delta_w.values[x0];
      sxy += a * b;
      sxx += a * a;
      syy += b * b;
    }
    const double N = static_cast<double>(n);
    const double cov = sxy / N, se = std::sqrt(sxx / N * syy / N / N);
    row("step_independence", "consecutive steps, x = 0", std::abs(cov), "<", 4 * se, std::abs(cov) < 4 * se);
  }

  // E e^{-i W(T, x)} = e^{-F_Phi(x) T / 2} at a few points, W summed from
  // the increments a path would consume.
  {
    const double horizon = 0.5;
    const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
    const std::size_t paths = std::min<std::size_t>(n, 10000);
    const std::vector<std::size_t> points = {x0, x0 + grid->size() / 64, x0 - grid->size() / 32};
    std::vector<std::vector<Complex>> samples(points.size(), std::vector<Complex>(paths));
    parallel_for(paths, cfg.threads, [&](std::size_t p) {
      NoiseStream st{cfg.seed ^ 0x44, p, 0};
      std::vector<double> w(points.size(), 0.0);
      for (std::size_t s = 0; s < steps; ++s) {
        const NoiseIncrement inc = sample_increment(model, dt, st);
        for (std::size_t i = 0; i < points.size(); ++i) w[i] += inc.delta_w.values[points[i]];
      }
      for (std::size_t i = 0; i < points.size(); ++i) samples[i][p] = std::polar(1.0, -w[i]);
    });
    for (std::size_t i = 0; i < points.size(); ++i) {
      Complex mean = 0.0;
      for (auto z : samples[i]) mean += z;
      mean /= static_cast<double>(paths);
      double vr = 0, vi = 0;
      for (auto z : samples[i]) {
        vr += (z.real() - mean.real()) * (z.real() - mean.real());
        vi += (z.imag() - mean.imag()) * (z.imag() - mean.imag());
      }
      const double P = static_cast<double>(paths);
      const double se_r = std::sqrt(vr / (P - 1) / P), se_i = std::sqrt(vi / (P - 1) / P);
      const double expected = std::exp(-0.5 * fphi.values[points[i]] * horizon);
      const std::string where = "x = " + num(grid->x(points[i])) + ", T = 0.5, " + to_string(paths) + " paths";
      row("ito_drift_real", where, std::abs(mean.real() - expected), "<", 3 * se_r,
          std::abs(mean.real() - expected) < 3 * se_r);
      row("ito_drift_imag", where, std::abs(mean.imag()), "<", 3 * se_i + 1e-15,
          std::abs(mean.imag()) < 3 * se_i + 1e-15);
    }
  }

  out.tables.push_back(std::move(t));
  out.pass = pass;
  out.metrics = {{"basis_rotation", worst_rotation}, {"variance_ratio", ratio}};
  for (const auto& r : out.tables.front().rows) {
    if (r.back() == "FAIL") out.findings.push_back("failed: " + r.front() + " (" + r[1] + ")");
  }
  if (pass) out.findings.push_back("all noise checks passed");
  return out;
}

ExperimentResult run_experiment(const std::string& name, const RunConfig& cfg) {
  if (name == "solve") return solve_experiment(cfg);
  if (name == "uniform-bound") return uniform_bound_experiment(cfg);
  if (name == "double-limit") return double_limit_experiment(cfg);
  if (name == "stopping-time") return stopping_time_experiment(cfg);
  if (name == "stability") return stability_suite(cfg);
  if (name == "dispersive-check") return dispersive_suite(cfg);
  if (name == "symmetry-check") return symmetry_suite(cfg);
  if (name == "noise-check") return noise_suite(cfg);
  throw InvalidParameter("unknown experiment '" + name + "'");
}

}  // namespace snls::harness
