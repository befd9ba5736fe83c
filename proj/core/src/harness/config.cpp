#include "snls/harness/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <deque>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "snls/error.hpp"

namespace snls::harness {
namespace {

namespace pt = boost::property_tree;

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> split_list(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Locates "key" inside "[section]" for diagnostics; 0 when not found.
std::size_t find_line(const std::string& text, const std::string& section, const std::string& key) {
  std::istringstream in(text);
  std::string line, current;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    const std::string t = trim(line);
    if (t.empty() || t[0] == ';' || t[0] == '#') continue;
    if (t.front() == '[' && t.back() == ']') {
      current = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (current == section && eq != std::string::npos && trim(t.substr(0, eq)) == key) return n;
  }
  return 0;
}

class Reader {
 public:
  Reader(const pt::ptree& tree, const std::string& text, const std::string& source)
      : tree_(tree), text_(text), source_(source) {}

  [[noreturn]] void fail(const std::string& section, const std::string& key,
                         const std::string& message) const {
    const std::size_t line = find_line(text_, section, key);
    std::string where = source_;
    if (line > 0) where += ":" + std::to_string(line);
    throw ConfigError(where + ": " + section + "." + key + ": " + message);
  }

  const std::string* raw(const std::string& section, const std::string& key) {
    known_[section].insert(key);
    const auto sec = tree_.get_child_optional(section);
    if (!sec) return nullptr;
    const auto value = sec->get_child_optional(key);
    if (!value) return nullptr;
    storage_.push_back(trim(value->data()));
    return &storage_.back();
  }

  double number(const std::string& section, const std::string& key, const std::string& s) const {
    const std::string t = trim(s);
    if (t == "inf" || t == "infinity") return std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
      fail(section, key, "'" + t + "' is not a number");
    }
    return v;
  }

  void read(const std::string& section, const std::string& key, double& out) {
    if (const auto* s = raw(section, key)) {
      out = number(section, key, *s);
      if (!std::isfinite(out)) fail(section, key, "must be finite");
    }
  }

  void read(const std::string& section, const std::string& key, ExtendedReal& out) {
    if (const auto* s = raw(section, key)) out = ExtendedReal(number(section, key, *s));
  }

  template <typename Int>
  void read_integer(const std::string& section, const std::string& key, Int& out) {
    if (const auto* s = raw(section, key)) {
      Int v{};
      const auto [ptr, ec] = std::from_chars(s->data(), s->data() + s->size(), v);
      if (ec != std::errc() || ptr != s->data() + s->size() || s->empty()) {
        fail(section, key, "'" + *s + "' is not a nonnegative integer");
      }
      out = v;
    }
  }

  void read(const std::string& section, const std::string& key, std::vector<double>& out) {
    if (const auto* s = raw(section, key)) {
      out.clear();
      for (const auto& item : split_list(*s)) {
        const double v = number(section, key, item);
        if (!std::isfinite(v)) fail(section, key, "entries must be finite");
        out.push_back(v);
      }
      if (out.empty()) fail(section, key, "list is empty");
    }
  }

  void read(const std::string& section, const std::string& key, std::vector<ExtendedReal>& out) {
    if (const auto* s = raw(section, key)) {
      out.clear();
      for (const auto& item : split_list(*s)) out.emplace_back(number(section, key, item));
      if (out.empty()) fail(section, key, "list is empty");
    }
  }

  void read(const std::string& section, const std::string& key, std::string& out) {
    if (const auto* s = raw(section, key)) out = *s;
  }

  void read(const std::string& section, const std::string& key, bool& out) {
    if (const auto* s = raw(section, key)) {
      if (*s == "true" || *s == "yes" || *s == "1" || *s == "on") {
        out = true;
      } else if (*s == "false" || *s == "no" || *s == "0" || *s == "off") {
        out = false;
      } else {
        fail(section, key, "'" + *s + "' is not a boolean");
      }
    }
  }

  void read_pairs(const std::string& section, const std::string& key,
                  std::vector<std::pair<double, double>>& out) {
    if (const auto* s = raw(section, key)) {
      out.clear();
      for (const auto& item : split_list(*s)) {
        const auto parts = split_list(item, ':');
        if (parts.size() != 2) fail(section, key, "expected m1:m2 pairs, got '" + item + "'");
        out.emplace_back(number(section, key, parts[0]), number(section, key, parts[1]));
      }
      if (out.empty()) fail(section, key, "list is empty");
    }
  }

  /// Rejects sections and keys that no reader asked for.
  void reject_unknown() const {
    for (const auto& [section, body] : tree_) {
      const auto it = known_.find(section);
      if (it == known_.end()) {
        std::size_t line = 0;
        std::istringstream in(text_);
        std::string l;
        for (std::size_t n = 1; std::getline(in, l); ++n) {
          if (trim(l) == "[" + section + "]") {
            line = n;
            break;
          }
        }
        throw ConfigError(source_ + (line ? ":" + std::to_string(line) : "") +
                          ": unknown section [" + section + "]");
      }
      for (const auto& [key, value] : body) {
        if (!it->second.count(key)) fail(section, key, "unknown key");
      }
    }
  }

 private:
  const pt::ptree& tree_;
  const std::string& text_;
  std::string source_;
  std::map<std::string, std::set<std::string>> known_;
  std::deque<std::string> storage_;
};

}  // namespace

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string format_number(ExtendedReal v) {
  return v.is_infinite() ? "inf" : format_number(v.value());
}

void RunConfig::validate() const {
  const auto bad = [](const std::string& field, const std::string& msg) {
    throw ConfigError(field + ": " + msg);
  };
  if (!(half_length > 0.0)) bad("grid.half_length", "must be positive");
  if (points < 8 || (points & (points - 1)) != 0) bad("grid.points", "must be a power of two >= 8");
  if (!(dt > 0.0)) bad("solver.dt", "must be positive");
  if (!(horizon >= dt)) bad("solver.horizon", "must be at least dt");
  const double ratio = horizon / dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
    bad("solver.horizon", "must be an integer multiple of dt");
  }
  for (double e : epsilons)
    if (!(e >= 0.0 && e <= 1.0)) bad("solver.epsilons", "entries must lie in [0, 1]");
  for (double mu : couplings)
    if (!(mu >= 0.0 && mu <= 1.0)) bad("solver.couplings", "entries must lie in [0, 1]");
  for (auto m : scales)
    if (!m.is_infinite() && !(m.value() > 0.0)) bad("solver.scales", "entries must be positive or inf");
  for (double a : offsets)
    if (!(a >= 0.0)) bad("solver.offsets", "entries must be nonnegative");
  if (epsilons.empty() || scales.empty() || couplings.empty() || offsets.empty()) {
    bad("solver", "parameter lists must be nonempty");
  }
  for (double n : norms)
    if (!(n >= 0.0)) bad("data.norms", "entries must be nonnegative");
  if (families.empty() || norms.empty()) bad("data", "bank must be nonempty");
  if (noise_enabled) {
    if (!(noise.decay > 1.0)) bad("noise.decay", "must exceed 1");
    if (!(noise.width > 0.0)) bad("noise.width", "must be positive");
    if (!(noise.amplitude > 0.0)) bad("noise.amplitude", "must be positive");
  }
  if (paths < 1) bad("monte_carlo.paths", "must be at least 1");
  if (!(rho >= 5.0)) bad("monte_carlo.rho", "must be at least 5");
  if (threads < 1) bad("monte_carlo.threads", "must be at least 1");
  for (const auto& [a, b] : stopping_pairs) {
    if (!(a > 0.0 && a < b)) bad("stopping_time.pairs", "need 0 < m1 < m2");
  }
  if (!(stopping_epsilon >= 0.0 && stopping_epsilon <= 1.0)) {
    bad("stopping_time.epsilon", "must lie in [0, 1]");
  }
  if (!(stability_epsilon >= 0.0 && stability_epsilon <= 1.0)) {
    bad("stability.epsilon", "must lie in [0, 1]");
  }
  if (!stability_scale.is_infinite() && !(stability_scale.value() > 0.0)) {
    bad("stability.scale", "must be positive or inf");
  }
  if (!(stability_offset >= 0.0)) bad("stability.offset", "must be nonnegative");
  for (double d : stability_deltas)
    if (!(d > 0.0)) bad("stability.deltas", "entries must be positive");
  if (dispersive_points < 8 || (dispersive_points & (dispersive_points - 1)) != 0) {
    bad("dispersive.points", "must be a power of two >= 8");
  }
  for (double p : dispersive_exponents)
    if (!(p >= 1.0 && p <= 2.0)) bad("dispersive.exponents", "entries must lie in [1, 2]");
  if (!(dispersive_t_min > 0.0 && dispersive_t_max > dispersive_t_min)) {
    bad("dispersive", "need 0 < t_min < t_max");
  }
  if (dispersive_samples < 3) bad("dispersive.samples", "need at least 3 samples");
  if (!(symmetry_half_length > 0.0)) bad("symmetry.half_length", "must be positive");
  if (symmetry_points < 8 || (symmetry_points & (symmetry_points - 1)) != 0) {
    bad("symmetry.points", "must be a power of two >= 8");
  }
  if (noise_check_samples < 2) bad("noise_check.samples", "need at least 2 samples");
}

std::vector<std::pair<std::string, std::string>> RunConfig::entries() const {
  const auto list = [](const auto& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ",";
      s += format_number(v[i]);
    }
    return s;
  };
  std::string fams;
  for (std::size_t i = 0; i < families.size(); ++i) {
    if (i) fams += ",";
    fams += family_name(families[i]);
  }
  std::string pairs;
  for (std::size_t i = 0; i < stopping_pairs.size(); ++i) {
    if (i) pairs += ",";
    pairs += format_number(stopping_pairs[i].first) + ":" + format_number(stopping_pairs[i].second);
  }
  return {
      {"grid.half_length", format_number(half_length)},
      {"grid.points", std::to_string(points)},
      {"solver.dt", format_number(dt)},
      {"solver.horizon", format_number(horizon)},
      {"solver.scheme", scheme == Scheme::kStrang ? "strang" : "lie"},
      {"solver.profile", profile == CutoffProfile::kBump ? "bump" : "smoothstep"},
      {"solver.epsilons", list(epsilons)},
      {"solver.scales", list(scales)},
      {"solver.couplings", list(couplings)},
      {"solver.offsets", list(offsets)},
      {"solver.boundary_tolerance", format_number(boundary_tolerance)},
      {"data.families", fams},
      {"data.norms", list(norms)},
      {"noise.enabled", noise_enabled ? "true" : "false"},
      {"noise.rank", std::to_string(noise.rank)},
      {"noise.decay", format_number(noise.decay)},
      {"noise.width", format_number(noise.width)},
      {"noise.amplitude", format_number(noise.amplitude)},
      {"noise.weight_exponent", std::to_string(noise.weight_exponent)},
      {"noise.smoothness", std::to_string(noise.smoothness)},
      {"monte_carlo.paths", std::to_string(paths)},
      {"monte_carlo.rho", format_number(rho)},
      {"monte_carlo.seed", std::to_string(seed)},
      {"monte_carlo.resamples", std::to_string(resamples)},
      {"stopping_time.pairs", pairs},
      {"stopping_time.epsilon", format_number(stopping_epsilon)},
      {"stopping_time.norm", format_number(stopping_norm)},
      {"stability.epsilon", format_number(stability_epsilon)},
      {"stability.scale", format_number(stability_scale)},
      {"stability.offset", format_number(stability_offset)},
      {"stability.deltas", list(stability_deltas)},
      {"dispersive.half_length", format_number(dispersive_half_length)},
      {"dispersive.points", std::to_string(dispersive_points)},
      {"dispersive.exponents", list(dispersive_exponents)},
      {"dispersive.t_min", format_number(dispersive_t_min)},
      {"dispersive.t_max", format_number(dispersive_t_max)},
      {"dispersive.samples", std::to_string(dispersive_samples)},
      {"symmetry.half_length", format_number(symmetry_half_length)},
      {"symmetry.points", std::to_string(symmetry_points)},
      {"noise_check.samples", std::to_string(noise_check_samples)},
      {"noise_check.rotations", std::to_string(noise_check_rotations)},
  };
}

RunConfig parse_run_config(const std::string& text, const std::string& source) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(source + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  RunConfig cfg;
  Reader r(tree, text, source);

  r.read("grid", "half_length", cfg.half_length);
  r.read_integer("grid", "points", cfg.points);

  r.read("solver", "dt", cfg.dt);
  r.read("solver", "horizon", cfg.horizon);
  std::string scheme = "strang", profile = "bump";
  r.read("solver", "scheme", scheme);
  if (scheme == "strang") {
    cfg.scheme = Scheme::kStrang;
  } else if (scheme == "lie") {
    cfg.scheme = Scheme::kLie;
  } else {
    r.fail("solver", "scheme", "expected strang or lie");
  }
  r.read("solver", "profile", profile);
  if (profile == "bump") {
    cfg.profile = CutoffProfile::kBump;
  } else if (profile == "smoothstep") {
    cfg.profile = CutoffProfile::kSmoothstep;
  } else {
    r.fail("solver", "profile", "expected bump or smoothstep");
  }
  r.read("solver", "epsilons", cfg.epsilons);
  r.read("solver", "scales", cfg.scales);
  r.read("solver", "couplings", cfg.couplings);
  r.read("solver", "offsets", cfg.offsets);
  r.read("solver", "boundary_tolerance", cfg.boundary_tolerance);

  std::string families;
  r.read("data", "families", families);
  if (!families.empty()) {
    cfg.families.clear();
    for (const auto& f : split_list(families)) {
      try {
        cfg.families.push_back(parse_family(f));
      } catch (const ConfigError& e) {
        r.fail("data", "families", e.what());
      }
    }
  }
  r.read("data", "norms", cfg.norms);

  r.read("noise", "enabled", cfg.noise_enabled);
  r.read_integer("noise", "rank", cfg.noise.rank);
  r.read("noise", "decay", cfg.noise.decay);
  r.read("noise", "width", cfg.noise.width);
  r.read("noise", "amplitude", cfg.noise.amplitude);
  r.read_integer("noise", "weight_exponent", cfg.noise.weight_exponent);
  r.read_integer("noise", "smoothness", cfg.noise.smoothness);

  r.read_integer("monte_carlo", "paths", cfg.paths);
  r.read("monte_carlo", "rho", cfg.rho);
  r.read_integer("monte_carlo", "seed", cfg.seed);
  r.read_integer("monte_carlo", "resamples", cfg.resamples);
  r.read_integer("monte_carlo", "threads", cfg.threads);

  r.read("output", "directory", cfg.output_directory);

  r.read_pairs("stopping_time", "pairs", cfg.stopping_pairs);
  r.read("stopping_time", "epsilon", cfg.stopping_epsilon);
  r.read("stopping_time", "norm", cfg.stopping_norm);

  r.read("stability", "epsilon", cfg.stability_epsilon);
  r.read("stability", "scale", cfg.stability_scale);
  r.read("stability", "offset", cfg.stability_offset);
  r.read("stability", "deltas", cfg.stability_deltas);

  r.read("dispersive", "half_length", cfg.dispersive_half_length);
  r.read_integer("dispersive", "points", cfg.dispersive_points);
  r.read("dispersive", "exponents", cfg.dispersive_exponents);
  r.read("dispersive", "t_min", cfg.dispersive_t_min);
  r.read("dispersive", "t_max", cfg.dispersive_t_max);
  r.read_integer("dispersive", "samples", cfg.dispersive_samples);

  r.read("symmetry", "half_length", cfg.symmetry_half_length);
  r.read_integer("symmetry", "points", cfg.symmetry_points);

  r.read_integer("noise_check", "samples", cfg.noise_check_samples);
  r.read_integer("noise_check", "rotations", cfg.noise_check_rotations);

  r.reject_unknown();
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    const auto dot = what.find('.');
    const auto colon = what.find(':');
    if (dot != std::string::npos && colon != std::string::npos && dot < colon) {
      r.fail(what.substr(0, dot), what.substr(dot + 1, colon - dot - 1), what.substr(colon + 2));
    }
    throw ConfigError(source + ": " + what);
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str(), path);
}

}  // namespace snls::harness
