#include "bmild/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "bmild/error.hpp"

namespace bmild {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  if (v == "inf" || v == "infinity") return kInf;
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, out);
  if (res.ec != std::errc() || res.ptr != end || !std::isfinite(out)) {
    throw ConfigError("key '" + key + "': '" + v + "' is not a number");
  }
  return out;
}

long long parse_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, out);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ConfigError("key '" + key + "': '" + v + "' is not an integer");
  }
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, out);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ConfigError("key '" + key + "': '" + v + "' is not an unsigned integer");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + key + "': '" + v + "' is not a boolean");
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(key, item));
  }
  return out;
}

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + num(v[i]);
  return out;
}

struct Key {
  const char* name;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define BMILD_DOUBLE(key, member)                                                         \
  Key{key, [](ExperimentConfig& c, const std::string& v) { c.member = parse_double(key, v); }, \
      [](const ExperimentConfig& c) { return num(c.member); }}
#define BMILD_INT(key, member)                                                                 \
  Key{key,                                                                                     \
      [](ExperimentConfig& c, const std::string& v) {                                         \
        c.member = static_cast<decltype(c.member)>(parse_int(key, v));                        \
      },                                                                                       \
      [](const ExperimentConfig& c) { return std::to_string(c.member); }}
#define BMILD_LIST(key, member)                                                            \
  Key{key, [](ExperimentConfig& c, const std::string& v) { c.member = parse_list(key, v); }, \
      [](const ExperimentConfig& c) { return list(c.member); }}
#define BMILD_STRING(key, member)                                                 \
  Key{key, [](ExperimentConfig& c, const std::string& v) { c.member = v; },       \
      [](const ExperimentConfig& c) { return c.member; }}

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      BMILD_INT("n", n),
      BMILD_DOUBLE("L", box_length),
      BMILD_DOUBLE("T", horizon),
      BMILD_DOUBLE("dt", dt),
      BMILD_DOUBLE("p", p),
      BMILD_DOUBLE("q", q),
      BMILD_INT("max_iterations", max_iterations),
      BMILD_DOUBLE("eps_fix", eps_fix),
      Key{"quadrature",
          [](ExperimentConfig& c, const std::string& v) { c.quadrature = parse_quadrature(v); },
          [](const ExperimentConfig& c) { return to_string(c.quadrature); }},
      Key{"initial_iterate",
          [](ExperimentConfig& c, const std::string& v) {
            c.initial_iterate = parse_initial_iterate(v);
          },
          [](const ExperimentConfig& c) { return to_string(c.initial_iterate); }},
      BMILD_DOUBLE("perturbation", perturbation),
      BMILD_INT("c0_samples", c0_samples),
      BMILD_INT("reference_substeps", reference_substeps),
      BMILD_DOUBLE("smallness_target", smallness_target),
      Key{"preset", [](ExperimentConfig& c, const std::string& v) { c.data.preset = parse_preset(v); },
          [](const ExperimentConfig& c) { return to_string(c.data.preset); }},
      BMILD_DOUBLE("amplitude", data.amplitude),
      BMILD_DOUBLE("theta_amplitude", data.theta_amplitude),
      BMILD_DOUBLE("length_scale", data.length_scale),
      Key{"seed", [](ExperimentConfig& c, const std::string& v) { c.data.seed = parse_u64("seed", v); },
          [](const ExperimentConfig& c) { return std::to_string(c.data.seed); }},
      BMILD_STRING("input_u", input_u),
      BMILD_STRING("input_theta", input_theta),
      BMILD_LIST("snapshot_times", snapshot_times),
      BMILD_LIST("kernel_t_grid", kernel_t_grid),
      BMILD_LIST("buoyancy_t_grid", buoyancy_t_grid),
      BMILD_DOUBLE("buoyancy_gaussian_time", buoyancy_gaussian_time),
      BMILD_LIST("kernel_betas", kernel_betas),
      BMILD_DOUBLE("selfsim_t1", selfsim_t1),
      BMILD_DOUBLE("selfsim_t2", selfsim_t2),
      BMILD_DOUBLE("decay_r_min", decay_r_min),
      BMILD_INT("decay_shells", decay_shells),
      BMILD_DOUBLE("decay_tolerance", decay_tolerance),
      BMILD_DOUBLE("slope_tolerance", slope_tolerance),
      BMILD_DOUBLE("selfsim_tolerance", selfsim_tolerance),
      BMILD_LIST("lambdas", lambdas),
      BMILD_DOUBLE("scaling_tolerance", scaling_tolerance),
      BMILD_DOUBLE("data_norm_tolerance", data_norm_tolerance),
      BMILD_DOUBLE("uniqueness_tolerance", uniqueness_tolerance),
      Key{"refinement_check",
          [](ExperimentConfig& c, const std::string& v) {
            c.refinement_check = parse_bool("refinement_check", v);
          },
          [](const ExperimentConfig& c) { return std::string(c.refinement_check ? "true" : "false"); }},
      BMILD_INT("horizons", horizons),
      BMILD_INT("composite_levels", composite_levels),
      BMILD_DOUBLE("vanishing_fraction", vanishing_fraction),
      BMILD_DOUBLE("composite_fraction", composite_fraction),
      BMILD_STRING("out", out_dir),
  };
  return table;
}

#undef BMILD_DOUBLE
#undef BMILD_INT
#undef BMILD_LIST
#undef BMILD_STRING

void check(const ExperimentConfig& c) {
  make_grid(c.n, c.box_length);
  validate(c.solve_config());
  if (!(c.data.length_scale > 0.0)) throw ConfigError("length_scale must be positive");
  if (c.c0_samples > 100000) throw ConfigError("c0_samples must be a non-negative count");
  if (!(c.smallness_target >= 0.0)) throw ConfigError("smallness_target must be >= 0");
  for (double t : c.snapshot_times) {
    if (!(t >= 0.0 && t <= c.horizon)) throw ConfigError("snapshot_times must lie in [0, T]");
  }
  for (double t : c.kernel_t_grid) {
    if (!(t > 0.0)) throw ConfigError("kernel_t_grid entries must be positive");
  }
  for (double t : c.buoyancy_t_grid) {
    if (!(t >= 0.0)) throw ConfigError("buoyancy_t_grid entries must be >= 0");
  }
  if (c.buoyancy_t_grid.size() < 2) throw ConfigError("buoyancy_t_grid needs at least two times");
  if (!(c.buoyancy_gaussian_time > 0.0)) throw ConfigError("buoyancy_gaussian_time must be positive");
  if (c.kernel_t_grid.size() < 2) throw ConfigError("kernel_t_grid needs at least two times");
  for (double b : c.kernel_betas) {
    if (!(b >= 1.0)) throw ConfigError("kernel_betas entries must be >= 1");
  }
  for (double l : c.lambdas) {
    if (!(l > 0.0)) throw ConfigError("lambdas entries must be positive");
  }
  if (c.horizons < 2) throw ConfigError("horizons must be >= 2");
  if (c.composite_levels < 1) throw ConfigError("composite_levels must be >= 1");
  if (!(c.vanishing_fraction > 0.0 && c.vanishing_fraction < 1.0)) {
    throw ConfigError("vanishing_fraction must lie in (0, 1)");
  }
  if (c.decay_shells < 3) throw ConfigError("decay_shells must be >= 3");
}

}  // namespace

SolveConfig ExperimentConfig::solve_config() const {
  SolveConfig s;
  s.n = n;
  s.box_length = box_length;
  s.horizon = horizon;
  s.dt = dt;
  s.p = p;
  s.q = q;
  s.max_iterations = max_iterations;
  s.eps_fix = eps_fix;
  s.quadrature = quadrature;
  s.initial_iterate = initial_iterate;
  s.perturbation = perturbation;
  s.seed = data.seed;
  s.c0_samples = c0_samples;
  s.reference_substeps = reference_substeps;
  return s;
}

std::string ExperimentConfig::canonical() const {
  std::map<std::string, std::string> sorted;
  for (const auto& k : keys()) sorted[k.name] = k.get(*this);
  std::string out;
  for (const auto& [k, v] : sorted) out += k + "=" + v + "\n";
  return out;
}

std::string ExperimentConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const Key* match = nullptr;
    for (const auto& k : keys()) {
      if (key == k.name) match = &k;
    }
    if (!match) throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (!seen.insert(key).second) {
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    match->set(cfg, value);
  }
  check(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace bmild
