// sweep.hpp
// Flat key=value configuration, parameter-grid sweeps, CSV output and the
// named reproduction targets.

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fidelity.hpp"

namespace qdcnot {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class AxisKind { kappa_s, g, err, p_sw };
enum class AxisScale { linear, log };

struct Axis {
  AxisKind kind = AxisKind::kappa_s;
  double lo = 0.0;
  double hi = 1.0;
  std::size_t n = 2;
  AxisScale scale = AxisScale::linear;

  double value(std::size_t i) const {
    if (i + 1 == n) return hi;
    const double u = static_cast<double>(i) / static_cast<double>(n - 1);
    return scale == AxisScale::linear ? lo + u * (hi - lo) : lo * std::pow(hi / lo, u);
  }
};

struct SweepGrid {
  Axis axis1;
  Axis axis2;
};

inline std::string axis_name(AxisKind k) {
  switch (k) {
    case AxisKind::kappa_s: return "kappa_s_over_kappa";
    case AxisKind::g: return "g_over_kappa";
    case AxisKind::err: return "err";
    case AxisKind::p_sw: return "p_sw";
  }
  return "?";
}

inline void check(const Axis& a, const std::string& key) {
  if (!(a.lo < a.hi)) throw ConfigError(key + ": lo must be < hi");
  if (a.n < 2) throw ConfigError(key + ": n must be >= 2");
  if (a.scale == AxisScale::log && !(a.lo > 0.0)) throw ConfigError(key + ": log scale needs lo > 0");
}

// How a uniform error level e is turned into per-device errors.
//   fixed:   every xi and tau equals e
//   uniform: each drawn independently from [0.5e, 1.5e], seeded per grid point
enum class ErrorMode { fixed, uniform };

struct SimConfig {
  CircuitKind circuit = CircuitKind::baseline;
  CavityParams cavity{};  // kappa is the unit
  DeviceErrorConfig errors{};
  std::optional<double> err_level;  // overrides every xi and tau when set
  ErrorMode error_mode = ErrorMode::fixed;
  std::string ensemble = "calibration";  // calibration | basis4 | superposition4 | haar_product
  std::size_t haar_n = 1000;
  std::uint64_t seed = 0;
  std::optional<SweepGrid> grid;
  std::string out;
  unsigned threads = 1;  // 0 = hardware concurrency
};

// ---------------------------------------------------------------------------
// Config file I/O.

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc{} || p != v.data() + v.size() || !std::isfinite(x))
    throw ConfigError(key + ": expected a finite number, got '" + v + "'");
  return x;
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  std::uint64_t x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw ConfigError(key + ": expected a nonnegative integer, got '" + v + "'");
  return x;
}

inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Every numeric config field, addressed by key.
inline std::vector<std::pair<std::string, double*>> numeric_fields(SimConfig& c) {
  std::vector<std::pair<std::string, double*>> f{
      {"g", &c.cavity.g},
      {"kappa_s", &c.cavity.kappa_s},
      {"gamma", &c.cavity.gamma_x},
      {"xi1", &c.errors.xi1.xi},
      {"xi2", &c.errors.xi2.xi},
  };
  for (int i = 0; i < 4; ++i) {
    const std::string p = "cpbs" + std::to_string(i + 1) + "_";
    f.emplace_back(p + "tau_r", &c.errors.cpbs[i].tau_r);
    f.emplace_back(p + "tau_l", &c.errors.cpbs[i].tau_l);
  }
  for (auto [name, sw] : {std::pair{"sw1_", &c.errors.sw1}, std::pair{"sw2_", &c.errors.sw2}}) {
    const std::string p = name;
    f.emplace_back(p + "t12", &sw->t12);
    f.emplace_back(p + "t21", &sw->t21);
    f.emplace_back(p + "r11", &sw->r11);
    f.emplace_back(p + "r22", &sw->r22);
  }
  f.emplace_back("cloner_fidelity", &c.errors.cloner.fidelity);
  return f;
}

inline AxisKind parse_axis_kind(const std::string& key, const std::string& v) {
  for (auto k : {AxisKind::kappa_s, AxisKind::g, AxisKind::err, AxisKind::p_sw})
    if (v == axis_name(k)) return k;
  if (v == "ks") return AxisKind::kappa_s;
  throw ConfigError(key + ": expected kappa_s_over_kappa, g_over_kappa, err or p_sw, got '" + v + "'");
}

}  // namespace detail

// Range checks on a populated config; the message names the offending key.
inline void validate(const SimConfig& c) {
  auto need = [](bool ok, const std::string& key, const std::string& what) {
    if (!ok) throw ConfigError(key + ": " + what);
  };
  need(c.cavity.g >= 0.0, "g", "must be >= 0");
  need(c.cavity.kappa_s >= 0.0, "kappa_s", "must be >= 0");
  need(c.cavity.gamma_x >= 0.0, "gamma", "must be >= 0");
  need(std::abs(c.errors.xi1.xi) <= 1.0, "xi1", "must satisfy |xi| <= 1");
  need(std::abs(c.errors.xi2.xi) <= 1.0, "xi2", "must satisfy |xi| <= 1");
  auto cfg = c;
  for (const auto& [key, ptr] : detail::numeric_fields(cfg)) {
    if (key.rfind("cpbs", 0) == 0 || key.rfind("sw", 0) == 0) need(*ptr >= 0.0 && *ptr <= 1.0, key, "must lie in [0, 1]");
  }
  need(c.errors.cloner.fidelity >= 0.5 && c.errors.cloner.fidelity <= 1.0, "cloner_fidelity", "must lie in [0.5, 1]");
  if (c.err_level) need(*c.err_level >= 0.0 && *c.err_level <= 1.0, "err_level", "must lie in [0, 1]");
  need(c.ensemble == "calibration" || c.ensemble == "basis4" || c.ensemble == "superposition4" ||
           c.ensemble == "haar_product",
       "ensemble", "must be calibration, basis4, superposition4 or haar_product");
  need(c.haar_n >= 1, "haar_n", "must be >= 1");
  if (c.grid) {
    check(c.grid->axis1, "axis1");
    check(c.grid->axis2, "axis2");
    need(c.grid->axis1.kind != c.grid->axis2.kind, "axis2", "must differ from axis1");
  }
}

// Schema (one `key = value` per line, '#' starts a comment):
//   circuit          baseline | optimized
//   g, kappa_s, gamma                  cavity rates over kappa
//   xi1, xi2                           HWP errors, |xi| <= 1
//   cpbsN_tau_r, cpbsN_tau_l (N=1..4)  CPBS leakage, [0, 1]
//   swN_t12, swN_t21, swN_r11, swN_r22 (N=1,2)  switch port probabilities, [0, 1]
//   cloner_fidelity  [0.5, 1];  cloner_model  scalar | universal
//   err_level        sets every xi and tau;  error_mode  fixed | uniform
//   ensemble         calibration | basis4 | superposition4 | haar_product;  haar_n;  seed
//   axisK, axisK_lo, axisK_hi, axisK_n, axisK_scale (K=1,2)   sweep grid; all five or none
//   out              CSV path;  threads  worker count, 0 = all cores
inline SimConfig parse_config(std::istream& is) {
  SimConfig c;
  auto fields = detail::numeric_fields(c);
  std::map<std::string, std::string> axis_keys;
  std::map<std::string, bool> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    if (seen[key]) throw ConfigError(key + ": given more than once");
    seen[key] = true;

    if (auto it = std::find_if(fields.begin(), fields.end(), [&](const auto& f) { return f.first == key; });
        it != fields.end()) {
      *it->second = detail::parse_double(key, val);
    } else if (key == "circuit") {
      if (val == "baseline") c.circuit = CircuitKind::baseline;
      else if (val == "optimized") c.circuit = CircuitKind::optimized;
      else throw ConfigError("circuit: must be baseline or optimized");
    } else if (key == "cloner_model") {
      if (val == "scalar") c.errors.cloner.model = ClonerModel::scalar;
      else if (val == "universal") c.errors.cloner.model = ClonerModel::universal;
      else throw ConfigError("cloner_model: must be scalar or universal");
    } else if (key == "err_level") {
      c.err_level = detail::parse_double(key, val);
    } else if (key == "error_mode") {
      if (val == "fixed") c.error_mode = ErrorMode::fixed;
      else if (val == "uniform") c.error_mode = ErrorMode::uniform;
      else throw ConfigError("error_mode: must be fixed or uniform");
    } else if (key == "ensemble") {
      c.ensemble = val;
    } else if (key == "haar_n") {
      c.haar_n = detail::parse_uint(key, val);
    } else if (key == "seed") {
      c.seed = detail::parse_uint(key, val);
    } else if (key == "threads") {
      c.threads = static_cast<unsigned>(detail::parse_uint(key, val));
    } else if (key == "out") {
      c.out = val;
    } else if (key.rfind("axis1", 0) == 0 || key.rfind("axis2", 0) == 0) {
      static const std::vector<std::string> suffixes{"", "_lo", "_hi", "_n", "_scale"};
      if (std::find(suffixes.begin(), suffixes.end(), key.substr(5)) == suffixes.end())
        throw ConfigError(key + ": unknown key");
      axis_keys[key] = val;
    } else {
      throw ConfigError(key + ": unknown key");
    }
  }

  if (c.err_level) {
    for (const auto& [key, ptr] : fields)
      if ((key.rfind("xi", 0) == 0 || key.find("_tau_") != std::string::npos) && seen[key])
        throw ConfigError(key + ": conflicts with err_level");
  }

  if (!axis_keys.empty()) {
    SweepGrid grid;
    for (auto [prefix, axis] : {std::pair{"axis1", &grid.axis1}, std::pair{"axis2", &grid.axis2}}) {
      const std::string p = prefix;
      for (const char* s : {"", "_lo", "_hi", "_n", "_scale"})
        if (!axis_keys.count(p + s)) throw ConfigError(p + s + ": required when a sweep grid is given");
      axis->kind = detail::parse_axis_kind(p, axis_keys[p]);
      axis->lo = detail::parse_double(p + "_lo", axis_keys[p + "_lo"]);
      axis->hi = detail::parse_double(p + "_hi", axis_keys[p + "_hi"]);
      axis->n = detail::parse_uint(p + "_n", axis_keys[p + "_n"]);
      const auto& sc = axis_keys[p + "_scale"];
      if (sc == "linear") axis->scale = AxisScale::linear;
      else if (sc == "log") axis->scale = AxisScale::log;
      else throw ConfigError(p + "_scale: must be linear or log");
    }
    c.grid = grid;
  }
  validate(c);
  return c;
}

inline SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  return parse_config(in);
}

inline std::string serialize_config(const SimConfig& c) {
  std::ostringstream os;
  auto copy = c;
  os << "circuit = " << to_string(c.circuit) << '\n';
  for (const auto& [key, ptr] : detail::numeric_fields(copy)) {
    if (c.err_level && (key.rfind("xi", 0) == 0 || key.find("_tau_") != std::string::npos)) continue;
    os << key << " = " << detail::fmt17(*ptr) << '\n';
  }
  os << "cloner_model = " << (c.errors.cloner.model == ClonerModel::scalar ? "scalar" : "universal") << '\n';
  if (c.err_level) os << "err_level = " << detail::fmt17(*c.err_level) << '\n';
  os << "error_mode = " << (c.error_mode == ErrorMode::fixed ? "fixed" : "uniform") << '\n';
  os << "ensemble = " << c.ensemble << '\n';
  os << "haar_n = " << c.haar_n << '\n';
  os << "seed = " << c.seed << '\n';
  os << "threads = " << c.threads << '\n';
  if (!c.out.empty()) os << "out = " << c.out << '\n';
  if (c.grid) {
    for (auto [prefix, axis] : {std::pair{"axis1", &c.grid->axis1}, std::pair{"axis2", &c.grid->axis2}}) {
      const std::string p = prefix;
      os << p << " = " << axis_name(axis->kind) << '\n';
      os << p << "_lo = " << detail::fmt17(axis->lo) << '\n';
      os << p << "_hi = " << detail::fmt17(axis->hi) << '\n';
      os << p << "_n = " << axis->n << '\n';
      os << p << "_scale = " << (axis->scale == AxisScale::linear ? "linear" : "log") << '\n';
    }
  }
  return os.str();
}

inline void save_config(const SimConfig& c, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write config " + path.string());
  out << serialize_config(c);
  if (!out) throw IoError("write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// Evaluation.

inline InputEnsemble resolve_ensemble(const SimConfig& c) {
  if (c.ensemble == "basis4") return InputEnsemble::basis4();
  if (c.ensemble == "superposition4") return InputEnsemble::superposition4();
  if (c.ensemble == "haar_product") return InputEnsemble::haar_product(c.haar_n, c.seed);
  return calibration().ensemble;
}

// Sets every HWP and CPBS error from the level e; `rng` is used in uniform mode.
inline void apply_error_level(DeviceErrorConfig& err, double e, ErrorMode mode, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.5 * e, 1.5 * e);
  auto draw = [&] { return mode == ErrorMode::fixed ? e : std::min(1.0, u(rng)); };
  err.xi1.xi = draw();
  err.xi2.xi = draw();
  for (auto& c : err.cpbs) {
    c.tau_r = draw();
    c.tau_l = draw();
  }
}

inline void apply_switch_level(DeviceErrorConfig& err, double p) {
  for (auto* sw : {&err.sw1, &err.sw2}) *sw = {p, p, p, p};
}

// Independent random stream for grid point `index`.
inline std::mt19937_64 point_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

// Config of a single point: err_level (if any) is resolved here.
inline SimConfig resolve_point(SimConfig c, std::uint64_t index = 0) {
  if (c.err_level) {
    auto rng = point_rng(c.seed, index);
    apply_error_level(c.errors, *c.err_level, c.error_mode, rng);
  }
  return c;
}

inline FidelityReport simulate(const SimConfig& cfg, const InputEnsemble& ens) {
  const auto c = resolve_point(cfg);
  return average_fidelity(c.circuit, c.cavity, c.errors, ens, c.threads);
}

inline FidelityReport simulate(const SimConfig& cfg) { return simulate(cfg, resolve_ensemble(cfg)); }

struct TableRow {
  std::vector<double> values;
  std::string status = "ok";
};

struct Table {
  std::vector<std::string> header;
  std::vector<TableRow> rows;
};

inline const std::vector<std::string>& result_columns() {
  static const std::vector<std::string> cols{"f_up", "f_down", "f_both", "f_up_folded", "f_down_folded", "success"};
  return cols;
}

// Evaluates the full grid. A point that throws still yields a row: NaN values
// and a status naming the failure.
inline Table run_sweep(const SimConfig& cfg) {
  validate(cfg);
  if (!cfg.grid) throw ConfigError("axis1: a sweep needs a grid");
  const auto& grid = *cfg.grid;
  const auto ens = resolve_ensemble(cfg);
  const std::size_t n1 = grid.axis1.n, n2 = grid.axis2.n;

  Table t;
  t.header = {axis_name(grid.axis1.kind), axis_name(grid.axis2.kind)};
  t.header.insert(t.header.end(), result_columns().begin(), result_columns().end());
  t.header.push_back("status");
  t.rows.resize(n1 * n2);

  parallel_for(n1 * n2, cfg.threads, [&](std::size_t idx) {
    const double v1 = grid.axis1.value(idx / n2), v2 = grid.axis2.value(idx % n2);
    auto& row = t.rows[idx];
    row.values = {v1, v2};
    try {
      SimConfig c = cfg;
      for (auto [kind, v] : {std::pair{grid.axis1.kind, v1}, std::pair{grid.axis2.kind, v2}}) {
        switch (kind) {
          case AxisKind::kappa_s: c.cavity.kappa_s = v; break;
          case AxisKind::g: c.cavity.g = v; break;
          case AxisKind::err: c.err_level = v; break;
          case AxisKind::p_sw: apply_switch_level(c.errors, v); break;
        }
      }
      c = resolve_point(c, idx);
      const auto r = average_fidelity(c.circuit, c.cavity, c.errors, ens, 1);
      row.values.insert(row.values.end(), {r.f_up, r.f_down, r.f_both, r.f_up_folded, r.f_down_folded, r.success});
    } catch (const std::exception& e) {
      row.values.resize(2 + result_columns().size(), std::numeric_limits<double>::quiet_NaN());
      std::string msg = e.what();
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      row.status = "error: " + msg;
    }
  });
  return t;
}

inline Table sweep_coupling(const SimConfig& cfg) {
  if (!cfg.grid) throw ConfigError("axis1: a coupling sweep needs a grid");
  const auto k1 = cfg.grid->axis1.kind, k2 = cfg.grid->axis2.kind;
  const bool ok = (k1 == AxisKind::kappa_s && k2 == AxisKind::g) || (k1 == AxisKind::g && k2 == AxisKind::kappa_s);
  if (!ok) throw ConfigError("axis1: a coupling sweep needs kappa_s_over_kappa and g_over_kappa axes");
  return run_sweep(cfg);
}

// E_rr x P_SW surface of the optimized gate with the optimal universal cloner.
inline Table sweep_err_psw(SimConfig cfg) {
  if (!cfg.grid) throw ConfigError("axis1: an error/switch sweep needs a grid");
  const auto k1 = cfg.grid->axis1.kind, k2 = cfg.grid->axis2.kind;
  const bool ok = (k1 == AxisKind::err && k2 == AxisKind::p_sw) || (k1 == AxisKind::p_sw && k2 == AxisKind::err);
  if (!ok) throw ConfigError("axis1: an error/switch sweep needs err and p_sw axes");
  if (!is_strong_coupling(cfg.cavity)) throw ConfigError("g: the error/switch sweep needs strong coupling");
  cfg.circuit = CircuitKind::optimized;
  cfg.errors.cloner.fidelity = universal_cloner_fidelity;
  return run_sweep(cfg);
}

// Picks the sweep flavor from the grid axes.
inline Table sweep(const SimConfig& cfg) {
  if (cfg.grid) {
    const auto k1 = cfg.grid->axis1.kind, k2 = cfg.grid->axis2.kind;
    if ((k1 == AxisKind::err || k1 == AxisKind::p_sw) && (k2 == AxisKind::err || k2 == AxisKind::p_sw))
      return sweep_err_psw(cfg);
  }
  return run_sweep(cfg);
}

inline std::string format_value(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

inline std::string to_csv(const Table& t) {
  std::string s;
  for (std::size_t i = 0; i < t.header.size(); ++i) s += (i ? "," : "") + t.header[i];
  s += '\n';
  const bool has_status = !t.header.empty() && t.header.back() == "status";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.values.size(); ++i) s += (i ? "," : "") + format_value(row.values[i]);
    if (has_status) s += "," + row.status;
    s += '\n';
  }
  return s;
}

inline void write_text(const std::string& text, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

inline void write_csv(const Table& t, const std::filesystem::path& path) {
  if (t.rows.empty()) throw std::invalid_argument("refusing to write an empty table");
  write_text(to_csv(t), path);
}

// ---------------------------------------------------------------------------
// Reproduction targets.

inline SimConfig strong_coupling_config() {
  SimConfig c;
  c.cavity = {.g = 2.5, .kappa = 1.0, .kappa_s = 0.05, .gamma_x = 0.1};
  return c;
}

inline SimConfig weak_coupling_config() {
  SimConfig c;
  c.cavity = {.g = 0.45, .kappa = 1.0, .kappa_s = 1.0, .gamma_x = 0.1};
  return c;
}

// Realistic single-photon switches and an imperfect cloner.
inline void apply_realistic_switches(SimConfig& c) {
  c.errors.sw1.t12 = 0.899;
  c.errors.sw1.r22 = 0.65;
  c.errors.sw2.t12 = 0.956;
  c.errors.sw2.r11 = 0.648;
  c.errors.cloner.fidelity = 0.82;
}

struct Anchor {
  std::string name;
  SimConfig config;
  double reference;  // fraction
  double tolerance;  // fraction
};

// Baseline runs are scored by their better spin branch, optimized runs by F_both.
inline double anchor_score(CircuitKind kind, const FidelityReport& r) {
  return kind == CircuitKind::baseline ? best_branch(r) : r.f_both;
}

inline std::vector<Anchor> all_anchors() {
  auto with_errors = [](SimConfig c, double e) {
    c.err_level = e;
    return c;
  };
  auto optimized = [](SimConfig c) {
    c.circuit = CircuitKind::optimized;
    return c;
  };
  auto realistic = optimized(with_errors(strong_coupling_config(), 1e-2));
  apply_realistic_switches(realistic);
  auto best_case = optimized(with_errors(strong_coupling_config(), 1e-4));
  best_case.errors.cloner.fidelity = universal_cloner_fidelity;
  return {
      {"baseline_strong_ideal", strong_coupling_config(), 0.9374, 0.010},
      {"baseline_weak_ideal", weak_coupling_config(), 0.3234, 0.010},
      {"baseline_strong_err1e-2", with_errors(strong_coupling_config(), 1e-2), 0.8789, 0.015},
      {"baseline_weak_err1e-2", with_errors(weak_coupling_config(), 1e-2), 0.3002, 0.015},
      {"optimized_realistic_switches", realistic, 0.2627, 0.015},
      {"optimized_best_case", best_case, 0.78, 0.010},
  };
}

enum class AnchorStatus { pass, residual, fail };

inline std::string to_string(AnchorStatus s) {
  switch (s) {
    case AnchorStatus::pass: return "pass";
    case AnchorStatus::residual: return "documented-residual";
    case AnchorStatus::fail: return "fail";
  }
  return "?";
}

struct AnchorResult {
  Anchor anchor;
  double value = 0.0;  // calibration ensemble
  std::string best_ensemble;
  double best_residual = 0.0;  // smallest |value - reference| over the candidate ensembles
  AnchorStatus status = AnchorStatus::fail;
};

struct ClaimResult {
  std::string name;
  bool holds = false;
  std::string detail;
};

struct ReproduceReport {
  std::string target;
  std::string calibration_ensemble;
  std::vector<AnchorResult> anchors;
  std::vector<ClaimResult> claims;
  std::filesystem::path csv;
  std::filesystem::path summary;

  bool claims_hold() const {
    return std::all_of(claims.begin(), claims.end(), [](const auto& c) { return c.holds; });
  }
  bool ok() const {
    return std::none_of(anchors.begin(), anchors.end(), [](const auto& a) { return a.status == AnchorStatus::fail; });
  }
};

inline double anchor_value(const Anchor& a, const InputEnsemble& ens) {
  return anchor_score(a.config.circuit, simulate(a.config, ens));
}

inline std::vector<ClaimResult> qualitative_claims() {
  const auto ens = calibration().ensemble;
  const auto anchors = all_anchors();
  auto value = [&](const std::string& name) {
    for (const auto& a : anchors)
      if (a.name == name) return anchor_value(a, ens);
    throw std::logic_error("no anchor " + name);
  };
  const double strong = value("baseline_strong_ideal"), weak = value("baseline_weak_ideal");
  const double best = value("optimized_best_case"), realistic = value("optimized_realistic_switches");
  char buf[160];
  std::vector<ClaimResult> out;
  std::snprintf(buf, sizeof buf, "strong %.4f vs weak %.4f", strong, weak);
  out.push_back({"strong coupling far above weak coupling", strong > 2.0 * weak, buf});
  std::snprintf(buf, sizeof buf, "best case %.4f vs F_UC %.4f", best, universal_cloner_fidelity);
  out.push_back({"optimized best case close to the cloner bound",
                 best <= universal_cloner_fidelity + 1e-12 && universal_cloner_fidelity - best < 0.1, buf});
  std::snprintf(buf, sizeof buf, "realistic %.4f vs best case %.4f", realistic, best);
  out.push_back({"realistic switches collapse the optimized fidelity", realistic < 0.5 * best, buf});
  return out;
}

inline const std::vector<std::string>& reproduce_targets() {
  static const std::vector<std::string> t{"fig3a", "fig3b", "fig4a", "fig4b", "table_anchors"};
  return t;
}

inline SimConfig canonical_config(const std::string& target) {
  auto coupling_grid = [] {
    return SweepGrid{{AxisKind::kappa_s, 0.0, 2.0, 41, AxisScale::linear}, {AxisKind::g, 0.0, 3.0, 61, AxisScale::linear}};
  };
  SimConfig c = strong_coupling_config();
  c.threads = 0;
  if (target == "fig3a") {
    c.grid = coupling_grid();
  } else if (target == "fig3b") {
    c.grid = coupling_grid();
    c.err_level = 1e-2;
    c.error_mode = ErrorMode::uniform;
  } else if (target == "fig4a") {
    c.circuit = CircuitKind::optimized;
    apply_realistic_switches(c);
    c.grid = coupling_grid();
    c.err_level = 1e-2;
    c.error_mode = ErrorMode::uniform;
  } else if (target == "fig4b") {
    c.circuit = CircuitKind::optimized;
    c.errors.cloner.fidelity = universal_cloner_fidelity;
    c.grid = SweepGrid{{AxisKind::err, 1e-4, 1e-1, 31, AxisScale::log}, {AxisKind::p_sw, 0.6, 1.0, 41, AxisScale::linear}};
  } else if (target != "table_anchors") {
    std::string valid;
    for (const auto& t : reproduce_targets()) valid += (valid.empty() ? "" : ", ") + t;
    throw ConfigError("unknown target '" + target + "'; valid targets: " + valid);
  }
  return c;
}

inline std::vector<std::string> target_anchor_names(const std::string& target) {
  if (target == "fig3a") return {"baseline_strong_ideal", "baseline_weak_ideal"};
  if (target == "fig3b") return {"baseline_strong_err1e-2", "baseline_weak_err1e-2"};
  if (target == "fig4a") return {"optimized_realistic_switches"};
  if (target == "fig4b") return {"optimized_best_case"};
  std::vector<std::string> all;
  for (const auto& a : all_anchors()) all.push_back(a.name);
  return all;
}

// An anchor outside tolerance counts as a documented residual only when the
// qualitative claims still hold; the report then names the ensemble that
// came closest and its residual.
inline std::vector<AnchorResult> check_anchors(const std::vector<std::string>& names,
                                               const std::vector<ClaimResult>& claims) {
  const auto& cal = calibration();
  const bool claims_ok = std::all_of(claims.begin(), claims.end(), [](const auto& c) { return c.holds; });
  std::vector<AnchorResult> out;
  for (const auto& a : all_anchors()) {
    if (std::find(names.begin(), names.end(), a.name) == names.end()) continue;
    AnchorResult r{a};
    r.value = anchor_value(a, cal.ensemble);
    r.best_ensemble = cal.ensemble.describe();
    r.best_residual = std::abs(r.value - a.reference);
    if (r.best_residual <= a.tolerance) {
      r.status = AnchorStatus::pass;
    } else {
      for (const auto& ens : {InputEnsemble::basis4(), InputEnsemble::superposition4(),
                              InputEnsemble::haar_product(1000, 0)}) {
        const double d = std::abs(anchor_value(a, ens) - a.reference);
        if (d < r.best_residual) {
          r.best_residual = d;
          r.best_ensemble = ens.describe();
        }
      }
      r.status = claims_ok ? AnchorStatus::residual : AnchorStatus::fail;
    }
    out.push_back(r);
  }
  return out;
}

inline Table anchor_table(const std::vector<AnchorResult>& results) {
  Table t;
  t.header = {"index", "reference", "tolerance", "value", "best_residual", "status"};
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    t.rows.push_back({{static_cast<double>(i), r.anchor.reference, r.anchor.tolerance, r.value, r.best_residual},
                      r.anchor.name + " " + to_string(r.status)});
  }
  return t;
}

inline std::string summary_text(const ReproduceReport& rep) {
  std::ostringstream os;
  char buf[256];
  os << "target: " << rep.target << '\n';
  os << "calibration ensemble: " << rep.calibration_ensemble << '\n';
  for (const auto& [desc, res] : calibration().candidates) {
    std::snprintf(buf, sizeof buf, "  candidate %-22s max residual %.5f\n", desc.c_str(), res);
    os << buf;
  }
  os << "anchors:\n";
  for (const auto& a : rep.anchors) {
    std::snprintf(buf, sizeof buf, "  %-30s ref %7.2f%%  value %7.3f%%  tol +-%.1f  %s", a.anchor.name.c_str(),
                  100 * a.anchor.reference, 100 * a.value, 100 * a.anchor.tolerance, to_string(a.status).c_str());
    os << buf;
    if (a.status != AnchorStatus::pass) {
      std::snprintf(buf, sizeof buf, " (closest ensemble %s, residual %.3f pp)", a.best_ensemble.c_str(),
                    100 * a.best_residual);
      os << buf;
    }
    os << '\n';
  }
  os << "qualitative claims:\n";
  for (const auto& c : rep.claims) os << "  " << (c.holds ? "holds " : "FAILS ") << c.name << " (" << c.detail << ")\n";
  os << "result: " << (rep.ok() ? "ok" : "anchor failure") << '\n';
  return os.str();
}

inline ReproduceReport reproduce(const std::string& target, const std::filesystem::path& out_dir,
                                 std::optional<unsigned> threads = std::nullopt) {
  auto cfg = canonical_config(target);
  if (threads) cfg.threads = *threads;
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  ReproduceReport rep;
  rep.target = target;
  rep.calibration_ensemble = calibration().ensemble.describe();
  rep.claims = qualitative_claims();
  rep.anchors = check_anchors(target_anchor_names(target), rep.claims);
  rep.csv = out_dir / (target + ".csv");
  rep.summary = out_dir / (target + "_summary.txt");
  write_csv(target == "table_anchors" ? anchor_table(rep.anchors) : sweep(cfg), rep.csv);
  write_text(summary_text(rep), rep.summary);
  return rep;
}

}  // namespace qdcnot
