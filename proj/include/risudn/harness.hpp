#pragma once

// Experiment configuration, parameter sweeps over both engines, comparison
// reports and CSV / JSON-lines output.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "risudn/analytic.hpp"
#include "risudn/montecarlo.hpp"

namespace risudn {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class EngineSel { sim, analytic, both };

struct RisSetup {
  double lambda_m = 0.0;
  int elements = 1;
};

struct SweepConfig {
  std::string name = "custom";
  std::uint64_t seed = 42;
  std::size_t drops = 2000;
  unsigned workers = 0;
  EngineSel engine = EngineSel::both;
  bool fast = false;  // CN(0, Q) unserved cascades in the simulator

  // Saturated load: the grid is the active BS intensity. With exact/thinned
  // activity the grid is lambda_n and lambda_u = lambda_u_ratio * lambda_n.
  std::vector<double> lambda_grid{0.01};
  BsActivity activity = BsActivity::saturated;
  double lambda_u_ratio = 1.0;

  std::vector<RisSetup> ris{{0.01, 10}};
  std::vector<int> shape{1};
  std::vector<double> delta_db{0.0};
  double alpha = 4.0;

  PowerModel power{};
  QuadratureConfig quad{};
  AnalyticModel model{};
  double guard_factor = 15.0;
  double ris_margin = 25.0;

  void validate() const {
    require(!lambda_grid.empty() && !ris.empty() && !shape.empty() && !delta_db.empty(),
            "SweepConfig: every grid must be non-empty");
    require(drops >= 1, "SweepConfig: drops must be positive");
    for (double l : lambda_grid) require(l > 0.0, "SweepConfig: intensities must be positive");
    for (const auto& r : ris)
      require(r.lambda_m >= 0.0 && r.elements >= 1, "SweepConfig: invalid RIS setup");
    for (int s : shape) FadingSpec{s, alpha, 1}.validate();
    FadingSpec{1, alpha, 1}.validate();
    require(activity == BsActivity::saturated || lambda_u_ratio > 0.0,
            "SweepConfig: lambda_u_ratio must be positive");
    power.validate();
    quad.validate();
  }
};

struct MetricRow {
  double lambda_n = 0.0;
  double lambda_u = 0.0;
  double lambda_active = 0.0;
  double lambda_m = 0.0;
  int elements = 1;
  int shape = 1;
  double delta_db = 0.0;
  std::size_t drops = 0;

  std::optional<Estimate> sim_coverage, sim_ase, sim_signal, sim_interference, sim_reflected_interference;
  std::optional<double> sim_aee, sim_ece;
  std::optional<double> an_coverage, an_ase, an_aee, an_ece, an_signal, an_interference,
      an_reflected_interference;
  double wall_time = 0.0;
  std::string error;
};

// ---------------------------------------------------------------------------
// Config I/O

namespace detail {

inline EngineSel parse_engine(const std::string& s) {
  if (s == "sim") return EngineSel::sim;
  if (s == "analytic") return EngineSel::analytic;
  if (s == "both") return EngineSel::both;
  throw ConfigError("unknown engine '" + s + "'");
}

inline std::string engine_name(EngineSel e) {
  switch (e) {
    case EngineSel::sim: return "sim";
    case EngineSel::analytic: return "analytic";
    case EngineSel::both: return "both";
  }
  return "both";
}

inline BsActivity parse_activity(const std::string& s) {
  if (s == "saturated") return BsActivity::saturated;
  if (s == "exact") return BsActivity::exact;
  if (s == "thinned") return BsActivity::thinned;
  throw ConfigError("unknown activity '" + s + "'");
}

inline std::string activity_name(BsActivity a) {
  switch (a) {
    case BsActivity::saturated: return "saturated";
    case BsActivity::exact: return "exact";
    case BsActivity::thinned: return "thinned";
  }
  return "saturated";
}

template <class T>
std::vector<T> as_list(const nlohmann::json& j) {
  if (j.is_array()) return j.get<std::vector<T>>();
  return {j.get<T>()};
}

inline void check_keys(const nlohmann::json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
}

}  // namespace detail

/// Reads a JSON experiment config. Powers may be given in dBm (p_tr_dbm,
/// noise_dbm) or Watts (p_tr, noise); thresholds are in dB. Unknown keys are
/// rejected so typos do not silently fall back to defaults.
inline SweepConfig sweep_config_from_json(const nlohmann::json& j, SweepConfig c = {}) {
  using detail::check_keys;
  try {
    check_keys(j,
               {"name", "seed", "drops", "workers", "engine", "fast", "lambda_active", "lambda_n", "activity",
                "lambda_u_ratio", "ris", "shape", "delta_db", "alpha", "power", "quadrature", "model",
                "simulation"},
               "config");
    if (j.contains("name")) c.name = j["name"].get<std::string>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("drops")) c.drops = j["drops"].get<std::size_t>();
    if (j.contains("workers")) c.workers = j["workers"].get<unsigned>();
    if (j.contains("engine")) c.engine = detail::parse_engine(j["engine"].get<std::string>());
    if (j.contains("fast")) c.fast = j["fast"].get<bool>();
    if (j.contains("activity")) c.activity = detail::parse_activity(j["activity"].get<std::string>());
    if (j.contains("lambda_active") && j.contains("lambda_n"))
      throw ConfigError("config: give either lambda_active or lambda_n, not both");
    if (j.contains("lambda_active")) {
      if (c.activity != BsActivity::saturated) throw ConfigError("config: lambda_active needs saturated activity");
      c.lambda_grid = detail::as_list<double>(j["lambda_active"]);
    }
    if (j.contains("lambda_n")) c.lambda_grid = detail::as_list<double>(j["lambda_n"]);
    if (j.contains("lambda_u_ratio")) c.lambda_u_ratio = j["lambda_u_ratio"].get<double>();
    if (j.contains("ris")) {
      c.ris.clear();
      for (const auto& r : j["ris"]) {
        check_keys(r, {"lambda_m", "elements"}, "ris");
        c.ris.push_back({r.value("lambda_m", 0.0), r.value("elements", 1)});
      }
    }
    if (j.contains("shape")) c.shape = detail::as_list<int>(j["shape"]);
    if (j.contains("delta_db")) c.delta_db = detail::as_list<double>(j["delta_db"]);
    if (j.contains("alpha")) c.alpha = j["alpha"].get<double>();
    if (j.contains("power")) {
      const auto& p = j["power"];
      check_keys(p, {"p_tr", "p_tr_dbm", "delta_p", "p_ns", "p_md", "p_ms", "noise", "noise_dbm"}, "power");
      if (p.contains("p_tr") && p.contains("p_tr_dbm")) throw ConfigError("power: p_tr given twice");
      if (p.contains("noise") && p.contains("noise_dbm")) throw ConfigError("power: noise given twice");
      if (p.contains("p_tr")) c.power.p_tr = p["p_tr"].get<double>();
      if (p.contains("p_tr_dbm")) c.power.p_tr = dbm_to_watts(p["p_tr_dbm"].get<double>());
      if (p.contains("noise")) c.power.noise = p["noise"].get<double>();
      if (p.contains("noise_dbm")) c.power.noise = dbm_to_watts(p["noise_dbm"].get<double>());
      c.power.delta_p = p.value("delta_p", c.power.delta_p);
      c.power.p_ns = p.value("p_ns", c.power.p_ns);
      c.power.p_md = p.value("p_md", c.power.p_md);
      c.power.p_ms = p.value("p_ms", c.power.p_ms);
    }
    if (j.contains("quadrature")) {
      const auto& q = j["quadrature"];
      check_keys(q,
                 {"r_max", "rel_tol", "max_depth", "z_grid", "distance_nodes", "interferer_nodes", "radial_nodes",
                  "angle_nodes"},
                 "quadrature");
      c.quad.r_max = q.value("r_max", c.quad.r_max);
      c.quad.rel_tol = q.value("rel_tol", c.quad.rel_tol);
      c.quad.max_depth = q.value("max_depth", c.quad.max_depth);
      c.quad.z_grid = q.value("z_grid", c.quad.z_grid);
      c.quad.distance_nodes = q.value("distance_nodes", c.quad.distance_nodes);
      c.quad.interferer_nodes = q.value("interferer_nodes", c.quad.interferer_nodes);
      c.quad.radial_nodes = q.value("radial_nodes", c.quad.radial_nodes);
      c.quad.angle_nodes = q.value("angle_nodes", c.quad.angle_nodes);
    }
    if (j.contains("model")) {
      const auto& m = j["model"];
      check_keys(m, {"cell_coefficient", "reflection_weight", "coverage_kernel", "single_cross_term"}, "model");
      if (m.contains("cell_coefficient")) {
        const auto s = m["cell_coefficient"].get<std::string>();
        if (s != "exact" && s != "rounded") throw ConfigError("model: cell_coefficient is exact|rounded");
        c.model.cell = s == "exact" ? CellCoefficient::exact : CellCoefficient::rounded;
      }
      if (m.contains("reflection_weight")) {
        const auto s = m["reflection_weight"].get<std::string>();
        if (s != "triangle" && s != "bs_angle") throw ConfigError("model: reflection_weight is triangle|bs_angle");
        c.model.weight = s == "triangle" ? ReflectionWeight::triangle : ReflectionWeight::bs_angle;
      }
      if (m.contains("coverage_kernel")) {
        const auto s = m["coverage_kernel"].get<std::string>();
        if (s != "matched" && s != "varpi") throw ConfigError("model: coverage_kernel is matched|varpi");
        c.model.kernel = s == "matched" ? CoverageKernel::matched : CoverageKernel::varpi;
      }
      c.model.single_cross_term = m.value("single_cross_term", c.model.single_cross_term);
    }
    if (j.contains("simulation")) {
      const auto& s = j["simulation"];
      check_keys(s, {"guard_factor", "ris_margin"}, "simulation");
      c.guard_factor = s.value("guard_factor", c.guard_factor);
      c.ris_margin = s.value("ris_margin", c.ris_margin);
    }
    c.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return c;
}

inline SweepConfig load_sweep_config(const std::string& path, SweepConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in, nullptr, true, true);
  } catch (const std::exception& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  return sweep_config_from_json(j, std::move(base));
}

/// Resolved config as JSON (linear units). Worker count is left out so the
/// echo does not depend on the machine.
inline nlohmann::json to_json(const SweepConfig& c) {
  nlohmann::json ris = nlohmann::json::array();
  for (const auto& r : c.ris) ris.push_back({{"lambda_m", r.lambda_m}, {"elements", r.elements}});
  return {{"name", c.name},
          {"seed", c.seed},
          {"drops", c.drops},
          {"engine", detail::engine_name(c.engine)},
          {"fast", c.fast},
          {"activity", detail::activity_name(c.activity)},
          {c.activity == BsActivity::saturated ? "lambda_active" : "lambda_n", c.lambda_grid},
          {"lambda_u_ratio", c.lambda_u_ratio},
          {"ris", ris},
          {"shape", c.shape},
          {"delta_db", c.delta_db},
          {"alpha", c.alpha},
          {"power",
           {{"p_tr", c.power.p_tr},
            {"delta_p", c.power.delta_p},
            {"p_ns", c.power.p_ns},
            {"p_md", c.power.p_md},
            {"p_ms", c.power.p_ms},
            {"noise", c.power.noise}}},
          {"quadrature",
           {{"r_max", c.quad.r_max},
            {"rel_tol", c.quad.rel_tol},
            {"max_depth", c.quad.max_depth},
            {"z_grid", c.quad.z_grid},
            {"distance_nodes", c.quad.distance_nodes},
            {"interferer_nodes", c.quad.interferer_nodes},
            {"radial_nodes", c.quad.radial_nodes},
            {"angle_nodes", c.quad.angle_nodes}}},
          {"model",
           {{"cell_coefficient", c.model.cell == CellCoefficient::exact ? "exact" : "rounded"},
            {"reflection_weight", c.model.weight == ReflectionWeight::triangle ? "triangle" : "bs_angle"},
            {"coverage_kernel", c.model.kernel == CoverageKernel::matched ? "matched" : "varpi"},
            {"single_cross_term", c.model.single_cross_term}}},
          {"simulation", {{"guard_factor", c.guard_factor}, {"ris_margin", c.ris_margin}}}};
}

// ---------------------------------------------------------------------------
// Presets

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"fig6", "fig7", "fig8", "fig9", "fig10", "fig11"};
  return names;
}

/// Desk-scale figure presets. The (lambda_m, Q) pairs keep equal RIS power
/// between (0.1, 10) / (0.05, 563) and (0.01, 10) / (0.005, 563).
inline SweepConfig preset(const std::string& name) {
  SweepConfig c;
  c.name = name;
  c.fast = true;
  c.drops = 300;
  const std::vector<RisSetup> pairs{{0.0, 1}, {0.1, 10}, {0.01, 10}, {0.05, 563}, {0.005, 563}};
  const std::vector<double> lambdas{0.001, 0.01, 0.1, 1.0, 10.0};
  if (name == "fig6") {
    c.lambda_grid = lambdas;
    c.ris = pairs;
    c.shape = {1, 10};
    c.delta_db = {0.0};
  } else if (name == "fig7") {
    c.lambda_grid = {0.01};
    c.ris = {{0.0, 1}, {0.05, 563}, {0.01, 10}};
    c.shape = {1, 10};
    c.delta_db = {-30.0, -20.0, -10.0, 0.0, 10.0, 20.0, 30.0, 40.0, 50.0};
    c.drops = 1000;
  } else if (name == "fig8" || name == "fig9" || name == "fig10" || name == "fig11") {
    c.lambda_grid = lambdas;
    c.ris = pairs;
    c.shape = {1, 10};
    c.delta_db = {0.0};
  } else {
    throw ConfigError("unknown preset '" + name + "' (fig6..fig11)");
  }
  return c;
}

// ---------------------------------------------------------------------------
// Sweep

namespace detail {

struct GridPoint {
  double lambda_n, lambda_u, lambda_active;
  RisSetup ris;
  int shape;
};

inline std::vector<GridPoint> grid_points(const SweepConfig& c) {
  std::vector<GridPoint> pts;
  for (const auto& r : c.ris)
    for (int s : c.shape)
      for (double l : c.lambda_grid) {
        GridPoint g{l, 0.0, l, r, s};
        if (c.activity != BsActivity::saturated) {
          g.lambda_u = c.lambda_u_ratio * l;
          g.lambda_active = active_bs_probability(g.lambda_u, l).active_intensity;
        }
        pts.push_back(g);
      }
  return pts;
}

inline void evaluate_point(const SweepConfig& c, const GridPoint& g, std::vector<MetricRow>& rows) {
  const FadingSpec fading{g.shape, c.alpha, g.ris.elements};
  const double area_power = c.power.area_power(g.lambda_active, g.ris.lambda_m, g.ris.elements);
  for (auto& r : rows) {
    r.lambda_n = g.lambda_n;
    r.lambda_u = g.lambda_u;
    r.lambda_active = g.lambda_active;
    r.lambda_m = g.ris.lambda_m;
    r.elements = g.ris.elements;
    r.shape = g.shape;
  }
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (c.engine != EngineSel::analytic) {
      DropConfig dc;
      dc.lambda_n = g.lambda_n;
      dc.lambda_u = g.lambda_u;
      dc.lambda_m = g.ris.lambda_m;
      dc.activity = c.activity;
      dc.unserved = c.fast ? UnservedCascade::gaussian : UnservedCascade::exact;
      dc.fading = fading;
      dc.power = c.power;
      dc.guard_factor = c.guard_factor;
      dc.ris_margin = c.ris_margin;
      const auto drops = run_drops(dc, c.drops, c.seed, c.workers);
      const auto stats = estimate_signal_stats(drops, c.power.p_tr);
      const auto a = estimate_ase(drops, g.lambda_active);
      for (auto& r : rows) {
        r.drops = c.drops;
        r.sim_coverage = estimate_coverage(drops, db_to_linear(r.delta_db));
        r.sim_ase = a;
        r.sim_signal = stats.signal;
        r.sim_interference = stats.interference;
        r.sim_reflected_interference = stats.reflected_interference;
        r.sim_aee = a.value / area_power;
        r.sim_ece = r.sim_coverage->value / area_power;
      }
    }
    if (c.engine != EngineSel::sim) {
      const auto im = interference_moments(fading, g.lambda_active, g.ris.lambda_m, c.power.p_tr, c.quad, c.model);
      const double sig = mean_signal_power(fading, g.lambda_active, g.ris.lambda_m, c.power.p_tr, c.quad, c.model);
      CoverageParams p;
      p.fading = fading;
      p.lambda_active = g.lambda_active;
      p.lambda_m = g.ris.lambda_m;
      p.power = c.power;
      p.model = c.model;
      const double a = ase(p, c.quad);
      for (auto& r : rows) {
        p.delta = db_to_linear(r.delta_db);
        r.an_coverage = coverage_probability(p, c.quad);
        r.an_ase = a;
        r.an_aee = aee(a, g.lambda_active, g.ris.lambda_m, g.ris.elements, c.power);
        r.an_ece = ece(*r.an_coverage, g.lambda_active, g.ris.lambda_m, g.ris.elements, c.power);
        r.an_signal = sig;
        r.an_interference = im.total();
        r.an_reflected_interference = im.reflected;
      }
    }
  } catch (const std::exception& e) {
    for (auto& r : rows) r.error = e.what();
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (auto& r : rows) r.wall_time = dt;
}

}  // namespace detail

/// One row per (RIS setup, shape, intensity, threshold), in that nesting
/// order. Engine failures are recorded in the row's error field.
inline std::vector<MetricRow> run_sweep(const SweepConfig& c) {
  c.validate();
  const auto pts = detail::grid_points(c);
  std::vector<MetricRow> rows;
  rows.reserve(pts.size() * c.delta_db.size());
  for (const auto& g : pts) {
    std::vector<MetricRow> block(c.delta_db.size());
    for (std::size_t i = 0; i < block.size(); ++i) block[i].delta_db = c.delta_db[i];
    detail::evaluate_point(c, g, block);
    rows.insert(rows.end(), block.begin(), block.end());
  }
  return rows;
}

inline bool any_failed(const std::vector<MetricRow>& rows) {
  return std::any_of(rows.begin(), rows.end(), [](const MetricRow& r) { return !r.error.empty(); });
}

// ---------------------------------------------------------------------------
// Output

inline constexpr int kSchemaVersion = 1;

inline const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{
      "lambda_n",       "lambda_u",          "lambda_active",       "lambda_m",        "elements",
      "shape",          "delta_db",          "drops",               "sim_coverage",    "sim_coverage_lo",
      "sim_coverage_hi", "sim_ase",          "sim_ase_lo",          "sim_ase_hi",      "sim_signal",
      "sim_signal_lo",  "sim_signal_hi",     "sim_interference",    "sim_interference_lo",
      "sim_interference_hi", "sim_i2",       "sim_i2_lo",           "sim_i2_hi",       "sim_aee",
      "sim_ece",        "an_coverage",       "an_ase",              "an_aee",          "an_ece",
      "an_signal",      "an_interference",   "an_i2",               "error"};
  return cols;
}

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string opt(const std::optional<double>& v) { return v ? num(*v) : std::string{}; }

inline void est_cells(std::vector<std::string>& out, const std::optional<Estimate>& e) {
  if (e) {
    out.push_back(num(e->value));
    out.push_back(num(e->lo));
    out.push_back(num(e->hi));
  } else {
    out.insert(out.end(), 3, std::string{});
  }
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string o = "\"";
  for (char ch : s) {
    if (ch == '"') o += '"';
    o += ch == '\n' ? ' ' : ch;
  }
  return o + "\"";
}

inline std::vector<std::string> csv_cells(const MetricRow& r, bool timing) {
  std::vector<std::string> c{num(r.lambda_n),  num(r.lambda_u), num(r.lambda_active),      num(r.lambda_m),
                             std::to_string(r.elements), std::to_string(r.shape), num(r.delta_db),
                             std::to_string(r.drops)};
  est_cells(c, r.sim_coverage);
  est_cells(c, r.sim_ase);
  est_cells(c, r.sim_signal);
  est_cells(c, r.sim_interference);
  est_cells(c, r.sim_reflected_interference);
  for (const auto* v : {&r.sim_aee, &r.sim_ece, &r.an_coverage, &r.an_ase, &r.an_aee, &r.an_ece, &r.an_signal,
                        &r.an_interference, &r.an_reflected_interference})
    c.push_back(opt(*v));
  c.push_back(csv_escape(r.error));
  if (timing) c.push_back(num(r.wall_time));
  return c;
}

}  // namespace detail

/// CSV: a version line, the resolved config as a comment, then header and rows.
inline void write_csv(std::ostream& os, const std::vector<MetricRow>& rows, const SweepConfig& cfg,
                      bool timing = false) {
  os << "# risudn-metrics v" << kSchemaVersion << "\n";
  os << "# config: " << to_json(cfg).dump() << "\n";
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  if (timing) os << ",wall_time";
  os << "\n";
  for (const auto& r : rows) {
    const auto cells = detail::csv_cells(r, timing);
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << "\n";
  }
}

inline nlohmann::json to_json(const MetricRow& r, bool timing = false) {
  nlohmann::json j{{"lambda_n", r.lambda_n},     {"lambda_u", r.lambda_u}, {"lambda_active", r.lambda_active},
                   {"lambda_m", r.lambda_m},     {"elements", r.elements}, {"shape", r.shape},
                   {"delta_db", r.delta_db},     {"drops", r.drops}};
  auto est = [&](const char* key, const std::optional<Estimate>& e) {
    if (e) j[key] = {{"value", e->value}, {"lo", e->lo}, {"hi", e->hi}};
  };
  est("sim_coverage", r.sim_coverage);
  est("sim_ase", r.sim_ase);
  est("sim_signal", r.sim_signal);
  est("sim_interference", r.sim_interference);
  est("sim_i2", r.sim_reflected_interference);
  auto val = [&](const char* key, const std::optional<double>& v) {
    if (v) j[key] = *v;
  };
  val("sim_aee", r.sim_aee);
  val("sim_ece", r.sim_ece);
  val("an_coverage", r.an_coverage);
  val("an_ase", r.an_ase);
  val("an_aee", r.an_aee);
  val("an_ece", r.an_ece);
  val("an_signal", r.an_signal);
  val("an_interference", r.an_interference);
  val("an_i2", r.an_reflected_interference);
  if (!r.error.empty()) j["error"] = r.error;
  if (timing) j["wall_time"] = r.wall_time;
  return j;
}

inline MetricRow metric_row_from_json(const nlohmann::json& j) {
  MetricRow r;
  r.lambda_n = j.at("lambda_n").get<double>();
  r.lambda_u = j.value("lambda_u", 0.0);
  r.lambda_active = j.at("lambda_active").get<double>();
  r.lambda_m = j.at("lambda_m").get<double>();
  r.elements = j.at("elements").get<int>();
  r.shape = j.at("shape").get<int>();
  r.delta_db = j.at("delta_db").get<double>();
  r.drops = j.value("drops", std::size_t{0});
  auto est = [&](const char* key, std::optional<Estimate>& e) {
    if (j.contains(key)) {
      const auto& v = j[key];
      e = Estimate{v.at("value").get<double>(), v.at("lo").get<double>(), v.at("hi").get<double>(), r.drops};
    }
  };
  est("sim_coverage", r.sim_coverage);
  est("sim_ase", r.sim_ase);
  est("sim_signal", r.sim_signal);
  est("sim_interference", r.sim_interference);
  est("sim_i2", r.sim_reflected_interference);
  auto val = [&](const char* key, std::optional<double>& v) {
    if (j.contains(key)) v = j[key].get<double>();
  };
  val("sim_aee", r.sim_aee);
  val("sim_ece", r.sim_ece);
  val("an_coverage", r.an_coverage);
  val("an_ase", r.an_ase);
  val("an_aee", r.an_aee);
  val("an_ece", r.an_ece);
  val("an_signal", r.an_signal);
  val("an_interference", r.an_interference);
  val("an_i2", r.an_reflected_interference);
  r.error = j.value("error", std::string{});
  return r;
}

/// JSON lines: a header object with the schema version and config, then one row per line.
inline void write_jsonl(std::ostream& os, const std::vector<MetricRow>& rows, const SweepConfig& cfg,
                        bool timing = false) {
  os << nlohmann::json{{"schema", "risudn-metrics"}, {"version", kSchemaVersion}, {"config", to_json(cfg)}}.dump()
     << "\n";
  for (const auto& r : rows) os << to_json(r, timing).dump() << "\n";
}

inline std::vector<MetricRow> read_jsonl(std::istream& is) {
  std::vector<MetricRow> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    if (j.contains("schema")) continue;
    rows.push_back(metric_row_from_json(j));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Comparison

struct Tolerances {
  double coverage_abs = 0.05;
  double ase_rel = 0.15;
  double moment_rel = 0.10;
};

struct MetricDeviation {
  std::string metric;
  bool relative = true;
  double max_dev = 0.0;
  double mean_dev = 0.0;
  double tolerance = 0.0;
  std::size_t n = 0;
  bool pass = true;
};

struct MonotoneCheck {
  std::string group;  // RIS setup, shape and threshold
  bool sim_decreasing = true;
  bool analytic_decreasing = true;
};

struct CompareReport {
  std::vector<MetricDeviation> metrics;
  std::vector<std::string> bound_anomalies;  // analytic coverage below the simulated lower CI bound
  std::vector<MonotoneCheck> monotone;
  bool pass = true;
};

inline CompareReport compare_report(const std::vector<MetricRow>& rows, const Tolerances& tol = {}) {
  CompareReport rep;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (!r.error.empty()) continue;
    if (!r.sim_coverage || !r.an_coverage || !r.sim_ase || !r.an_ase || !r.sim_signal || !r.an_signal ||
        !r.sim_interference || !r.an_interference)
      throw std::invalid_argument("compare_report: row " + std::to_string(i) +
                                  " lacks simulated or analytic columns");
  }
  struct Spec {
    const char* name;
    bool relative;
    double tol;
    std::function<std::pair<double, double>(const MetricRow&)> get;
  };
  const std::vector<Spec> specs{
      {"coverage", false, tol.coverage_abs, [](const MetricRow& r) {
         return std::pair{r.sim_coverage->value, *r.an_coverage};
       }},
      {"ase", true, tol.ase_rel, [](const MetricRow& r) { return std::pair{r.sim_ase->value, *r.an_ase}; }},
      {"signal", true, tol.moment_rel,
       [](const MetricRow& r) { return std::pair{r.sim_signal->value, *r.an_signal}; }},
      {"interference", true, tol.moment_rel,
       [](const MetricRow& r) { return std::pair{r.sim_interference->value, *r.an_interference}; }},
  };
  for (const auto& s : specs) {
    MetricDeviation d;
    d.metric = s.name;
    d.relative = s.relative;
    d.tolerance = s.tol;
    double sum = 0.0;
    for (const auto& r : rows) {
      if (!r.error.empty()) continue;
      const auto [sim, an] = s.get(r);
      double dev = std::abs(an - sim);
      if (s.relative) dev = sim != 0.0 ? dev / std::abs(sim) : (an == 0.0 ? 0.0 : std::abs(an));
      d.max_dev = std::max(d.max_dev, dev);
      sum += dev;
      ++d.n;
    }
    d.mean_dev = d.n ? sum / static_cast<double>(d.n) : 0.0;
    d.pass = d.max_dev <= d.tolerance;
    rep.pass = rep.pass && d.pass;
    rep.metrics.push_back(d);
  }

  std::map<std::string, std::vector<const MetricRow*>> groups;
  for (const auto& r : rows) {
    if (!r.error.empty()) continue;
    char key[160];
    std::snprintf(key, sizeof key, "lambda_m=%g Q=%d shape=%d delta_db=%g", r.lambda_m, r.elements, r.shape,
                  r.delta_db);
    if (*r.an_coverage < r.sim_coverage->lo) {
      char msg[256];
      std::snprintf(msg, sizeof msg, "%s lambda_active=%g: analytic %.4f < simulated lower bound %.4f", key,
                    r.lambda_active, *r.an_coverage, r.sim_coverage->lo);
      rep.bound_anomalies.emplace_back(msg);
    }
    groups[key].push_back(&r);
  }
  for (auto& [key, g] : groups) {
    if (g.size() < 2) continue;
    std::stable_sort(g.begin(), g.end(),
                     [](const MetricRow* a, const MetricRow* b) { return a->lambda_active < b->lambda_active; });
    MonotoneCheck m;
    m.group = key;
    for (std::size_t i = 1; i < g.size(); ++i) {
      // Simulated values may wobble within their intervals.
      if (g[i]->sim_coverage->lo > g[i - 1]->sim_coverage->hi) m.sim_decreasing = false;
      if (*g[i]->an_coverage > *g[i - 1]->an_coverage + 1e-9) m.analytic_decreasing = false;
    }
    rep.monotone.push_back(m);
  }
  return rep;
}

inline nlohmann::json to_json(const CompareReport& rep) {
  nlohmann::json j{{"pass", rep.pass}, {"bound_anomalies", rep.bound_anomalies}};
  j["metrics"] = nlohmann::json::array();
  for (const auto& d : rep.metrics)
    j["metrics"].push_back({{"metric", d.metric},
                            {"deviation", d.relative ? "relative" : "absolute"},
                            {"max", d.max_dev},
                            {"mean", d.mean_dev},
                            {"tolerance", d.tolerance},
                            {"rows", d.n},
                            {"pass", d.pass}});
  j["monotone_coverage"] = nlohmann::json::array();
  for (const auto& m : rep.monotone)
    j["monotone_coverage"].push_back(
        {{"group", m.group}, {"sim_decreasing", m.sim_decreasing}, {"analytic_decreasing", m.analytic_decreasing}});
  return j;
}

inline std::string render_text(const CompareReport& rep) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-14s %-9s %12s %12s %10s  %s\n", "metric", "kind", "max dev", "mean dev",
                "tol", "status");
  os << line;
  for (const auto& d : rep.metrics) {
    std::snprintf(line, sizeof line, "%-14s %-9s %12.4g %12.4g %10.4g  %s\n", d.metric.c_str(),
                  d.relative ? "relative" : "absolute", d.max_dev, d.mean_dev, d.tolerance,
                  d.pass ? "ok" : "FAIL");
    os << line;
  }
  os << "bound-direction anomalies: " << rep.bound_anomalies.size() << "\n";
  for (const auto& a : rep.bound_anomalies) os << "  " << a << "\n";
  for (const auto& m : rep.monotone)
    os << "coverage vs lambda_active [" << m.group << "]: sim " << (m.sim_decreasing ? "decreasing" : "NOT decreasing")
       << ", analytic " << (m.analytic_decreasing ? "decreasing" : "NOT decreasing") << "\n";
  os << (rep.pass ? "overall: within tolerance\n" : "overall: outside tolerance\n");
  return os.str();
}

}  // namespace risudn
