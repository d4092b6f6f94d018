#include <gtest/gtest.h>

#include <sstream>

#include "risudn/harness.hpp"

using namespace risudn;
using nlohmann::json;

namespace {

SweepConfig small_config() {
  SweepConfig c;
  c.drops = 60;
  c.fast = true;
  c.lambda_grid = {0.01, 0.1};
  c.ris = {{0.0, 1}, {0.01, 10}};
  c.delta_db = {-10.0, 0.0};
  c.quad.distance_nodes = 16;
  c.quad.interferer_nodes = 12;
  c.quad.radial_nodes = 16;
  c.quad.angle_nodes = 6;
  c.quad.z_grid = 16;
  return c;
}

MetricRow row(double lam, double sim_cov, double an_cov) {
  MetricRow r;
  r.lambda_active = lam;
  r.sim_coverage = Estimate{sim_cov, sim_cov - 0.01, sim_cov + 0.01, 1000};
  r.an_coverage = an_cov;
  r.sim_ase = Estimate{1.0, 0.9, 1.1, 1000};
  r.an_ase = 1.0;
  r.sim_signal = Estimate{2.0, 1.9, 2.1, 1000};
  r.an_signal = 2.0;
  r.sim_interference = Estimate{3.0, 2.9, 3.1, 1000};
  r.an_interference = 3.0;
  return r;
}

}  // namespace

TEST(Config, ParsesNestedSectionsAndUnits) {
  const auto c = sweep_config_from_json(json::parse(R"({
    "name": "t", "seed": 7, "drops": 10, "engine": "sim",
    "lambda_active": [0.01, 0.1],
    "ris": [{"lambda_m": 0.05, "elements": 563}],
    "shape": 10, "delta_db": [0, 10],
    "power": {"p_tr_dbm": 30, "noise_dbm": -100},
    "quadrature": {"z_grid": 24},
    "model": {"coverage_kernel": "varpi", "reflection_weight": "bs_angle"},
    "simulation": {"ris_margin": 10}
  })"));
  EXPECT_EQ(c.name, "t");
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.engine, EngineSel::sim);
  EXPECT_EQ(c.lambda_grid.size(), 2u);
  EXPECT_EQ(c.ris[0].elements, 563);
  EXPECT_EQ(c.shape, std::vector<int>{10});
  EXPECT_NEAR(c.power.p_tr, 1.0, 1e-12);
  EXPECT_NEAR(c.power.noise, 1e-13, 1e-25);
  EXPECT_EQ(c.quad.z_grid, 24);
  EXPECT_EQ(c.model.kernel, CoverageKernel::varpi);
  EXPECT_EQ(c.model.weight, ReflectionWeight::bs_angle);
  EXPECT_EQ(c.ris_margin, 10.0);
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(sweep_config_from_json(json::parse(R"({"lambda": 1})")), ConfigError);
  EXPECT_THROW(sweep_config_from_json(json::parse(R"({"power": {"ptr": 1}})")), ConfigError);
  EXPECT_THROW(sweep_config_from_json(json::parse(R"({"engine": "fast"})")), ConfigError);
  EXPECT_THROW(sweep_config_from_json(json::parse(R"({"alpha": 2})")), ConfigError);
  EXPECT_THROW(sweep_config_from_json(json::parse(R"({"drops": "many"})")), ConfigError);
  EXPECT_THROW(sweep_config_from_json(json::parse(R"({"lambda_active": [0.1], "lambda_n": [0.1]})")), ConfigError);
  EXPECT_THROW(sweep_config_from_json(json::parse(R"({"power": {"p_tr": 1, "p_tr_dbm": 30}})")), ConfigError);
  EXPECT_THROW(load_sweep_config("/nonexistent/config.json"), ConfigError);
}

TEST(Config, RoundTripsThroughJson) {
  const auto c = small_config();
  const auto back = sweep_config_from_json(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
}

TEST(Presets, AllNamedPresetsResolve) {
  for (const auto& name : preset_names()) {
    const auto c = preset(name);
    EXPECT_NO_THROW(c.validate()) << name;
    EXPECT_EQ(c.name, name);
  }
  EXPECT_THROW(preset("fig99"), ConfigError);
}

TEST(Sweep, RowsAreOrderedAndComplete) {
  const auto c = small_config();
  const auto rows = run_sweep(c);
  ASSERT_EQ(rows.size(), 8u);
  EXPECT_FALSE(any_failed(rows));
  EXPECT_EQ(rows[0].lambda_m, 0.0);
  EXPECT_EQ(rows[0].lambda_active, 0.01);
  EXPECT_EQ(rows[0].delta_db, -10.0);
  EXPECT_EQ(rows[1].delta_db, 0.0);
  EXPECT_EQ(rows[2].lambda_active, 0.1);
  EXPECT_EQ(rows[4].lambda_m, 0.01);
  for (const auto& r : rows) {
    ASSERT_TRUE(r.sim_coverage && r.an_coverage && r.sim_ase && r.an_ase);
    EXPECT_EQ(r.drops, 60u);
    EXPECT_GE(*r.an_coverage, 0.0);
    EXPECT_LE(*r.an_coverage, 1.0);
  }
  // No RIS: reflected interference is identically zero in both engines.
  EXPECT_EQ(rows[0].sim_reflected_interference->value, 0.0);
  EXPECT_EQ(*rows[0].an_reflected_interference, 0.0);
}

TEST(Sweep, EngineSelectionLeavesOtherColumnsEmpty) {
  auto c = small_config();
  c.engine = EngineSel::analytic;
  auto rows = run_sweep(c);
  EXPECT_FALSE(rows[0].sim_coverage);
  EXPECT_TRUE(rows[0].an_coverage);
  c.engine = EngineSel::sim;
  rows = run_sweep(c);
  EXPECT_TRUE(rows[0].sim_coverage);
  EXPECT_FALSE(rows[0].an_coverage);
}

TEST(Output, CsvIsByteIdenticalAcrossWorkerCounts) {
  auto c = small_config();
  c.engine = EngineSel::sim;
  c.workers = 1;
  std::ostringstream a, b;
  write_csv(a, run_sweep(c), c);
  c.workers = 4;
  write_csv(b, run_sweep(c), c);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().rfind("# risudn-metrics v1\n", 0), 0u);
  EXPECT_EQ(a.str().find("wall_time"), std::string::npos);
}

TEST(Output, CsvHeaderListsColumns) {
  const auto c = small_config();
  std::ostringstream os;
  write_csv(os, {}, c, true);
  std::istringstream is(os.str());
  std::string l1, l2, header;
  std::getline(is, l1);
  std::getline(is, l2);
  std::getline(is, header);
  EXPECT_EQ(l2.rfind("# config: {", 0), 0u);
  EXPECT_EQ(header.rfind("lambda_n,lambda_u,lambda_active,lambda_m,elements,shape,delta_db,drops", 0), 0u);
  EXPECT_NE(header.find(",wall_time"), std::string::npos);
}

TEST(Output, JsonlRoundTrip) {
  auto c = small_config();
  c.lambda_grid = {0.01};
  const auto rows = run_sweep(c);
  std::stringstream ss;
  write_jsonl(ss, rows, c);
  const auto back = read_jsonl(ss);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].sim_coverage->value, rows[i].sim_coverage->value);
    EXPECT_EQ(*back[i].an_ase, *rows[i].an_ase);
    EXPECT_EQ(back[i].lambda_m, rows[i].lambda_m);
  }
}

TEST(Compare, IdenticalColumnsHaveZeroDeviation) {
  const std::vector<MetricRow> rows{row(0.01, 0.8, 0.8), row(0.1, 0.7, 0.7)};
  const auto rep = compare_report(rows);
  EXPECT_TRUE(rep.pass);
  for (const auto& m : rep.metrics) EXPECT_EQ(m.max_dev, 0.0) << m.metric;
  EXPECT_TRUE(rep.bound_anomalies.empty());
  ASSERT_EQ(rep.monotone.size(), 1u);
  EXPECT_TRUE(rep.monotone[0].sim_decreasing);
  EXPECT_TRUE(rep.monotone[0].analytic_decreasing);
}

TEST(Compare, FlagsBoundAnomaliesAndTrendBreaks) {
  const std::vector<MetricRow> rows{row(0.01, 0.5, 0.4), row(0.1, 0.7, 0.75)};
  const auto rep = compare_report(rows);
  EXPECT_FALSE(rep.pass);
  EXPECT_EQ(rep.bound_anomalies.size(), 1u);
  ASSERT_EQ(rep.monotone.size(), 1u);
  EXPECT_FALSE(rep.monotone[0].sim_decreasing);
  EXPECT_FALSE(rep.monotone[0].analytic_decreasing);
  EXPECT_NE(render_text(rep).find("FAIL"), std::string::npos);
  EXPECT_FALSE(to_json(rep)["pass"].get<bool>());
}

TEST(Compare, RequiresBothEngines) {
  auto r = row(0.01, 0.5, 0.5);
  r.an_ase.reset();
  EXPECT_THROW(compare_report({r}), std::invalid_argument);
  r.error = "diverged";
  EXPECT_NO_THROW(compare_report({r}));
}
