// Command-line front end: simulate, analyze, sweep, compare, preset <figN>.
// Exit codes: 0 success, 1 row failures, 2 configuration error.

#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "risudn/harness.hpp"

namespace {

using namespace risudn;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> drops;
  std::optional<unsigned> workers;
  std::string out;
  std::string format = "csv";
  std::string engine;
  bool fast = false;
  bool timing = false;
  std::string preset;
  std::string rows;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "JSON experiment config");
  sub->add_option("--seed", o.seed, "master RNG seed");
  sub->add_option("--drops", o.drops, "Monte Carlo drops per grid point");
  sub->add_option("--workers", o.workers, "simulation threads (0: all cores)");
  sub->add_option("--out", o.out, "output file (default: stdout)");
  sub->add_option("--format", o.format, "csv or json (JSON lines)")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--engine", o.engine, "sim, analytic or both")->check(CLI::IsMember({"sim", "analytic", "both"}));
  sub->add_flag("--fast", o.fast, "Gaussian unserved cascades in the simulator");
  sub->add_flag("--timing", o.timing, "append per-row wall time");
}

SweepConfig resolve(const Options& o, SweepConfig base, std::optional<EngineSel> forced) {
  SweepConfig c = o.config.empty() ? std::move(base) : load_sweep_config(o.config, std::move(base));
  if (o.seed) c.seed = *o.seed;
  if (o.drops) c.drops = *o.drops;
  if (o.workers) c.workers = *o.workers;
  if (o.fast) c.fast = true;
  if (forced) c.engine = *forced;
  if (!o.engine.empty()) {
    if (forced && detail::parse_engine(o.engine) != *forced)
      throw ConfigError("--engine conflicts with the subcommand");
    c.engine = detail::parse_engine(o.engine);
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ConfigError("cannot open output '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

int emit_rows(const Options& o, const SweepConfig& c, const std::vector<MetricRow>& rows) {
  Output out(o.out);
  if (o.format == "json")
    write_jsonl(out.stream(), rows, c, o.timing);
  else
    write_csv(out.stream(), rows, c, o.timing);
  for (const auto& r : rows)
    if (!r.error.empty())
      std::cerr << "row failed (lambda_active=" << r.lambda_active << ", lambda_m=" << r.lambda_m
                << ", Q=" << r.elements << ", shape=" << r.shape << ", delta_db=" << r.delta_db << "): " << r.error
                << "\n";
  return any_failed(rows) ? 1 : 0;
}

int emit_report(const Options& o, const CompareReport& rep) {
  Output out(o.out);
  if (o.format == "json")
    out.stream() << to_json(rep).dump(2) << "\n";
  else
    out.stream() << render_text(rep);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RIS-assisted ultra-dense network: simulation and analysis"};
  app.require_subcommand(1);
  Options o;

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo engine only");
  auto* analyze = app.add_subcommand("analyze", "analytic engine only");
  auto* sweep = app.add_subcommand("sweep", "run the configured grid");
  auto* compare = app.add_subcommand("compare", "simulation vs analysis report");
  auto* pre = app.add_subcommand("preset", "desk-scale figure presets");
  for (auto* s : {simulate, analyze, sweep, compare, pre}) add_common(s, o);
  compare->add_option("--rows", o.rows, "compare existing JSON-lines rows instead of running");
  pre->add_option("name", o.preset, "fig6 .. fig11")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (simulate->parsed()) {
      const auto c = resolve(o, {}, EngineSel::sim);
      return emit_rows(o, c, run_sweep(c));
    }
    if (analyze->parsed()) {
      const auto c = resolve(o, {}, EngineSel::analytic);
      return emit_rows(o, c, run_sweep(c));
    }
    if (sweep->parsed()) {
      const auto c = resolve(o, {}, std::nullopt);
      return emit_rows(o, c, run_sweep(c));
    }
    if (compare->parsed()) {
      std::vector<MetricRow> rows;
      if (!o.rows.empty()) {
        std::ifstream in(o.rows);
        if (!in) throw ConfigError("cannot open rows '" + o.rows + "'");
        try {
          rows = read_jsonl(in);
        } catch (const std::exception& e) {
          throw ConfigError(std::string("rows: ") + e.what());
        }
      } else {
        rows = run_sweep(resolve(o, {}, EngineSel::both));
      }
      const int rc = emit_report(o, compare_report(rows));
      return any_failed(rows) ? 1 : rc;
    }
    if (pre->parsed()) {
      const auto c = resolve(o, preset(o.preset), std::nullopt);
      return emit_rows(o, c, run_sweep(c));
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
