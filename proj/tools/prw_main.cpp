// Command-line front end for the projection-robust Wasserstein experiment
// harness. Every experiment writes a CSV table plus a JSON sidecar with the
// config echo and summary statistics.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "prw/harness.hpp"
#include "prw/parallel.hpp"

namespace {

void apply_config_file(const std::string& path, prw::ExperimentConfig& config) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  nlohmann::json j;
  in >> j;
  if (j.contains("kind")) config.kind = j["kind"].get<std::string>();
  if (j.contains("dv_pairs")) {
    config.dv_pairs.clear();
    for (const auto& item : j["dv_pairs"])
      config.dv_pairs.emplace_back(item.at("d").get<int>(), item.at("v").get<double>());
  }
  if (j.contains("n_grid")) config.n_grid = j["n_grid"].get<std::vector<int>>();
  if (j.contains("k")) config.k = j["k"].get<int>();
  if (j.contains("runs")) config.runs = j["runs"].get<int>();
  if (j.contains("n_proj")) config.n_proj = j["n_proj"].get<int>();
  if (j.contains("record_w2")) config.record_w2 = j["record_w2"].get<bool>();
  if (j.contains("mixture")) config.mixture = j["mixture"].get<int>();
  if (j.contains("ecs_alpha")) config.ecs_alpha = j["ecs_alpha"].get<double>();
  if (j.contains("m_grid")) config.m_grid = j["m_grid"].get<std::vector<int>>();
  if (j.contains("reference_n")) config.reference_n = j["reference_n"].get<int>();
  if (j.contains("with_meprw")) config.with_meprw = j["with_meprw"].get<bool>();
  if (j.contains("out_path")) config.out_path = j["out_path"].get<std::string>();
  if (j.contains("master_seed")) config.master_seed.value = j["master_seed"].get<std::uint64_t>();
  if (j.contains("threads")) config.threads = j["threads"].get<int>();
  if (j.contains("rsgan")) {
    const auto& r = j["rsgan"];
    if (r.contains("gamma0")) config.rsgan.gamma0 = r["gamma0"].get<double>();
    if (r.contains("max_iter")) config.rsgan.max_iter = r["max_iter"].get<int>();
    if (r.contains("step_tol")) config.rsgan.step_tol = r["step_tol"].get<double>();
    if (r.contains("use_sinkhorn")) config.rsgan.use_sinkhorn = r["use_sinkhorn"].get<bool>();
  }
  if (j.contains("fit")) {
    const auto& f = j["fit"];
    if (f.contains("outer_iters")) config.fit.outer_iters = f["outer_iters"].get<int>();
    if (f.contains("inner_ascent_steps"))
      config.fit.inner_ascent_steps = f["inner_ascent_steps"].get<int>();
    if (f.contains("inner_lr")) config.fit.inner_lr = f["inner_lr"].get<double>();
    if (f.contains("mc_points")) config.fit.mc_points = f["mc_points"].get<int>();
    if (f.contains("model_samples")) config.fit.model_samples = f["model_samples"].get<int>();
    if (f.contains("outer_lr")) config.fit.outer_lr = f["outer_lr"].get<double>();
  }
}

// flag values parsed by CLI11; merged over file values only when given
struct Flags {
  std::string config_path;
  int d = 0;
  double v = 0.0;
  int k = 0;
  int runs = 0;
  std::vector<int> n_grid;
  int n_proj = 0;
  bool record_w2 = false;
  int mixture = 0;
  double alpha = 0.0;
  std::vector<int> m_grid;
  int reference_n = 0;
  int outer_iters = 0;
  int mc_points = 0;
  std::uint64_t seed = 0;
  int threads = -1;
  std::string out;
};

void add_experiment_flags(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON config file (flags override its values)");
  cmd->add_option("--d", flags.d, "hypercube dimension");
  cmd->add_option("--v", flags.v, "hypercube half-width");
  cmd->add_option("--k", flags.k, "projection dimension");
  cmd->add_option("--runs", flags.runs, "independent repetitions per cell");
  cmd->add_option("--n-grid", flags.n_grid, "sample sizes")->delimiter(',');
  cmd->add_option("--proj", flags.n_proj, "Monte Carlo projections for iprw");
  cmd->add_flag("--record-w2", flags.record_w2, "also record the full W2 column");
  cmd->add_option("--mixture", flags.mixture, "mixture kind (8, 12 or 25)");
  cmd->add_option("--alpha", flags.alpha, "stable tail index for the ECS model");
  cmd->add_option("--m-grid", flags.m_grid, "model sample counts")->delimiter(',');
  cmd->add_option("--reference-n", flags.reference_n, "surrogate reference sample size");
  cmd->add_option("--outer-iters", flags.outer_iters, "ADAM iterations per fit");
  cmd->add_option("--mc-points", flags.mc_points, "Monte Carlo points per objective");
  cmd->add_option("--seed", flags.seed, "master seed");
  cmd->add_option("--threads", flags.threads, "worker threads (0: PRW_THREADS or hardware)");
  cmd->add_option("--out", flags.out, "output CSV path");
}

prw::ExperimentConfig assemble(const std::string& kind, CLI::App* cmd, const Flags& flags) {
  prw::ExperimentConfig config;
  config.kind = kind;
  if (kind == "clt") config.n_grid = {100, 500, 1000};
  if (kind == "consistency") config.n_grid = {500, 2000, 10000};
  if (kind == "ecs-consistency") config.n_grid = {500, 2000};

  if (cmd->count("--config")) apply_config_file(flags.config_path, config);
  config.kind = kind;  // the subcommand wins over a file's kind field
  if (config.dv_pairs.empty()) config.dv_pairs = {{30, 5.0}};

  if (cmd->count("--d") || cmd->count("--v")) {
    const int d = cmd->count("--d") ? flags.d : config.dv_pairs.front().first;
    const double v = cmd->count("--v") ? flags.v : config.dv_pairs.front().second;
    config.dv_pairs = {{d, v}};
  }
  if (cmd->count("--k")) config.k = flags.k;
  if (cmd->count("--runs")) config.runs = flags.runs;
  if (cmd->count("--n-grid")) config.n_grid = flags.n_grid;
  if (cmd->count("--proj")) config.n_proj = flags.n_proj;
  if (cmd->count("--record-w2")) config.record_w2 = flags.record_w2;
  if (cmd->count("--mixture")) config.mixture = flags.mixture;
  if (cmd->count("--alpha")) config.ecs_alpha = flags.alpha;
  if (cmd->count("--m-grid")) config.m_grid = flags.m_grid;
  if (cmd->count("--reference-n")) config.reference_n = flags.reference_n;
  if (cmd->count("--outer-iters")) config.fit.outer_iters = flags.outer_iters;
  if (cmd->count("--mc-points")) config.fit.mc_points = flags.mc_points;
  if (cmd->count("--seed")) config.master_seed.value = flags.seed;
  if (cmd->count("--threads")) config.threads = flags.threads;
  if (cmd->count("--out")) config.out_path = flags.out;
  return config;
}

int run_and_write(const prw::ExperimentConfig& config) {
  const prw::ExperimentResult result = prw::run_experiment(config);
  result.table.write_csv(config.out_path);
  prw::write_summary_json(config.out_path, config, result);
  std::printf("%s: %zu rows -> %s (threads=%d, seed=%llu)\n", config.kind.c_str(),
              result.table.rows.size(), config.out_path.c_str(),
              prw::effective_threads(config.threads),
              static_cast<unsigned long long>(config.master_seed.value));
  return result.table.rows.empty() ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"projection-robust Wasserstein distances and estimators"};
  app.require_subcommand(1);

  Flags flags;
  const std::vector<std::string> kinds = {"convergence", "consistency", "meprw-vs-mprw", "clt",
                                          "ecs-consistency"};
  for (const std::string& kind : kinds) {
    CLI::App* cmd = app.add_subcommand(kind, kind + " experiment");
    add_experiment_flags(cmd, flags);
    cmd->callback([&flags, cmd, kind]() {
      (void)flags;
      std::exit(run_and_write(assemble(kind, cmd, flags)));
    });
  }

  std::string rate_in, rate_metric = "iprw";
  CLI::App* rate = app.add_subcommand("rate-fit", "OLS slope of log(mean metric) vs log(n)");
  rate->add_option("--in", rate_in, "input CSV")->required();
  rate->add_option("--metric", rate_metric, "metric name");
  rate->callback([&]() {
    const prw::ResultTable table = prw::ResultTable::read_csv(rate_in);
    const prw::RateFit fit = prw::fit_rate(table, rate_metric);
    std::printf("slope=%.6f intercept=%.6f r2=%.6f\n", fit.slope, fit.intercept, fit.r2);
    std::exit(0);
  });

  CLI::App* self = app.add_subcommand("selftest", "sandwich/translation/k=d invariant suite");
  self->callback([&]() {
    std::string report;
    const int failures = prw::selftest(report);
    std::fputs(report.c_str(), stdout);
    std::printf("selftest: %s\n", failures == 0 ? "PASS" : "FAIL");
    std::exit(failures == 0 ? 0 : 1);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
