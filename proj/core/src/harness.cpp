#include "prw/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "prw/parallel.hpp"

namespace prw {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

MixtureSpec mixture_spec(int kind) {
  MixtureSpec spec;
  spec.centers = mixture_centers(kind);
  return spec;
}

double mean_of(const std::vector<double>& xs) {
  double acc = 0.0;
  for (double x : xs) acc += x;
  return acc / static_cast<double>(xs.size());
}

double std_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

}  // namespace

void ResultTable::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  out << csv_string();
}

std::string ResultTable::csv_string() const {
  std::string out = "experiment,params,n,run,metric,value,wall_time_s\n";
  char buf[64];
  for (const ResultRow& row : rows) {
    out += row.experiment;
    out += ',';
    out += row.params;
    out += ',';
    out += std::to_string(row.n);
    out += ',';
    out += std::to_string(row.run);
    out += ',';
    out += row.metric;
    out += ',';
    out += format_value(row.value);
    std::snprintf(buf, sizeof(buf), ",%.6f\n", row.wall_time_s);
    out += buf;
  }
  return out;
}

ResultTable ResultTable::read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "experiment,params,n,run,metric,value,wall_time_s")
    throw std::runtime_error("read_csv: unexpected header in " + path);
  ResultTable table;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    ResultRow row;
    std::string field;
    std::getline(ss, row.experiment, ',');
    std::getline(ss, row.params, ',');
    std::getline(ss, field, ',');
    row.n = std::stol(field);
    std::getline(ss, field, ',');
    row.run = std::stoi(field);
    std::getline(ss, row.metric, ',');
    std::getline(ss, field, ',');
    row.value = std::stod(field);
    std::getline(ss, field, ',');
    row.wall_time_s = std::stod(field);
    table.rows.push_back(std::move(row));
  }
  return table;
}

ExperimentResult run_convergence(const ExperimentConfig& config) {
  if (config.n_grid.empty() || config.runs < 1)
    throw InvalidInputError("run_convergence: empty n grid or runs < 1");
  const std::size_t cells =
      config.dv_pairs.size() * config.n_grid.size() * static_cast<std::size_t>(config.runs);
  std::vector<std::vector<ResultRow>> cell_rows(cells);

  parallel_for(cells, config.threads, [&](std::size_t flat) {
    const std::size_t per_pair = config.n_grid.size() * static_cast<std::size_t>(config.runs);
    const std::size_t pair_idx = flat / per_pair;
    const std::size_t rest = flat % per_pair;
    const int n_idx = static_cast<int>(rest / config.runs);
    const int run = static_cast<int>(rest % config.runs);
    const auto [d, v] = config.dv_pairs[pair_idx];
    const int n = config.n_grid[n_idx];
    const std::string params =
        "d=" + format_number(d) + ";v=" + format_number(v) + ";k=" + std::to_string(config.k);
    const std::uint64_t base = static_cast<std::uint64_t>(flat) * 8;

    std::vector<ResultRow>& rows = cell_rows[flat];
    try {
      const DiscreteMeasure mu =
          make_empirical(sample_hypercube(d, v, n, derive_seed(config.master_seed, base)));
      const DiscreteMeasure nu =
          make_empirical(sample_hypercube(d, v, n, derive_seed(config.master_seed, base + 1)));

      Clock::time_point start = Clock::now();
      const double iprw_value =
          iprw(mu, nu, 2.0, config.k, config.n_proj, derive_seed(config.master_seed, base + 2));
      rows.push_back({config.kind, params, n, run, "iprw", iprw_value, seconds_since(start)});

      RsganConfig rsgan = config.rsgan;
      rsgan.k = config.k;
      rsgan.seed = derive_seed(config.master_seed, base + 3);
      start = Clock::now();
      const PrwResult prw = prw2_rsgan(mu, nu, rsgan);
      rows.push_back({config.kind, params, n, run, "prw", prw.value, seconds_since(start)});

      if (config.record_w2) {
        start = Clock::now();
        const double w2 = wasserstein_p(mu, nu, 2.0);
        rows.push_back({config.kind, params, n, run, "w2", w2, seconds_since(start)});
      }
    } catch (const std::exception&) {
      rows.clear();  // failed cell recorded as missing, not fatal
    }
  });

  ExperimentResult result;
  for (const auto& rows : cell_rows)
    result.table.rows.insert(result.table.rows.end(), rows.begin(), rows.end());
  return result;
}

namespace {

ThetaRef gaussian_reference(const ExperimentConfig& config) {
  const DiscreteMeasure ref_data = make_empirical(sample_gaussian_mixture(
      mixture_spec(config.mixture), config.reference_n, derive_seed(config.master_seed, 1)));
  FitConfig fit = config.fit;
  fit.seed = derive_seed(config.master_seed, 2);
  const auto [params, trace] = fit_mprw_gaussian(ref_data, fit);
  ThetaRef ref;
  ref.mean = params.mean;
  ref.sigma2 = params.sigma2;
  ref.present = true;
  return ref;
}

}  // namespace

ExperimentResult run_consistency(const ExperimentConfig& config) {
  if (config.n_grid.empty() || config.runs < 1)
    throw InvalidInputError("run_consistency: empty n grid or runs < 1");
  ExperimentResult result;
  result.theta_ref = gaussian_reference(config);
  const std::string params = "mixture=" + std::to_string(config.mixture);

  const std::size_t cells = config.n_grid.size() * static_cast<std::size_t>(config.runs);
  std::vector<std::vector<ResultRow>> cell_rows(cells);
  parallel_for(cells, config.threads, [&](std::size_t flat) {
    const int n_idx = static_cast<int>(flat / config.runs);
    const int run = static_cast<int>(flat % config.runs);
    const int n = config.n_grid[n_idx];
    const std::uint64_t base = 16 + static_cast<std::uint64_t>(flat) * 8;
    std::vector<ResultRow>& rows = cell_rows[flat];
    try {
      const DiscreteMeasure data = make_empirical(sample_gaussian_mixture(
          mixture_spec(config.mixture), n, derive_seed(config.master_seed, base)));

      FitConfig fit = config.fit;
      fit.seed = derive_seed(config.master_seed, base + 1);
      Clock::time_point start = Clock::now();
      const auto [mprw, trace] = fit_mprw_gaussian(data, fit);
      rows.push_back({config.kind, params, n, run, "mprw_loc_err",
                      (mprw.mean - result.theta_ref.mean).norm(), seconds_since(start)});
      rows.push_back({config.kind, params, n, run, "mprw_sigma2", mprw.sigma2, 0.0});

      if (config.with_meprw) {
        FitConfig mefit = config.fit;
        mefit.model_samples = n;
        mefit.seed = derive_seed(config.master_seed, base + 2);
        start = Clock::now();
        const auto [meprw, metrace] = fit_meprw_gaussian(data, mefit);
        rows.push_back({config.kind, params, n, run, "meprw_loc_err",
                        (meprw.mean - result.theta_ref.mean).norm(), seconds_since(start)});
      }
    } catch (const std::exception&) {
      rows.clear();
    }
  });
  for (const auto& rows : cell_rows)
    result.table.rows.insert(result.table.rows.end(), rows.begin(), rows.end());
  return result;
}

ExperimentResult run_meprw_vs_mprw(const ExperimentConfig& config) {
  if (config.m_grid.empty() || config.runs < 1)
    throw InvalidInputError("run_meprw_vs_mprw: empty m grid or runs < 1");
  ExperimentResult result;
  const int data_n = 2000;
  const std::string params =
      "mixture=" + std::to_string(config.mixture) + ";n_data=" + std::to_string(data_n);

  const std::size_t cells = static_cast<std::size_t>(config.runs);
  std::vector<std::vector<ResultRow>> cell_rows(cells);
  parallel_for(cells, config.threads, [&](std::size_t flat) {
    const int run = static_cast<int>(flat);
    const std::uint64_t base = 16 + static_cast<std::uint64_t>(flat) * 16;
    std::vector<ResultRow>& rows = cell_rows[flat];
    try {
      const DiscreteMeasure data = make_empirical(sample_gaussian_mixture(
          mixture_spec(config.mixture), data_n, derive_seed(config.master_seed, base)));

      FitConfig fit = config.fit;
      fit.seed = derive_seed(config.master_seed, base + 1);
      const auto [mprw, trace] = fit_mprw_gaussian(data, fit);

      for (std::size_t mi = 0; mi < config.m_grid.size(); ++mi) {
        FitConfig mefit = config.fit;
        mefit.model_samples = config.m_grid[mi];
        mefit.seed = derive_seed(config.master_seed, base + 2 + mi);
        Clock::time_point start = Clock::now();
        const auto [meprw, metrace] = fit_meprw_gaussian(data, mefit);
        rows.push_back({config.kind, params, config.m_grid[mi], run, "meprw_vs_mprw_err",
                        (meprw.mean - mprw.mean).norm(), seconds_since(start)});
      }
    } catch (const std::exception&) {
      rows.clear();
    }
  });
  for (const auto& rows : cell_rows)
    result.table.rows.insert(result.table.rows.end(), rows.begin(), rows.end());
  return result;
}

KdeCurve gaussian_kde(const std::vector<double>& samples, int grid_points) {
  if (samples.size() < 2) throw InvalidInputError("gaussian_kde: need at least two samples");
  const double sd = std_of(samples);
  const double n = static_cast<double>(samples.size());
  double h = 1.06 * sd * std::pow(n, -0.2);  // Silverman's rule
  if (!(h > 0.0)) h = 1.0;
  const double lo = *std::min_element(samples.begin(), samples.end()) - 5.0 * h;
  const double hi = *std::max_element(samples.begin(), samples.end()) + 5.0 * h;
  KdeCurve curve;
  curve.x.resize(grid_points);
  curve.density.resize(grid_points);
  const double step = (hi - lo) / static_cast<double>(grid_points - 1);
  const double norm = 1.0 / (n * h * std::sqrt(2.0 * M_PI));
  for (int g = 0; g < grid_points; ++g) {
    const double x = lo + g * step;
    double acc = 0.0;
    for (double s : samples) {
      const double z = (x - s) / h;
      acc += std::exp(-0.5 * z * z);
    }
    curve.x(g) = x;
    curve.density(g) = norm * acc;
  }
  return curve;
}

ExperimentResult run_clt(const ExperimentConfig& config) {
  if (config.n_grid.size() < 2) throw InvalidInputError("run_clt: need at least two n values");
  if (config.runs < 2) throw InvalidInputError("run_clt: need at least two runs");
  ExperimentResult result;
  result.theta_ref = gaussian_reference(config);
  const std::string params = "mixture=" + std::to_string(config.mixture);

  const std::size_t cells = config.n_grid.size() * static_cast<std::size_t>(config.runs);
  std::vector<std::vector<ResultRow>> cell_rows(cells);
  parallel_for(cells, config.threads, [&](std::size_t flat) {
    const int n_idx = static_cast<int>(flat / config.runs);
    const int run = static_cast<int>(flat % config.runs);
    const int n = config.n_grid[n_idx];
    const std::uint64_t base = 16 + static_cast<std::uint64_t>(flat) * 8;
    std::vector<ResultRow>& rows = cell_rows[flat];
    try {
      const DiscreteMeasure data = make_empirical(sample_gaussian_mixture(
          mixture_spec(config.mixture), n, derive_seed(config.master_seed, base)));
      FitConfig fit = config.fit;
      fit.seed = derive_seed(config.master_seed, base + 1);
      Clock::time_point start = Clock::now();
      const auto [mprw, trace] = fit_mprw_gaussian(data, fit);
      const double wall = seconds_since(start);
      rows.push_back({config.kind, params, n, run, "sigma2_hat", mprw.sigma2, wall});
      rows.push_back({config.kind, params, n, run, "clt_scaled",
                      std::sqrt(static_cast<double>(n)) * (mprw.sigma2 - result.theta_ref.sigma2),
                      0.0});
    } catch (const std::exception&) {
      rows.clear();
    }
  });
  for (const auto& rows : cell_rows)
    result.table.rows.insert(result.table.rows.end(), rows.begin(), rows.end());

  // KDE of the rescaled values, one curve per n
  for (int n : config.n_grid) {
    std::vector<double> scaled;
    for (const ResultRow& row : result.table.rows)
      if (row.metric == "clt_scaled" && row.n == n) scaled.push_back(row.value);
    if (scaled.size() < 2) continue;
    const KdeCurve curve = gaussian_kde(scaled);
    for (Eigen::Index g = 0; g < curve.x.size(); ++g) {
      result.table.rows.push_back(
          {config.kind, params, n, static_cast<int>(g), "kde_x", curve.x(g), 0.0});
      result.table.rows.push_back(
          {config.kind, params, n, static_cast<int>(g), "kde_density", curve.density(g), 0.0});
    }
  }
  return result;
}

ExperimentResult run_ecs_consistency(const ExperimentConfig& config) {
  if (config.n_grid.empty() || config.runs < 1)
    throw InvalidInputError("run_ecs_consistency: empty n grid or runs < 1");
  ExperimentResult result;

  // location reference from a surrogate fit at the largest grid size
  const int ref_n = std::max(config.reference_n / 4, config.n_grid.back());
  const DiscreteMeasure ref_data = make_empirical(sample_gaussian_mixture(
      mixture_spec(config.mixture), ref_n, derive_seed(config.master_seed, 1)));
  FitConfig ref_fit = config.fit;
  ref_fit.model_samples = ref_n;
  ref_fit.seed = derive_seed(config.master_seed, 2);
  const auto [ref_params, ref_trace] = fit_meprw_ecs(ref_data, ref_fit, config.ecs_alpha);
  result.theta_ref.mean = ref_params.location;
  result.theta_ref.present = true;

  const std::string params = "mixture=" + std::to_string(config.mixture) +
                             ";alpha=" + format_number(config.ecs_alpha);
  const std::size_t cells = config.n_grid.size() * static_cast<std::size_t>(config.runs);
  std::vector<std::vector<ResultRow>> cell_rows(cells);
  parallel_for(cells, config.threads, [&](std::size_t flat) {
    const int n_idx = static_cast<int>(flat / config.runs);
    const int run = static_cast<int>(flat % config.runs);
    const int n = config.n_grid[n_idx];
    const std::uint64_t base = 16 + static_cast<std::uint64_t>(flat) * 8;
    std::vector<ResultRow>& rows = cell_rows[flat];
    try {
      const DiscreteMeasure data = make_empirical(sample_gaussian_mixture(
          mixture_spec(config.mixture), n, derive_seed(config.master_seed, base)));
      FitConfig fit = config.fit;
      fit.model_samples = n;
      fit.seed = derive_seed(config.master_seed, base + 1);
      Clock::time_point start = Clock::now();
      const auto [params_fit, trace] = fit_meprw_ecs(data, fit, config.ecs_alpha);
      rows.push_back({config.kind, params, n, run, "ecs_loc_err",
                      (params_fit.location - result.theta_ref.mean).norm(),
                      seconds_since(start)});
    } catch (const std::exception&) {
      rows.clear();
    }
  });
  for (const auto& rows : cell_rows)
    result.table.rows.insert(result.table.rows.end(), rows.begin(), rows.end());
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.kind == "convergence") return run_convergence(config);
  if (config.kind == "consistency") return run_consistency(config);
  if (config.kind == "meprw-vs-mprw") return run_meprw_vs_mprw(config);
  if (config.kind == "clt") return run_clt(config);
  if (config.kind == "ecs-consistency") return run_ecs_consistency(config);
  throw InvalidInputError("run_experiment: unknown kind " + config.kind);
}

RateFit fit_rate(const ResultTable& table, const std::string& metric) {
  std::map<long, std::vector<double>> by_n;
  for (const ResultRow& row : table.rows)
    if (row.metric == metric) by_n[row.n].push_back(row.value);

  std::vector<double> log_n, log_mean;
  for (const auto& [n, values] : by_n) {
    const double mean = mean_of(values);
    if (!(mean > 0.0) || !std::isfinite(mean)) continue;
    log_n.push_back(std::log(static_cast<double>(n)));
    log_mean.push_back(std::log(mean));
  }
  if (log_n.size() < 3)
    throw InvalidInputError("fit_rate: need at least 3 distinct n values with finite means");

  const double count = static_cast<double>(log_n.size());
  const double mx = mean_of(log_n), my = mean_of(log_mean);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < log_n.size(); ++i) {
    sxx += (log_n[i] - mx) * (log_n[i] - mx);
    sxy += (log_n[i] - mx) * (log_mean[i] - my);
    syy += (log_mean[i] - my) * (log_mean[i] - my);
  }
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = (syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 1.0;
  (void)count;
  return fit;
}

void write_summary_json(const std::string& csv_path, const ExperimentConfig& config,
                        const ExperimentResult& result) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json jc;
  jc["kind"] = config.kind;
  nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
  for (const auto& [d, v] : config.dv_pairs) pairs.push_back({{"d", d}, {"v", v}});
  jc["dv_pairs"] = pairs;
  jc["n_grid"] = config.n_grid;
  jc["k"] = config.k;
  jc["runs"] = config.runs;
  jc["n_proj"] = config.n_proj;
  jc["record_w2"] = config.record_w2;
  jc["mixture"] = config.mixture;
  jc["ecs_alpha"] = config.ecs_alpha;
  jc["m_grid"] = config.m_grid;
  jc["reference_n"] = config.reference_n;
  jc["with_meprw"] = config.with_meprw;
  jc["out_path"] = config.out_path;
  jc["master_seed"] = config.master_seed.value;
  jc["threads"] = config.threads;
  jc["rsgan"] = {{"gamma0", config.rsgan.gamma0},
                 {"max_iter", config.rsgan.max_iter},
                 {"step_tol", config.rsgan.step_tol},
                 {"use_sinkhorn", config.rsgan.use_sinkhorn}};
  jc["fit"] = {{"outer_iters", config.fit.outer_iters},
               {"inner_ascent_steps", config.fit.inner_ascent_steps},
               {"inner_lr", config.fit.inner_lr},
               {"mc_points", config.fit.mc_points},
               {"model_samples", config.fit.model_samples},
               {"outer_lr", config.fit.outer_lr}};
  j["config"] = jc;

  if (result.theta_ref.present) {
    j["theta_ref"] = {{"mean", {result.theta_ref.mean(0), result.theta_ref.mean(1)}},
                      {"sigma2", result.theta_ref.sigma2}};
  }

  std::map<std::string, std::vector<double>> groups;
  for (const ResultRow& row : result.table.rows)
    groups[row.params + "|n=" + std::to_string(row.n) + "|" + row.metric].push_back(row.value);
  nlohmann::ordered_json summary;
  for (const auto& [key, values] : groups) {
    summary[key] = {{"mean", mean_of(values)},
                    {"std", std_of(values)},
                    {"min", *std::min_element(values.begin(), values.end())},
                    {"max", *std::max_element(values.begin(), values.end())},
                    {"count", values.size()}};
  }
  j["summary"] = summary;
  j["versions"] = std::string("prw ") + kVersion;

  std::string json_path = csv_path;
  const std::size_t dot = json_path.find_last_of('.');
  if (dot != std::string::npos)
    json_path = json_path.substr(0, dot) + ".json";
  else
    json_path += ".json";
  std::ofstream out(json_path);
  if (!out) throw std::runtime_error("write_summary_json: cannot open " + json_path);
  out << j.dump(2) << "\n";
}

int selftest(std::string& report) {
  int failures = 0;
  std::ostringstream out;
  auto record = [&](const std::string& name, double value) {
    out << name << "," << format_value(value) << "\n";
  };
  auto check = [&](const std::string& name, bool ok) {
    out << name << "," << (ok ? "PASS" : "FAIL") << "\n";
    if (!ok) ++failures;
  };

  // sandwich: iprw <= W2 + 1e-9, prw <= W2 + 1e-6, prw value >= objective at U_0
  {
    const int d = 10, n = 40;
    const int ks[] = {1, 2, 5};
    bool sandwich_ok = true, progress_ok = true;
    for (int pair = 0; pair < 4; ++pair) {
      const Seed s{900 + static_cast<std::uint64_t>(pair)};
      const DiscreteMeasure mu = make_empirical(sample_hypercube(d, 1.0, n, derive_seed(s, 0)));
      const DiscreteMeasure nu = make_empirical(sample_hypercube(d, 1.0, n, derive_seed(s, 1)));
      const double w2 = wasserstein_p(mu, nu, 2.0);
      for (int k : ks) {
        const double lower = iprw(mu, nu, 2.0, k, 50, derive_seed(s, 2));
        RsganConfig rc;
        rc.k = k;
        rc.seed = derive_seed(s, 3);
        const PrwResult prw = prw2_rsgan(mu, nu, rc);
        record("sandwich_iprw_k" + std::to_string(k) + "_pair" + std::to_string(pair), lower);
        record("sandwich_prw_k" + std::to_string(k) + "_pair" + std::to_string(pair), prw.value);
        sandwich_ok = sandwich_ok && lower <= w2 + 1e-9 && prw.value <= w2 + 1e-6;
        progress_ok = progress_ok &&
                      prw.value * prw.value >= prw.history.front().objective - 1e-12;
      }
      record("sandwich_w2_pair" + std::to_string(pair), w2);
    }
    check("sandwich", sandwich_ok);
    check("rsgan_progress", progress_ok);
  }

  // translation optimum with k = 1: value in [0.95 ||t||, ||t|| + 1e-8]
  {
    int hits = 0;
    const int trials = 6;
    for (int trial = 0; trial < trials; ++trial) {
      const Seed s{1700 + static_cast<std::uint64_t>(trial)};
      const Eigen::MatrixXd base = sample_hypercube(5, 1.0, 30, derive_seed(s, 0));
      Rng rng(derive_seed(s, 1));
      Eigen::RowVectorXd shift(5);
      for (int j = 0; j < 5; ++j) shift(j) = rng.normal();
      const double len = shift.norm();
      const DiscreteMeasure mu = make_empirical(base);
      const DiscreteMeasure nu = make_empirical(base.rowwise() + shift);
      RsganConfig rc;
      rc.k = 1;
      rc.seed = derive_seed(s, 2);
      const PrwResult prw = prw2_rsgan(mu, nu, rc);
      record("translation_ratio_trial" + std::to_string(trial), prw.value / len);
      if (prw.value >= 0.95 * len && prw.value <= len + 1e-8) ++hits;
    }
    check("translation_optimum", hits >= trials - 1);
  }

  // k = d recovers the full W2
  {
    bool ok = true;
    for (int trial = 0; trial < 3; ++trial) {
      const Seed s{2900 + static_cast<std::uint64_t>(trial)};
      const DiscreteMeasure mu = make_empirical(sample_hypercube(4, 1.0, 25, derive_seed(s, 0)));
      const DiscreteMeasure nu = make_empirical(sample_hypercube(4, 1.0, 25, derive_seed(s, 1)));
      RsganConfig rc;
      rc.k = 4;
      rc.seed = derive_seed(s, 2);
      const PrwResult prw = prw2_rsgan(mu, nu, rc);
      const double w2 = wasserstein_p(mu, nu, 2.0);
      record("kd_gap_trial" + std::to_string(trial), std::abs(prw.value - w2));
      ok = ok && std::abs(prw.value - w2) <= 1e-6;
    }
    check("k_equals_d", ok);
  }

  report = out.str();
  return failures;
}

}  // namespace prw
