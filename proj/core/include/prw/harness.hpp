#pragma once

#include <string>
#include <vector>

#include "prw/common.hpp"
#include "prw/mde.hpp"
#include "prw/projector_distances.hpp"

namespace prw {

struct ExperimentConfig {
  std::string kind = "convergence";
  // hypercube (dimension, scale) pairs for the convergence study
  std::vector<std::pair<int, double>> dv_pairs{{30, 5.0}};
  std::vector<int> n_grid{20, 100, 250, 500, 1000};
  int k = 2;
  int runs = 20;
  int n_proj = 100;
  bool record_w2 = false;
  RsganConfig rsgan;
  // estimator experiments
  int mixture = 8;
  double ecs_alpha = 1.8;
  FitConfig fit;
  std::vector<int> m_grid{100, 1000, 10000};  // meprw-vs-mprw model sample counts
  int reference_n = 20000;
  bool with_meprw = true;  // consistency: also fit MEPRW at m = n
  std::string out_path = "out.csv";
  Seed master_seed;
  int threads = 0;  // 0: PRW_THREADS env or hardware concurrency
};

struct ResultRow {
  std::string experiment;
  std::string params;
  long n = 0;
  int run = 0;
  std::string metric;
  double value = 0.0;
  double wall_time_s = 0.0;
};

struct ResultTable {
  std::vector<ResultRow> rows;

  // header: experiment,params,n,run,metric,value,wall_time_s
  void write_csv(const std::string& path) const;
  std::string csv_string() const;
  static ResultTable read_csv(const std::string& path);
};

// Reference parameters computed once per experiment from a large surrogate
// sample; recorded in the JSON summary.
struct ThetaRef {
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  double sigma2 = 0.0;
  bool present = false;
};

struct ExperimentResult {
  ResultTable table;
  ThetaRef theta_ref;
};

// Hypercube convergence study: per (d, v, n, run) cell, fresh empirical pairs
// and the iprw / prw distances with wall times (plus w2 when enabled).
ExperimentResult run_convergence(const ExperimentConfig& config);

// Mixture data, Gaussian model: MPRW (and optionally MEPRW with m = n)
// location errors against the surrogate reference.
ExperimentResult run_consistency(const ExperimentConfig& config);

// Fixed n = 2000 data per run; MEPRW fitted for each m in m_grid and compared
// against the MPRW fit of the same data.
ExperimentResult run_meprw_vs_mprw(const ExperimentConfig& config);

// Repeated MPRW fits per n: raw sigma^2 estimates, sqrt(n)-rescaled centered
// values, and a Gaussian-kernel KDE curve (kde_x / kde_density rows indexed
// by the run column).
ExperimentResult run_clt(const ExperimentConfig& config);

// Stable-location model: MEPRW location error against a surrogate reference
// for n = m over the n grid.
ExperimentResult run_ecs_consistency(const ExperimentConfig& config);

ExperimentResult run_experiment(const ExperimentConfig& config);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// OLS of log(mean metric) on log(n). Needs >= 3 distinct n with finite means.
RateFit fit_rate(const ResultTable& table, const std::string& metric);

// Gaussian KDE with Silverman's bandwidth, evaluated on a uniform grid.
struct KdeCurve {
  Eigen::VectorXd x;
  Eigen::VectorXd density;
};
KdeCurve gaussian_kde(const std::vector<double>& samples, int grid_points = 101);

// JSON sidecar next to the CSV: config echo, theta_ref, per-(params,n,metric)
// mean/std/min/max, artifact version.
void write_summary_json(const std::string& csv_path, const ExperimentConfig& config,
                        const ExperimentResult& result);

// Fixed invariant suite (sandwich, translation optimum, k = d degeneracy).
// Prints one deterministic metric,value line per check plus PASS/FAIL lines;
// returns the number of failed checks.
int selftest(std::string& report);

}  // namespace prw
