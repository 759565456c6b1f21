// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned in code; runtimes are measured against the
// stated budgets.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "prw/harness.hpp"
#include "prw/mde.hpp"
#include "prw/parallel.hpp"
#include "prw/projector_distances.hpp"

using namespace prw;

namespace {

int g_failures = 0;

struct Criterion {
  const char* name;
  double budget_s;
  std::chrono::steady_clock::time_point start;

  explicit Criterion(const char* n, double budget)
      : name(n), budget_s(budget), start(std::chrono::steady_clock::now()) {}

  void report(bool ok, const std::string& detail) const {
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = elapsed < budget_s;
    const bool pass = ok && in_budget;
    std::printf("[%s] %s: %s (%.1fs / budget %.0fs)\n", pass ? "PASS" : "FAIL", name,
                detail.c_str(), elapsed, budget_s);
    std::fflush(stdout);
    if (!pass) ++g_failures;
  }
};

Eigen::VectorXd random_simplex(int n, Rng& rng) {
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) w(i) = rng.uniform(0.05, 1.0);
  return w / w.sum();
}

double gaussian_pdf(double s, double mean, double sigma2) {
  const double z = s - mean;
  return std::exp(-0.5 * z * z / sigma2) / std::sqrt(2.0 * M_PI * sigma2);
}

double gaussian_cdf(double s, double mean, double sigma2) {
  return 0.5 * std::erfc(-(s - mean) / std::sqrt(2.0 * sigma2));
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

void criterion_1_ot_exactness() {
  Criterion crit("criterion 1: OT exactness vs vertex enumeration", 10.0);
  Rng rng(Seed{101});
  double max_dev = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 2 + rng.uniform_int(3);
    const int m = 2 + rng.uniform_int(3);
    Eigen::MatrixXd cost(n, m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) cost(i, j) = rng.uniform(0.0, 10.0);
    const Eigen::VectorXd r = random_simplex(n, rng);
    const Eigen::VectorXd c = random_simplex(m, rng);
    const double solver = solve_exact_ot(CostMatrix{cost}, r, c).value;
    const double oracle = oracles::transport_lp_bruteforce(cost, r, c);
    max_dev = std::max(max_dev, std::abs(solver - oracle));
  }
  crit.report(max_dev <= 1e-9, "500 instances, max |solver - oracle| = " + fmt(max_dev));
}

void criterion_2_closed_form_1d() {
  Criterion crit("criterion 2: 1-D closed form vs LP", 5.0);
  Rng rng(Seed{202});
  double max_dev = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + rng.uniform_int(7);
    const int m = 2 + rng.uniform_int(7);
    Eigen::MatrixXd xs(n, 1), ys(m, 1);
    for (int i = 0; i < n; ++i) xs(i, 0) = rng.uniform(-5.0, 5.0);
    for (int j = 0; j < m; ++j) ys(j, 0) = rng.uniform(-5.0, 5.0);
    const Eigen::VectorXd wx = random_simplex(n, rng);
    const Eigen::VectorXd wy = random_simplex(m, rng);
    const double p = (trial % 2 == 0) ? 1.0 : 2.0;
    const double closed = wasserstein_1d(xs.col(0), wx, ys.col(0), wy, p);
    const double lp =
        std::pow(solve_exact_ot(cost_matrix(xs, ys, nullptr, p), wx, wy).value, 1.0 / p);
    max_dev = std::max(max_dev, std::abs(closed - lp));
  }
  crit.report(max_dev <= 1e-9, "200 instances, max deviation = " + fmt(max_dev));
}

void criterion_3_stiefel_invariants() {
  Criterion crit("criterion 3: Stiefel invariants", 10.0);
  bool ok = true;
  double worst_tangency = 0.0, worst_idem = 0.0, worst_ortho = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const Seed s{300 + (unsigned)trial};
    const int d = 4 + (trial % 5);
    const int k = 1 + (trial % 3);
    const StiefelPoint z = sample_uniform_stiefel(d, k, derive_seed(s, 0));
    Rng rng(derive_seed(s, 1));
    Eigen::MatrixXd g(d, k);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < k; ++j) g(i, j) = rng.normal();

    const TangentVector xi = tangent_project(z, g);
    worst_tangency = std::max(
        worst_tangency,
        (xi.xi.transpose() * z.matrix() + z.matrix().transpose() * xi.xi).norm());
    worst_idem = std::max(worst_idem, (tangent_project(z, xi.xi).xi - xi.xi).norm());
    const StiefelPoint moved = qr_retract(z, xi);
    worst_ortho = std::max(
        worst_ortho, (moved.matrix().transpose() * moved.matrix() -
                      Eigen::MatrixXd::Identity(k, k))
                         .norm());

    const StiefelPoint fixed = qr_retract(z, TangentVector{Eigen::MatrixXd::Zero(d, k), z});
    if (fixed.matrix() != z.matrix()) ok = false;

    if (trial % 100 == 0) {
      double previous = std::numeric_limits<double>::infinity();
      for (double t : {1e-2, 1e-3, 1e-4}) {
        const StiefelPoint r = qr_retract(z, scaled(xi, t));
        const double ratio =
            (r.matrix() - (z.matrix() + t * xi.xi)).norm() / (t * xi.xi.norm());
        if (ratio >= previous) ok = false;
        previous = ratio;
      }
    }
  }
  ok = ok && worst_tangency <= 1e-10 && worst_idem <= 1e-12 && worst_ortho <= 1e-10;
  crit.report(ok, "tangency " + fmt(worst_tangency) + ", idempotence " + fmt(worst_idem) +
                      ", orthonormality " + fmt(worst_ortho));
}

void criterion_4_sandwich() {
  Criterion crit("criterion 4: metric sandwich", 120.0);
  const int pairs = 50, d = 10, n = 50;
  std::vector<int> ok_flags(pairs, 0);
  parallel_for(pairs, 0, [&](std::size_t pair) {
    const Seed s{400 + (unsigned)pair};
    const DiscreteMeasure mu =
        make_empirical(sample_hypercube(d, 1.0, n, derive_seed(s, 0)));
    const DiscreteMeasure nu =
        make_empirical(sample_hypercube(d, 1.0, n, derive_seed(s, 1)));
    const double w2 = wasserstein_p(mu, nu, 2.0);
    bool ok = true;
    for (int k : {1, 2, 5}) {
      const double lower = iprw(mu, nu, 2.0, k, 100, derive_seed(s, 2));
      RsganConfig config;
      config.k = k;
      config.seed = derive_seed(s, 3);
      const PrwResult prw = prw2_rsgan(mu, nu, config);
      ok = ok && lower <= w2 + 1e-9 && prw.value <= w2 + 1e-6 &&
           prw.value * prw.value >= prw.history.front().objective - 1e-12;
    }
    ok_flags[pair] = ok ? 1 : 0;
  });
  int passed = 0;
  for (int flag : ok_flags) passed += flag;
  crit.report(passed == pairs, std::to_string(passed) + "/50 pairs, k in {1,2,5}");
}

void criterion_5_translation_optimum() {
  Criterion crit("criterion 5: analytic PRW optimum on translations", 120.0);
  const int seeds = 50;
  std::vector<int> k1_hits(seeds, 0), kd_hits(seeds, 0);
  parallel_for(seeds, 0, [&](std::size_t trial) {
    const Seed s{500 + (unsigned)trial};
    const Eigen::MatrixXd base = sample_hypercube(5, 1.0, 30, derive_seed(s, 0));
    Rng rng(derive_seed(s, 1));
    Eigen::RowVectorXd shift(5);
    for (int j = 0; j < 5; ++j) shift(j) = rng.normal();
    const double len = shift.norm();
    const DiscreteMeasure mu = make_empirical(base);
    const DiscreteMeasure nu = make_empirical((base.rowwise() + shift).eval());

    RsganConfig config;
    config.k = 1;
    config.seed = derive_seed(s, 2);
    const PrwResult r1 = prw2_rsgan(mu, nu, config);
    k1_hits[trial] = (r1.value >= 0.95 * len && r1.value <= len + 1e-8) ? 1 : 0;

    config.k = 5;
    const PrwResult rd = prw2_rsgan(mu, nu, config);
    const double w2 = wasserstein_p(mu, nu, 2.0);
    kd_hits[trial] = (std::abs(rd.value - w2) <= 1e-6) ? 1 : 0;
  });
  int k1 = 0, kd = 0;
  for (int i = 0; i < seeds; ++i) {
    k1 += k1_hits[i];
    kd += kd_hits[i];
  }
  crit.report(k1 >= 45 && kd == seeds,
              "k=1 band hit " + std::to_string(k1) + "/50 (need 45), k=d exact " +
                  std::to_string(kd) + "/50");
}

void criterion_6_gradient_fidelity() {
  Criterion crit("criterion 6: gradient fidelity vs finite differences", 30.0);
  MixtureSpec spec;
  spec.centers = mixture_centers(8);
  const DiscreteMeasure data =
      make_empirical(sample_gaussian_mixture(spec, 200, Seed{600}));
  Rng rng(Seed{601});
  const double h = 1e-5, rel_tol = 1e-3, floor = 1e-6;
  int f1_checked = 0, f2_checked = 0, f3_checked = 0;
  double f1_worst = 0.0, f2_worst = 0.0, f3_worst = 0.0;

  while (f1_checked < 100) {
    GaussianParams params;
    params.mean << rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0);
    params.sigma2 = rng.uniform(0.5, 3.0);
    Eigen::Vector2d u(rng.normal(), rng.normal());
    u.normalize();
    const Eigen::VectorXd proj = data.atoms() * u;
    const PiecewiseLinearFn quantile = interp_quantile(proj, data.weights());
    Eigen::VectorXd s_grid(50);
    for (int i = 0; i < 50; ++i) s_grid(i) = rng.uniform(proj.minCoeff(), proj.maxCoeff());
    const GradF1 g = grad_f1(params, u, quantile, s_grid);

    // honest re-evaluation with the data interpolant and the grid frozen
    auto frozen = [&](const Eigen::Vector2d& mean, double sigma2, const Eigen::Vector2d& dir) {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < s_grid.size(); ++i) {
        const double s = s_grid(i);
        const double t = gaussian_cdf(s, dir.dot(mean), sigma2);
        const double r = s - quantile(t);
        acc += r * r * gaussian_pdf(s, dir.dot(mean), sigma2);
      }
      return acc / static_cast<double>(s_grid.size());
    };
    const double analytic[5] = {g.d_mean(0), g.d_mean(1), g.d_sigma2, g.d_u(0), g.d_u(1)};
    oracles::SmoothFd fd[5];
    for (int j = 0; j < 2; ++j)
      fd[j] = oracles::smooth_central_diff(
          [&](double x) {
            Eigen::Vector2d mm = params.mean;
            mm(j) = x;
            return frozen(mm, params.sigma2, u);
          },
          params.mean(j), h);
    fd[2] = oracles::smooth_central_diff(
        [&](double x) { return frozen(params.mean, x, u); }, params.sigma2, h);
    for (int j = 0; j < 2; ++j)
      fd[3 + j] = oracles::smooth_central_diff(
          [&](double x) {
            Eigen::Vector2d uu = u;
            uu(j) = x;
            return frozen(params.mean, params.sigma2, uu);
          },
          u(j), h);
    for (int c = 0; c < 5; ++c) {
      if (!fd[c].smooth || std::abs(fd[c].value) < floor) continue;
      f1_worst = std::max(f1_worst, std::abs(analytic[c] - fd[c].value) / std::abs(fd[c].value));
      ++f1_checked;
    }
  }

  const int m = 120, K = 50;
  while (f2_checked < 100) {
    GaussianParams params;
    params.mean << rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0);
    params.sigma2 = rng.uniform(0.5, 2.5);
    Eigen::Vector2d u(rng.normal(), rng.normal());
    u.normalize();
    Eigen::MatrixXd eps(m, 2);
    for (int i = 0; i < m; ++i) {
      eps(i, 0) = rng.normal();
      eps(i, 1) = rng.normal();
    }
    Eigen::VectorXd t_grid(K);
    for (int k = 0; k < K; ++k) t_grid(k) = rng.uniform01();
    auto points = [&](const Eigen::Vector2d& mean, double sigma2) {
      return Eigen::MatrixXd((std::sqrt(sigma2) * eps).rowwise() + mean.transpose());
    };
    const GradF2 g =
        grad_f2(params, u, points(params.mean, params.sigma2), data.atoms(), t_grid);
    auto objective = [&](const Eigen::Vector2d& mean, double sigma2, const Eigen::Vector2d& dir) {
      return grad_f2(GaussianParams{mean, sigma2}, dir, points(mean, sigma2), data.atoms(),
                     t_grid)
          .value;
    };
    const double analytic[5] = {g.d_mean(0), g.d_mean(1), g.d_sigma2, g.d_u(0), g.d_u(1)};
    oracles::SmoothFd fd[5];
    const double h2 = 1e-6;
    for (int j = 0; j < 2; ++j)
      fd[j] = oracles::smooth_central_diff(
          [&](double x) {
            Eigen::Vector2d mm = params.mean;
            mm(j) = x;
            return objective(mm, params.sigma2, u);
          },
          params.mean(j), h2);
    fd[2] = oracles::smooth_central_diff(
        [&](double x) { return objective(params.mean, x, u); }, params.sigma2, h2);
    for (int j = 0; j < 2; ++j)
      fd[3 + j] = oracles::smooth_central_diff(
          [&](double x) {
            Eigen::Vector2d uu = u;
            uu(j) = x;
            return objective(params.mean, params.sigma2, uu);
          },
          u(j), h2);
    for (int c = 0; c < 5; ++c) {
      if (!fd[c].smooth || std::abs(fd[c].value) < 1e-4) continue;
      f2_worst = std::max(f2_worst, std::abs(analytic[c] - fd[c].value) / std::abs(fd[c].value));
      ++f2_checked;
    }
  }

  int f3_trial = 0;
  while (f3_checked < 100) {
    EcsLocationParams params;
    params.location << rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0);
    Eigen::Vector2d u(rng.normal(), rng.normal());
    u.normalize();
    Eigen::MatrixXd noise(m, 2);
    const Eigen::VectorXd mixing =
        sample_positive_stable(0.9, m, Seed{620 + (unsigned)f3_trial++});
    for (int i = 0; i < m; ++i) {
      const double scale = std::sqrt(mixing(i));
      noise(i, 0) = scale * rng.normal();
      noise(i, 1) = scale * rng.normal();
    }
    Eigen::VectorXd t_grid(K);
    for (int k = 0; k < K; ++k) t_grid(k) = rng.uniform01();
    auto points = [&](const Eigen::Vector2d& loc) {
      return Eigen::MatrixXd(noise.rowwise() + loc.transpose());
    };
    const GradF3 g = grad_f3(params, u, points(params.location), data.atoms(), t_grid);
    const double h2 = 1e-6;
    for (int j = 0; j < 2; ++j) {
      const auto fd = oracles::smooth_central_diff(
          [&](double x) {
            Eigen::Vector2d loc = params.location;
            loc(j) = x;
            return grad_f3(params, u, points(loc), data.atoms(), t_grid).value;
          },
          params.location(j), h2);
      if (!fd.smooth || std::abs(fd.value) < 1e-4) continue;
      f3_worst = std::max(f3_worst, std::abs(g.d_location(j) - fd.value) / std::abs(fd.value));
      ++f3_checked;
    }
  }

  const bool ok = f1_worst <= rel_tol && f2_worst <= rel_tol && f3_worst <= rel_tol;
  crit.report(ok, "worst relative error f1 " + fmt(f1_worst) + ", f2 " + fmt(f2_worst) +
                      ", f3 " + fmt(f3_worst));
}

std::map<int, double> metric_means(const ResultTable& table, const std::string& metric,
                                   const std::string& params = "") {
  std::map<int, std::pair<double, int>> acc;
  for (const ResultRow& row : table.rows) {
    if (row.metric != metric) continue;
    if (!params.empty() && row.params != params) continue;
    acc[static_cast<int>(row.n)].first += row.value;
    acc[static_cast<int>(row.n)].second += 1;
  }
  std::map<int, double> means;
  for (const auto& [n, pair] : acc) means[n] = pair.first / pair.second;
  return means;
}

void criterion_7_convergence_trend() {
  Criterion crit("criterion 7: hypercube convergence trend", 600.0);
  ExperimentConfig config;
  config.kind = "convergence";
  config.dv_pairs = {{30, 5.0}};
  config.n_grid = {20, 100, 250, 500, 1000};
  config.k = 2;
  config.runs = 20;
  config.n_proj = 100;
  config.master_seed = Seed{700};
  const ExperimentResult result = run_convergence(config);

  const std::map<int, double> means = metric_means(result.table, "iprw");
  int inversions = 0;
  double previous = std::numeric_limits<double>::infinity();
  std::string curve;
  for (const auto& [n, mean] : means) {
    if (mean >= previous) ++inversions;
    previous = mean;
    curve += " " + fmt(mean);
  }
  const RateFit rate = fit_rate(result.table, "iprw");
  const bool ok = means.size() == 5 && inversions <= 1 && rate.slope >= -1.0 &&
                  rate.slope <= -0.2;
  crit.report(ok, "mean iprw" + curve + "; slope " + fmt(rate.slope) + " in [-1.0,-0.2], " +
                      std::to_string(inversions) + " inversion(s)");

  // dimension-robustness property: d = 10 vs d = 50 at equal (v, k)
  Criterion prop("property: iprw dimension robustness d=10 vs d=50", 600.0);
  ExperimentConfig small = config;
  small.dv_pairs = {{10, 1.0}, {50, 1.0}};
  small.n_grid = {1000};
  small.runs = 5;
  small.n_proj = 50;
  small.master_seed = Seed{701};
  const ExperimentResult pair = run_convergence(small);
  const std::map<int, double> low = metric_means(pair.table, "iprw", "d=10;v=1;k=2");
  const std::map<int, double> high = metric_means(pair.table, "iprw", "d=50;v=1;k=2");
  const double lo = low.at(1000), hi = high.at(1000);
  const double rel = std::abs(hi - lo) / std::max(lo, hi);
  prop.report(rel < 0.25, "means " + fmt(lo) + " vs " + fmt(hi) + ", gap " + fmt(rel));
}

void criterion_8_estimator_consistency() {
  Criterion crit("criterion 8: estimator consistency", 1800.0);
  ExperimentConfig config;
  config.kind = "consistency";
  config.mixture = 8;
  config.n_grid = {500, 2000, 10000};
  config.runs = 20;
  config.reference_n = 20000;
  config.with_meprw = false;
  config.master_seed = Seed{800};
  const ExperimentResult consistency = run_consistency(config);
  const std::map<int, double> errs = metric_means(consistency.table, "mprw_loc_err");
  const bool decreasing =
      errs.size() == 3 && errs.at(500) > errs.at(2000) && errs.at(2000) > errs.at(10000);

  ExperimentConfig vs = config;
  vs.kind = "meprw-vs-mprw";
  vs.m_grid = {100, 10000};
  vs.master_seed = Seed{801};
  const ExperimentResult cmp = run_meprw_vs_mprw(vs);
  const std::map<int, double> gap = metric_means(cmp.table, "meprw_vs_mprw_err");
  const bool meprw_ok = gap.size() == 2 && gap.at(10000) < gap.at(100);

  crit.report(decreasing && meprw_ok,
              "mprw err " + fmt(errs.at(500)) + " > " + fmt(errs.at(2000)) + " > " +
                  fmt(errs.at(10000)) + "; meprw gap m=1e2 " + fmt(gap.at(100)) +
                  " vs m=1e4 " + fmt(gap.at(10000)));
}

void criterion_9_sqrtn_rescaling() {
  Criterion crit("criterion 9: sqrt(n) rescaling of sigma^2", 1800.0);
  ExperimentConfig config;
  config.kind = "clt";
  config.mixture = 8;
  config.n_grid = {100, 500, 1000};
  config.runs = 50;
  config.reference_n = 20000;
  config.master_seed = Seed{900};
  const ExperimentResult result = run_clt(config);

  std::map<int, std::vector<double>> scaled, raw;
  for (const ResultRow& row : result.table.rows) {
    if (row.metric == "clt_scaled") scaled[static_cast<int>(row.n)].push_back(row.value);
    if (row.metric == "sigma2_hat") raw[static_cast<int>(row.n)].push_back(row.value);
  }
  auto sd = [](const std::vector<double>& xs) {
    double m = 0.0;
    for (double x : xs) m += x;
    m /= xs.size();
    double acc = 0.0;
    for (double x : xs) acc += (x - m) * (x - m);
    return std::sqrt(acc / (xs.size() - 1));
  };
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  std::string detail = "scaled std";
  for (const auto& [n, xs] : scaled) {
    const double s = sd(xs);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
    detail += " " + fmt(s);
  }
  const bool ratio_ok = hi / lo <= 2.0;
  const bool monotone = sd(raw.at(100)) > sd(raw.at(500)) && sd(raw.at(500)) > sd(raw.at(1000));
  detail += "; max/min " + fmt(hi / lo) + "; raw std " + fmt(sd(raw.at(100))) + " > " +
            fmt(sd(raw.at(500))) + " > " + fmt(sd(raw.at(1000)));
  crit.report(ratio_ok && monotone, detail);
}

void criterion_10_sampler_validity() {
  Criterion crit("criterion 10: sampler validity", 60.0);
  EcsSpec spec;
  spec.alpha = 1.5;
  spec.sigma = Eigen::MatrixXd::Identity(2, 2);
  spec.location = Eigen::Vector2d(0.5, -1.0);
  const int n = 100000;
  const Eigen::MatrixXd y = sample_ecs(spec, n, Seed{1000});
  const Eigen::Vector2d freqs[] = {{0.3, 0.0}, {0.0, 0.5}, {0.4, 0.4}, {-0.7, 0.2}, {0.1, -0.9}};
  double worst_cf = 0.0;
  for (const Eigen::Vector2d& t : freqs) {
    std::complex<double> acc(0.0, 0.0);
    for (int i = 0; i < n; ++i) {
      const double phase = t.dot(y.row(i));
      acc += std::complex<double>(std::cos(phase), std::sin(phase));
    }
    acc /= static_cast<double>(n);
    const std::complex<double> expected = std::exp(std::complex<double>(
        -std::pow(t.dot(spec.sigma * t), spec.alpha / 2.0), t.dot(spec.location)));
    worst_cf = std::max(worst_cf, std::abs(acc - expected));
  }

  const int d = 6, k = 2, draws = 10000;
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(d, d);
  for (int t = 0; t < draws; ++t) {
    const StiefelPoint u = sample_uniform_stiefel(d, k, Seed{1100 + (unsigned)t});
    mean += u.matrix() * u.matrix().transpose();
  }
  mean /= static_cast<double>(draws);
  const double haar_dev =
      (mean - (static_cast<double>(k) / d) * Eigen::MatrixXd::Identity(d, d))
          .cwiseAbs()
          .maxCoeff();

  crit.report(worst_cf <= 0.05 && haar_dev <= 0.05,
              "char.fn dev " + fmt(worst_cf) + ", Haar mean dev " + fmt(haar_dev));
}

std::string strip_wall_time_column(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) {
    out += line.substr(0, line.find_last_of(','));
    out += '\n';
  }
  return out;
}

void criterion_11_determinism() {
  Criterion crit("criterion 11: determinism across thread counts", 300.0);

  std::string report_a, report_b;
  const int fail_a = selftest(report_a);
  const int fail_b = selftest(report_b);
  const bool selftest_ok = fail_a == 0 && fail_b == 0 && report_a == report_b;

  ExperimentConfig config;
  config.kind = "convergence";
  config.dv_pairs = {{8, 1.0}};
  config.n_grid = {20, 60};
  config.k = 2;
  config.runs = 3;
  config.n_proj = 20;
  config.master_seed = Seed{1111};
  config.threads = 1;
  const ExperimentResult serial = run_convergence(config);
  config.threads = 4;
  const ExperimentResult parallel = run_convergence(config);
  const bool table_ok = strip_wall_time_column(serial.table.csv_string()) ==
                        strip_wall_time_column(parallel.table.csv_string());

  bool cli_ok = true;
#ifdef PRW_CLI_PATH
  const std::string cli = PRW_CLI_PATH;
  auto run_cli = [&](const std::string& cmd, const std::string& out_file) {
    const std::string full = cmd + " > " + out_file + " 2>&1";
    return std::system(full.c_str()) == 0;
  };
  auto slurp = [](const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  cli_ok = run_cli("PRW_THREADS=1 " + cli + " selftest", "selftest_1.txt") &&
           run_cli("PRW_THREADS=4 " + cli + " selftest", "selftest_4.txt") &&
           slurp("selftest_1.txt") == slurp("selftest_4.txt");
  const std::string conv_flags =
      " convergence --d 8 --v 1 --k 2 --runs 3 --n-grid 20,60 --proj 20 --seed 9 ";
  cli_ok = cli_ok &&
           run_cli("PRW_THREADS=1 " + cli + conv_flags + "--out det_1.csv", "conv_1.txt") &&
           run_cli("PRW_THREADS=4 " + cli + conv_flags + "--out det_4.csv", "conv_4.txt") &&
           strip_wall_time_column(slurp("det_1.csv")) ==
               strip_wall_time_column(slurp("det_4.csv"));
  for (const char* f : {"selftest_1.txt", "selftest_4.txt", "conv_1.txt", "conv_4.txt",
                        "det_1.csv", "det_4.csv", "det_1.json", "det_4.json"})
    std::remove(f);
#endif

  crit.report(selftest_ok && table_ok && cli_ok,
              std::string("selftest ") + (selftest_ok ? "stable" : "UNSTABLE") + ", tables " +
                  (table_ok ? "identical" : "DIFFER") + ", cli " +
                  (cli_ok ? "identical" : "DIFFER"));
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion_1_ot_exactness();
  criterion_2_closed_form_1d();
  criterion_3_stiefel_invariants();
  criterion_4_sandwich();
  criterion_5_translation_optimum();
  criterion_6_gradient_fidelity();
  criterion_7_convergence_trend();
  criterion_8_estimator_consistency();
  criterion_9_sqrtn_rescaling();
  criterion_10_sampler_validity();
  criterion_11_determinism();
  const double total =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("acceptance: %d failure(s), %.1fs total\n", g_failures, total);
  return g_failures == 0 ? 0 : 1;
}
