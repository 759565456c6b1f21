#include "prw/projector_distances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace prw {

Eigen::MatrixXd compute_v_pi(const TransportPlan& plan, const Eigen::MatrixXd& x,
                             const Eigen::MatrixXd& y) {
  if (x.cols() != y.cols()) throw InvalidInputError("compute_v_pi: dimension mismatch");
  if (plan.rows() != x.rows() || plan.cols() != y.rows())
    throw InvalidInputError("compute_v_pi: plan shape does not match the point sets");
  const Eigen::Index d = x.cols();
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd diff(d);
  for (const PlanEntry& e : plan.entries) {
    if (e.mass == 0.0) continue;
    diff = (x.row(e.row) - y.row(e.col)).transpose();
    v.noalias() += e.mass * diff * diff.transpose();
  }
  return 0.5 * (v + v.transpose());
}

namespace {

struct InnerOt {
  double objective = 0.0;  // optimal order-2 transport cost under the projection
  TransportPlan plan;
};

InnerOt inner_ot_squared(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                         const StiefelPoint& u, const RsganConfig& config) {
  InnerOt out;
  out.plan.row_marginal = mu.weights();
  out.plan.col_marginal = nu.weights();
  if (u.cols() == 1) {
    const Eigen::VectorXd zx = mu.atoms() * u.matrix().col(0);
    const Eigen::VectorXd zy = nu.atoms() * u.matrix().col(0);
    out.objective = wasserstein_1d_pth(zx, mu.weights(), zy, nu.weights(), 2.0,
                                       &out.plan.entries);
    return out;
  }
  const CostMatrix cost = cost_matrix(mu.atoms(), nu.atoms(), &u, 2.0);
  if (config.use_sinkhorn) {
    SinkhornResult s = sinkhorn(cost, mu.weights(), nu.weights(), config.sinkhorn_reg);
    out.objective = s.value;
    out.plan = std::move(s.plan);
    return out;
  }
  OtSolution sol = solve_exact_ot(cost, mu.weights(), nu.weights());
  out.objective = sol.value;
  out.plan = std::move(sol.plan);
  return out;
}

double signed_power(double r, double p) {
  if (r == 0.0) return 0.0;  // subgradient choice at the kink
  const double mag = (p == 2.0) ? std::abs(r) : std::pow(std::abs(r), p - 1.0);
  return (r > 0.0 ? 1.0 : -1.0) * mag;
}

double abs_power(double r, double p) {
  if (p == 2.0) return r * r;
  if (p == 1.0) return std::abs(r);
  return std::pow(std::abs(r), p);
}

}  // namespace

PrwResult prw2_rsgan(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                     const RsganConfig& config) {
  if (mu.dim() != nu.dim()) throw InvalidInputError("prw2_rsgan: ambient dimension mismatch");
  const int d = static_cast<int>(mu.dim());
  if (config.k < 1 || config.k > d) throw InvalidInputError("prw2_rsgan: need 1 <= k <= d");
  if (config.max_iter < 1) throw InvalidInputError("prw2_rsgan: max_iter must be >= 1");

  StiefelPoint u = sample_uniform_stiefel(d, config.k, config.seed);

  InnerOt current = inner_ot_squared(mu, nu, u, config);
  double best_objective = current.objective;
  StiefelPoint best_u = u;

  // Auto step scale: normalize by the first supergradient so the initial
  // Frobenius step on the manifold is O(1) regardless of the cost magnitude.
  double gamma0 = config.gamma0;

  PrwResult result{u, 0.0, {}, false, 0};
  bool degenerate_stop = false;
  int t = 0;
  for (; t < config.max_iter; ++t) {
    const Eigen::MatrixXd v_pi = compute_v_pi(current.plan, mu.atoms(), nu.atoms());
    const TangentVector xi = tangent_project(u, 2.0 * v_pi * u.matrix());
    if (t == 0 && gamma0 <= 0.0) gamma0 = 0.5 / std::max(xi.xi.norm(), 1e-30);
    const double gamma = gamma0 / std::sqrt(static_cast<double>(t + 1));
    StiefelPoint next = u;
    try {
      next = qr_retract(u, scaled(xi, gamma));
    } catch (const DegenerateStepError&) {
      degenerate_stop = true;
    }
    if (degenerate_stop) {
      result.history.push_back({current.objective, 0.0});
      break;
    }
    const double step_norm = (next.matrix() - u.matrix()).norm();
    result.history.push_back({current.objective, step_norm});
    u = next;
    current = inner_ot_squared(mu, nu, u, config);
    if (current.objective > best_objective) {
      best_objective = current.objective;
      best_u = u;
    }
    if (step_norm <= config.step_tol) {
      result.converged = true;
      ++t;
      break;
    }
  }
  if (!degenerate_stop && (result.history.empty() || result.history.back().step_norm > 0.0))
    result.history.push_back({current.objective, 0.0});

  result.iterations = t;
  result.projection = best_u;
  result.value = std::sqrt(std::max(best_objective, 0.0));
  return result;
}

double iprw(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p, int k,
            int n_proj, Seed seed) {
  if (mu.dim() != nu.dim()) throw InvalidInputError("iprw: ambient dimension mismatch");
  const int d = static_cast<int>(mu.dim());
  if (k < 1 || k > d) throw InvalidInputError("iprw: need 1 <= k <= d");
  if (n_proj < 1) throw InvalidInputError("iprw: need at least one projection");
  if (!(p >= 1.0)) throw InvalidInputError("iprw: order p must be >= 1");

  long double acc = 0.0L;
  for (int s = 0; s < n_proj; ++s) {
    const StiefelPoint e = sample_uniform_stiefel(d, k, derive_seed(seed, s));
    if (k == 1) {
      const Eigen::VectorXd zx = mu.atoms() * e.matrix().col(0);
      const Eigen::VectorXd zy = nu.atoms() * e.matrix().col(0);
      acc += wasserstein_1d_pth(zx, mu.weights(), zy, nu.weights(), p);
    } else {
      const CostMatrix cost = cost_matrix(mu.atoms(), nu.atoms(), &e, p);
      acc += solve_exact_ot(cost, mu.weights(), nu.weights()).value;
    }
  }
  const double mean = static_cast<double>(acc / n_proj);
  return std::pow(std::max(mean, 0.0), 1.0 / p);
}

ProjectedSample::ProjectedSample(const Eigen::MatrixXd& points, const Eigen::VectorXd& weights,
                                 const Eigen::VectorXd& u) {
  if (points.rows() != weights.size() || points.cols() != u.size())
    throw InvalidInputError("ProjectedSample: shape mismatch");
  const Eigen::Index n = points.rows();
  const Eigen::VectorXd z = points * u;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return z(a) < z(b); });

  Eigen::Index kept = 0;
  for (int idx : order)
    if (weights(idx) > 0.0) ++kept;
  sorted_values_.resize(kept);
  sorted_weights_.resize(kept);
  sorted_atoms_.resize(kept, points.cols());
  Eigen::Index at = 0;
  for (int idx : order) {
    if (weights(idx) <= 0.0) continue;
    sorted_values_(at) = z(idx);
    sorted_weights_(at) = weights(idx);
    sorted_atoms_.row(at) = points.row(idx);
    ++at;
  }
  degenerate_ = (kept < 2) || (sorted_values_(0) == sorted_values_(kept - 1));
  positions_ = quantile_positions(sorted_weights_);
  cdf_ = degenerate_ ? PiecewiseLinearFn{Eigen::VectorXd::Constant(1, sorted_values_(0)),
                                         Eigen::VectorXd::Constant(1, 0.5)}
                     : interp_cdf(sorted_values_, sorted_weights_);
}

double ProjectedSample::quantile(double t) const {
  const Eigen::Index n = sorted_values_.size();
  if (degenerate_) return sorted_values_(0);
  if (t <= positions_(0)) return sorted_values_(0);
  if (t >= positions_(n - 1)) return sorted_values_(n - 1);
  const double* begin = positions_.data();
  const Eigen::Index hi = std::upper_bound(begin, begin + n, t) - begin;
  const Eigen::Index lo = hi - 1;
  const double lambda = (t - positions_(lo)) / (positions_(hi) - positions_(lo));
  return (1.0 - lambda) * sorted_values_(lo) + lambda * sorted_values_(hi);
}

Eigen::VectorXd ProjectedSample::quantile_atom(double t) const {
  const Eigen::Index n = sorted_values_.size();
  if (degenerate_ || t <= positions_(0)) return sorted_atoms_.row(0).transpose();
  if (t >= positions_(n - 1)) return sorted_atoms_.row(n - 1).transpose();
  const double* begin = positions_.data();
  const Eigen::Index hi = std::upper_bound(begin, begin + n, t) - begin;
  const Eigen::Index lo = hi - 1;
  const double lambda = (t - positions_(lo)) / (positions_(hi) - positions_(lo));
  return ((1.0 - lambda) * sorted_atoms_.row(lo) + lambda * sorted_atoms_.row(hi)).transpose();
}

double ProjectedSample::quantile_slope(double t) const {
  const Eigen::Index n = sorted_values_.size();
  if (degenerate_ || t <= positions_(0) || t >= positions_(n - 1)) return 0.0;
  const double* begin = positions_.data();
  const Eigen::Index hi = std::upper_bound(begin, begin + n, t) - begin;
  const Eigen::Index lo = hi - 1;
  return (sorted_values_(hi) - sorted_values_(lo)) / (positions_(hi) - positions_(lo));
}

double ProjectedSample::cdf(double s) const { return cdf_(s); }
double ProjectedSample::cdf_slope(double s) const { return cdf_.slope_at(s); }

double max_sw_objective_quantile(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                 const Eigen::VectorXd& u, const Eigen::VectorXd& ts,
                                 double p) {
  const ProjectedSample pm(mu.atoms(), mu.weights(), u);
  const ProjectedSample pn(nu.atoms(), nu.weights(), u);
  long double acc = 0.0L;
  for (Eigen::Index k = 0; k < ts.size(); ++k)
    acc += abs_power(pm.quantile(ts(k)) - pn.quantile(ts(k)), p);
  return static_cast<double>(acc / ts.size());
}

double max_sw_objective_pushforward(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                    const Eigen::VectorXd& u,
                                    const std::vector<int>& atom_indices, double p) {
  const ProjectedSample pm(mu.atoms(), mu.weights(), u);
  const ProjectedSample pn(nu.atoms(), nu.weights(), u);
  long double acc = 0.0L;
  for (int idx : atom_indices) {
    const double s = mu.atoms().row(idx).dot(u);
    acc += abs_power(s - pn.quantile(pm.cdf(s)), p);
  }
  return static_cast<double>(acc / atom_indices.size());
}

namespace {

Eigen::VectorXd canonical_sign(Eigen::VectorXd u) {
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (u(i) != 0.0) {
      if (u(i) < 0.0) u = -u;
      break;
    }
  }
  return u;
}

template <typename Objective, typename Gradient>
MaxSwResult sphere_ascent(const Eigen::VectorXd& u0, const MaxSwConfig& config,
                          Objective objective, Gradient gradient) {
  Eigen::VectorXd u = u0;
  MaxSwResult best{u, objective(u)};
  for (int step = 0; step < config.ascent_steps; ++step) {
    u = (u + config.ascent_lr * gradient(u)).normalized();
    const double value = objective(u);
    if (value > best.value) {
      best.value = value;
      best.u = u;
    }
  }
  best.u = canonical_sign(std::move(best.u));
  return best;
}

}  // namespace

MaxSwResult max_sw_quantile_mc(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                               const MaxSwConfig& config) {
  if (mu.dim() != nu.dim())
    throw InvalidInputError("max_sw_quantile_mc: ambient dimension mismatch");
  if (config.mc_points < 1 || config.ascent_steps < 1)
    throw InvalidInputError("max_sw_quantile_mc: mc_points and ascent_steps must be >= 1");
  const int d = static_cast<int>(mu.dim());
  const Eigen::VectorXd u0 = sample_uniform_stiefel(d, 1, derive_seed(config.seed, 0)).matrix().col(0);
  Rng rng(derive_seed(config.seed, 1));
  Eigen::VectorXd ts(config.mc_points);
  for (int k = 0; k < config.mc_points; ++k) ts(k) = rng.uniform01();

  auto objective = [&](const Eigen::VectorXd& u) {
    return max_sw_objective_quantile(mu, nu, u, ts, config.p);
  };
  auto gradient = [&](const Eigen::VectorXd& u) {
    const ProjectedSample pm(mu.atoms(), mu.weights(), u);
    const ProjectedSample pn(nu.atoms(), nu.weights(), u);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(d);
    for (Eigen::Index k = 0; k < ts.size(); ++k) {
      const double t = ts(k);
      const double r = pm.quantile(t) - pn.quantile(t);
      const double w = config.p * signed_power(r, config.p);
      if (w == 0.0) continue;
      g += w * (pm.quantile_atom(t) - pn.quantile_atom(t));
    }
    return Eigen::VectorXd(g / static_cast<double>(ts.size()));
  };
  return sphere_ascent(u0, config, objective, gradient);
}

MaxSwResult max_sw_pushforward(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                               const MaxSwConfig& config) {
  if (mu.dim() != nu.dim())
    throw InvalidInputError("max_sw_pushforward: ambient dimension mismatch");
  if (config.mc_points < 1 || config.ascent_steps < 1)
    throw InvalidInputError("max_sw_pushforward: mc_points and ascent_steps must be >= 1");
  const int d = static_cast<int>(mu.dim());
  const Eigen::VectorXd u0 = sample_uniform_stiefel(d, 1, derive_seed(config.seed, 0)).matrix().col(0);
  Rng rng(derive_seed(config.seed, 1));

  // Atom indices sampled from mu's weights once; s_k = u'x_{idx_k} tracks u.
  std::vector<int> indices(config.mc_points);
  Eigen::VectorXd cumulative(mu.size());
  double cum = 0.0;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    cum += mu.weights()(i);
    cumulative(i) = cum;
  }
  for (int k = 0; k < config.mc_points; ++k) {
    const double v = rng.uniform01();
    const double* begin = cumulative.data();
    indices[k] = static_cast<int>(
        std::min<Eigen::Index>(std::upper_bound(begin, begin + mu.size(), v) - begin,
                               mu.size() - 1));
  }

  auto objective = [&](const Eigen::VectorXd& u) {
    return max_sw_objective_pushforward(mu, nu, u, indices, config.p);
  };
  auto gradient = [&](const Eigen::VectorXd& u) {
    const ProjectedSample pm(mu.atoms(), mu.weights(), u);
    const ProjectedSample pn(nu.atoms(), nu.weights(), u);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(d);
    for (int idx : indices) {
      const double s = mu.atoms().row(idx).dot(u);
      const double t = pm.cdf(s);
      const double r = s - pn.quantile(t);
      const double w = config.p * signed_power(r, config.p);
      if (w == 0.0) continue;
      const double chain = 1.0 - pn.quantile_slope(t) * pm.cdf_slope(s);
      g += w * chain * mu.atoms().row(idx).transpose();
    }
    return Eigen::VectorXd(g / static_cast<double>(indices.size()));
  };
  return sphere_ascent(u0, config, objective, gradient);
}

}  // namespace prw
