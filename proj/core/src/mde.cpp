#include "prw/mde.hpp"

#include <algorithm>
#include <cmath>

namespace prw {

namespace {

constexpr double kSigma2Floor = 1e-8;

double gaussian_pdf(double s, double mean, double sigma2) {
  const double z = s - mean;
  return std::exp(-0.5 * z * z / sigma2) / std::sqrt(2.0 * M_PI * sigma2);
}

double gaussian_cdf(double s, double mean, double sigma2) {
  return 0.5 * std::erfc(-(s - mean) / std::sqrt(2.0 * sigma2));
}

}  // namespace

AdamState AdamState::init(Eigen::Index dim, AdamConfig config) {
  AdamState st;
  st.first_moment = Eigen::VectorXd::Zero(dim);
  st.second_moment = Eigen::VectorXd::Zero(dim);
  st.step = 0;
  st.config = config;
  return st;
}

Eigen::VectorXd adam_step(AdamState& state, const Eigen::VectorXd& params,
                          const Eigen::VectorXd& grad) {
  if (params.size() != grad.size() || params.size() != state.first_moment.size())
    throw InvalidInputError("adam_step: dimension mismatch");
  const AdamConfig& c = state.config;
  ++state.step;
  state.first_moment = c.beta1 * state.first_moment + (1.0 - c.beta1) * grad;
  state.second_moment =
      c.beta2 * state.second_moment + (1.0 - c.beta2) * grad.cwiseProduct(grad);
  const double corr1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.step));
  const double corr2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.step));
  const Eigen::VectorXd m_hat = state.first_moment / corr1;
  const Eigen::VectorXd v_hat = state.second_moment / corr2;
  return params - c.lr * (m_hat.array() / (v_hat.array().sqrt() + c.eps)).matrix();
}

// Full derivative of the fixed-grid objective
//   f1(theta) = (1/|S|) sum_s (s - Q(Phi(s; u'm, sigma^2)))^2 phi(s; u'm, sigma^2)
// with the data quantile Q and the grid S frozen. Both the density factor and
// the model CDF inside the residual are differentiated; dropping the CDF
// chain term (as the bare density-factor formulas do) makes the sigma^2
// direction point the wrong way off-optimum and the fit collapses.
GradF1 grad_f1(const GaussianParams& params, const Eigen::Vector2d& u,
               const PiecewiseLinearFn& data_quantile, const Eigen::VectorXd& s_grid) {
  if (!(params.sigma2 > 0.0)) throw InvalidInputError("grad_f1: sigma2 must be positive");
  if (s_grid.size() < 1) throw InvalidInputError("grad_f1: empty evaluation grid");
  GradF1 out;
  if (data_quantile.breakpoints.size() < 2) return out;  // degenerate data: zero by contract

  const double proj_mean = u.dot(params.mean);
  const double sigma2 = params.sigma2;
  const double count = static_cast<double>(s_grid.size());
  for (Eigen::Index i = 0; i < s_grid.size(); ++i) {
    const double s = s_grid(i);
    const double t = gaussian_cdf(s, proj_mean, sigma2);
    const double residual = s - data_quantile(t);
    const double q_slope = data_quantile.slope_at(t);
    const double r2 = residual * residual;
    const double density = gaussian_pdf(s, proj_mean, sigma2);
    const double centered = s - proj_mean;
    out.value += r2 * density;
    // d/da with a = u'm: dPhi/da = -phi, dr/da = q_slope * phi
    const double d_a = 2.0 * residual * q_slope * density * density +
                       r2 * density * centered / sigma2;
    out.d_mean += d_a * u;
    out.d_u += d_a * params.mean;
    // dPhi/dsigma2 = -phi (s - a) / (2 sigma^2)
    out.d_sigma2 += residual * q_slope * density * density * centered / sigma2 +
                    r2 * density * (centered * centered - sigma2) / (2.0 * sigma2 * sigma2);
  }
  out.value /= count;
  out.d_mean /= count;
  out.d_u /= count;
  out.d_sigma2 /= count;
  return out;
}

GradF2 grad_f2(const GaussianParams& params, const Eigen::Vector2d& u,
               const Eigen::MatrixXd& model_points, const Eigen::MatrixXd& data_points,
               const Eigen::VectorXd& t_grid) {
  if (!(params.sigma2 > 0.0)) throw InvalidInputError("grad_f2: sigma2 must be positive");
  if (t_grid.size() < 1) throw InvalidInputError("grad_f2: empty t grid");
  const Eigen::Index nm = model_points.rows(), nd = data_points.rows();
  const Eigen::VectorXd wm = Eigen::VectorXd::Constant(nm, 1.0 / static_cast<double>(nm));
  const Eigen::VectorXd wd = Eigen::VectorXd::Constant(nd, 1.0 / static_cast<double>(nd));
  const ProjectedSample pm(model_points, wm, u);
  const ProjectedSample pd(data_points, wd, u);

  GradF2 out;
  if (pm.degenerate() && pd.degenerate()) return out;
  const double proj_mean = u.dot(params.mean);
  const double sigma2 = params.sigma2;
  const double count = static_cast<double>(t_grid.size());
  for (Eigen::Index k = 0; k < t_grid.size(); ++k) {
    const double t = t_grid(k);
    const double qm = pm.quantile(t);
    const double delta = qm - pd.quantile(t);
    out.value += delta * delta;
    out.d_mean += 2.0 * delta * u;
    // model points are m + sigma * eps, so d q_model / d sigma^2 = (qm - u'm)/(2 sigma^2)
    out.d_sigma2 += delta * (qm - proj_mean) / sigma2;
    out.d_u += 2.0 * delta * (pm.quantile_atom(t) - pd.quantile_atom(t));
  }
  out.value /= count;
  out.d_mean /= count;
  out.d_sigma2 /= count;
  out.d_u /= count;
  return out;
}

GradF3 grad_f3(const EcsLocationParams& params, const Eigen::Vector2d& u,
               const Eigen::MatrixXd& model_points, const Eigen::MatrixXd& data_points,
               const Eigen::VectorXd& t_grid) {
  (void)params;
  if (t_grid.size() < 1) throw InvalidInputError("grad_f3: empty t grid");
  const Eigen::Index nm = model_points.rows(), nd = data_points.rows();
  const Eigen::VectorXd wm = Eigen::VectorXd::Constant(nm, 1.0 / static_cast<double>(nm));
  const Eigen::VectorXd wd = Eigen::VectorXd::Constant(nd, 1.0 / static_cast<double>(nd));
  const ProjectedSample pm(model_points, wm, u);
  const ProjectedSample pd(data_points, wd, u);

  GradF3 out;
  if (pm.degenerate() && pd.degenerate()) return out;
  const double count = static_cast<double>(t_grid.size());
  for (Eigen::Index k = 0; k < t_grid.size(); ++k) {
    const double t = t_grid(k);
    const double delta = pm.quantile(t) - pd.quantile(t);
    out.value += delta * delta;
    out.d_location += 2.0 * delta * u;
    out.d_u += 2.0 * delta * (pm.quantile_atom(t) - pd.quantile_atom(t));
  }
  out.value /= count;
  out.d_location /= count;
  out.d_u /= count;
  return out;
}

namespace {

void check_fit_inputs(const DiscreteMeasure& data, const FitConfig& config) {
  if (data.dim() != 2) throw InvalidInputError("fit: data must be 2-dimensional");
  if (config.outer_iters < 1 || config.inner_ascent_steps < 1 || config.mc_points < 1 ||
      config.model_samples < 1)
    throw InvalidInputError("fit: all iteration counts must be >= 1");
  if (!(config.inner_lr > 0.0) || !(config.outer_lr > 0.0))
    throw InvalidInputError("fit: learning rates must be positive");
}

Eigen::Vector2d data_mean(const DiscreteMeasure& data) {
  return (data.weights().transpose() * data.atoms()).transpose();
}

double data_variance(const DiscreteMeasure& data, const Eigen::Vector2d& mean) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < data.size(); ++i)
    acc += data.weights()(i) * (data.atoms().row(i).transpose() - mean).squaredNorm();
  return std::max(acc / 2.0, kSigma2Floor);  // per-coordinate variance
}

// Evaluation points for the density-weighted objective: uniform draws over
// the union of the projected data range and m +- 4 sigma.
Eigen::VectorXd draw_s_grid(const Eigen::VectorXd& proj_data, double proj_mean, double sigma,
                            int count, Rng& rng) {
  const double lo = std::min(proj_data.minCoeff(), proj_mean - 4.0 * sigma);
  const double hi = std::max(proj_data.maxCoeff(), proj_mean + 4.0 * sigma);
  Eigen::VectorXd s(count);
  for (int i = 0; i < count; ++i) s(i) = rng.uniform(lo, hi);
  return s;
}

}  // namespace

std::pair<GaussianParams, FitTrace> fit_mprw_gaussian(const DiscreteMeasure& data,
                                                      const FitConfig& config) {
  check_fit_inputs(data, config);
  GaussianParams params;
  params.mean = data_mean(data);
  params.sigma2 = data_variance(data, params.mean);

  Eigen::Vector2d u =
      sample_uniform_stiefel(2, 1, derive_seed(config.seed, 0)).matrix().col(0);
  Rng mc_rng(derive_seed(config.seed, 1));
  AdamState adam = AdamState::init(3, AdamConfig{config.outer_lr, 0.9, 0.999, 1e-8});

  FitTrace trace;
  trace.objective.reserve(config.outer_iters);
  for (int outer = 0; outer < config.outer_iters; ++outer) {
    const double sigma = std::sqrt(params.sigma2);
    const Eigen::VectorXd proj_data = data.atoms() * u;
    const Eigen::VectorXd s_grid =
        draw_s_grid(proj_data, u.dot(params.mean), sigma, config.mc_points, mc_rng);

    GradF1 g;
    for (int step = 0; step < config.inner_ascent_steps; ++step) {
      const PiecewiseLinearFn quantile = interp_quantile(data.atoms() * u, data.weights());
      g = grad_f1(params, u, quantile, s_grid);
      u = (u + config.inner_lr * g.d_u).normalized();
    }
    const PiecewiseLinearFn quantile = interp_quantile(data.atoms() * u, data.weights());
    g = grad_f1(params, u, quantile, s_grid);

    Eigen::VectorXd theta(3);
    theta << params.mean(0), params.mean(1), params.sigma2;
    Eigen::VectorXd grad(3);
    grad << g.d_mean(0), g.d_mean(1), g.d_sigma2;
    theta = adam_step(adam, theta, grad);
    params.mean << theta(0), theta(1);
    params.sigma2 = theta(2);
    if (params.sigma2 < kSigma2Floor) {
      params.sigma2 = kSigma2Floor;
      trace.sigma_clamped = true;
    }
    trace.objective.push_back(g.value);
  }
  trace.u_final = u;
  return {params, trace};
}

std::pair<GaussianParams, FitTrace> fit_meprw_gaussian(const DiscreteMeasure& data,
                                                       const FitConfig& config) {
  check_fit_inputs(data, config);
  GaussianParams params;
  params.mean = data_mean(data);
  params.sigma2 = data_variance(data, params.mean);

  Eigen::Vector2d u =
      sample_uniform_stiefel(2, 1, derive_seed(config.seed, 0)).matrix().col(0);
  Rng mc_rng(derive_seed(config.seed, 1));
  AdamState adam = AdamState::init(3, AdamConfig{config.outer_lr, 0.9, 0.999, 1e-8});

  FitTrace trace;
  trace.objective.reserve(config.outer_iters);
  Eigen::MatrixXd eps(config.model_samples, 2);
  Eigen::VectorXd t_grid(config.mc_points);
  for (int outer = 0; outer < config.outer_iters; ++outer) {
    for (int i = 0; i < config.model_samples; ++i) {
      eps(i, 0) = mc_rng.normal();
      eps(i, 1) = mc_rng.normal();
    }
    for (int k = 0; k < config.mc_points; ++k) t_grid(k) = mc_rng.uniform01();

    const double sigma = std::sqrt(params.sigma2);
    const Eigen::MatrixXd model_points =
        (sigma * eps).rowwise() + params.mean.transpose();

    GradF2 g;
    for (int step = 0; step < config.inner_ascent_steps; ++step) {
      g = grad_f2(params, u, model_points, data.atoms(), t_grid);
      u = (u + config.inner_lr * g.d_u).normalized();
    }
    g = grad_f2(params, u, model_points, data.atoms(), t_grid);

    Eigen::VectorXd theta(3);
    theta << params.mean(0), params.mean(1), params.sigma2;
    Eigen::VectorXd grad(3);
    grad << g.d_mean(0), g.d_mean(1), g.d_sigma2;
    theta = adam_step(adam, theta, grad);
    params.mean << theta(0), theta(1);
    params.sigma2 = theta(2);
    if (params.sigma2 < kSigma2Floor) {
      params.sigma2 = kSigma2Floor;
      trace.sigma_clamped = true;
    }
    trace.objective.push_back(g.value);
  }
  trace.u_final = u;
  return {params, trace};
}

std::pair<EcsLocationParams, FitTrace> fit_meprw_ecs(const DiscreteMeasure& data,
                                                     const FitConfig& config, double alpha) {
  check_fit_inputs(data, config);
  if (!(alpha > 0.0 && alpha < 2.0)) throw InvalidInputError("fit_meprw_ecs: alpha in (0, 2)");
  EcsLocationParams params;
  params.location = data_mean(data);
  params.alpha = alpha;

  Eigen::Vector2d u =
      sample_uniform_stiefel(2, 1, derive_seed(config.seed, 0)).matrix().col(0);
  Rng mc_rng(derive_seed(config.seed, 1));
  AdamState adam = AdamState::init(2, AdamConfig{config.outer_lr, 0.9, 0.999, 1e-8});

  FitTrace trace;
  trace.objective.reserve(config.outer_iters);
  Eigen::MatrixXd noise(config.model_samples, 2);
  Eigen::VectorXd t_grid(config.mc_points);
  for (int outer = 0; outer < config.outer_iters; ++outer) {
    // frozen sqrt(A) g per outer iteration; Sigma = I
    const Eigen::VectorXd mixing = sample_positive_stable(
        alpha / 2.0, config.model_samples, derive_seed(config.seed, 1000003 + outer));
    for (int i = 0; i < config.model_samples; ++i) {
      const double scale = std::sqrt(mixing(i));
      noise(i, 0) = scale * mc_rng.normal();
      noise(i, 1) = scale * mc_rng.normal();
    }
    for (int k = 0; k < config.mc_points; ++k) t_grid(k) = mc_rng.uniform01();

    const Eigen::MatrixXd model_points = noise.rowwise() + params.location.transpose();

    GradF3 g;
    for (int step = 0; step < config.inner_ascent_steps; ++step) {
      g = grad_f3(params, u, model_points, data.atoms(), t_grid);
      u = (u + config.inner_lr * g.d_u).normalized();
    }
    g = grad_f3(params, u, model_points, data.atoms(), t_grid);

    Eigen::VectorXd theta = params.location;
    theta = adam_step(adam, theta, g.d_location);
    params.location = theta;
    trace.objective.push_back(g.value);
  }
  trace.u_final = u;
  return {params, trace};
}

}  // namespace prw
