#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "prw/common.hpp"
#include "prw/exact_ot.hpp"
#include "prw/measures.hpp"
#include "prw/projector_distances.hpp"

namespace prw {

struct GaussianParams {
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  double sigma2 = 1.0;  // kept positive: clamped at 1e-8 during fitting
};

struct EcsLocationParams {
  Eigen::Vector2d location = Eigen::Vector2d::Zero();
  double alpha = 1.8;  // fixed per fit
};

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  Eigen::VectorXd first_moment;
  Eigen::VectorXd second_moment;
  long step = 0;
  AdamConfig config;

  static AdamState init(Eigen::Index dim, AdamConfig config = {});
};

// One bias-corrected ADAM descent step; pure deterministic transition.
Eigen::VectorXd adam_step(AdamState& state, const Eigen::VectorXd& params,
                          const Eigen::VectorXd& grad);

// Gradients of the density-weighted pushforward objective for a Gaussian
// model against an empirical data quantile:
//   f1 = (1/|S|) sum_s |s - Q_data(Phi(s; u'm, sigma^2))|^2 phi(s; u'm, sigma^2).
// The residual factor is treated as frozen; only the Gaussian density factor
// is differentiated, so the finite-difference oracle freezes it too.
struct GradF1 {
  Eigen::Vector2d d_mean = Eigen::Vector2d::Zero();
  double d_sigma2 = 0.0;
  Eigen::Vector2d d_u = Eigen::Vector2d::Zero();
  double value = 0.0;
};

GradF1 grad_f1(const GaussianParams& params, const Eigen::Vector2d& u,
               const PiecewiseLinearFn& data_quantile, const Eigen::VectorXd& s_grid);

// Gradients of the quantile-sample objective between reparameterized Gaussian
// model samples (rows of model_points = m + sigma * eps) and data:
//   f2 = (1/K) sum_k |Q_model(t_k) - Q_data(t_k)|^2.
// Signed residuals throughout, consistent with central finite differences
// under frozen (eps, t_k) and frozen sort order.
struct GradF2 {
  Eigen::Vector2d d_mean = Eigen::Vector2d::Zero();
  double d_sigma2 = 0.0;
  Eigen::Vector2d d_u = Eigen::Vector2d::Zero();
  double value = 0.0;
};

GradF2 grad_f2(const GaussianParams& params, const Eigen::Vector2d& u,
               const Eigen::MatrixXd& model_points, const Eigen::MatrixXd& data_points,
               const Eigen::VectorXd& t_grid);

// Location-only analogue for elliptically contoured stable model samples
// (rows of model_points = m + sqrt(A) g with frozen (A, g)).
struct GradF3 {
  Eigen::Vector2d d_location = Eigen::Vector2d::Zero();
  Eigen::Vector2d d_u = Eigen::Vector2d::Zero();
  double value = 0.0;
};

GradF3 grad_f3(const EcsLocationParams& params, const Eigen::Vector2d& u,
               const Eigen::MatrixXd& model_points, const Eigen::MatrixXd& data_points,
               const Eigen::VectorXd& t_grid);

struct FitConfig {
  int outer_iters = 2000;
  int inner_ascent_steps = 5;
  double inner_lr = 1e-3;
  int mc_points = 300;       // K
  int model_samples = 1000;  // MEPRW only
  double outer_lr = 1e-3;
  Seed seed;
};

struct FitTrace {
  std::vector<double> objective;  // per outer iteration
  Eigen::Vector2d u_final = Eigen::Vector2d::UnitX();
  bool sigma_clamped = false;
};

// Minimum-distance estimation under the k = 1 PRW distance: each outer
// iteration runs inner_ascent_steps projected supergradient steps on the
// direction u (warm-started across iterations), then one ADAM step on the
// model parameters.
std::pair<GaussianParams, FitTrace> fit_mprw_gaussian(const DiscreteMeasure& data,
                                                      const FitConfig& config);

// Same scheme with fresh reparameterized model samples per outer iteration.
std::pair<GaussianParams, FitTrace> fit_meprw_gaussian(const DiscreteMeasure& data,
                                                       const FitConfig& config);

std::pair<EcsLocationParams, FitTrace> fit_meprw_ecs(const DiscreteMeasure& data,
                                                     const FitConfig& config,
                                                     double alpha = 1.8);

}  // namespace prw
