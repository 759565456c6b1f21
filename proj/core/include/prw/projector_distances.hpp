#pragma once

#include <Eigen/Dense>
#include <vector>

#include "prw/common.hpp"
#include "prw/exact_ot.hpp"
#include "prw/measures.hpp"
#include "prw/stiefel.hpp"

namespace prw {

// Displacement second-moment matrix of a coupling:
//   V_pi = sum_ij pi_ij (x_i - y_j)(x_i - y_j)'.
// Symmetric positive semidefinite; <UU', V_pi> is the order-2 projected
// transport cost of the plan.
Eigen::MatrixXd compute_v_pi(const TransportPlan& plan, const Eigen::MatrixXd& x,
                             const Eigen::MatrixXd& y);

struct RsganConfig {
  int k = 1;
  double gamma0 = 0.0;     // <= 0 selects 0.1 * (data diameter)^2
  int max_iter = 30;
  double step_tol = 1e-6;
  Seed seed;               // initial point U_0
  bool use_sinkhorn = false;
  double sinkhorn_reg = 1e-2;
};

struct PrwIterate {
  double objective = 0.0;  // exact inner-OT optimum at this iterate (order-2 power)
  double step_norm = 0.0;  // ||U_{t+1} - U_t||_F
};

struct PrwResult {
  StiefelPoint projection;  // best visited iterate
  double value = 0.0;       // distance attained by `projection`
  std::vector<PrwIterate> history;
  bool converged = false;
  int iterations = 0;
};

// Riemannian supergradient ascent for the order-2 PRW distance:
// alternate an exact OT solve under the projected squared cost with a
// projected supergradient step 2 V_pi U, QR-retracted, step gamma0/sqrt(t+1).
// Returns the best objective over all visited iterates.
PrwResult prw2_rsgan(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                     const RsganConfig& config);

// Monte Carlo integral of W_p^p over Haar-uniform k-dim projections,
// p-th-rooted. Uses the closed-form 1-D solver when k = 1, the exact LP
// otherwise. Projection s is drawn from derive_seed(seed, s).
double iprw(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p, int k,
            int n_proj, Seed seed);

// Weighted point cloud projected onto a direction, sorted once, with linear
// quantile/CDF interpolation. quantile_atom interpolates the original-space
// atoms with the same coefficients as the projected quantile, which is what
// the sliced objectives differentiate through.
class ProjectedSample {
 public:
  ProjectedSample(const Eigen::MatrixXd& points, const Eigen::VectorXd& weights,
                  const Eigen::VectorXd& u);

  double quantile(double t) const;
  Eigen::VectorXd quantile_atom(double t) const;
  double quantile_slope(double t) const;
  double cdf(double s) const;
  double cdf_slope(double s) const;
  bool degenerate() const { return degenerate_; }

 private:
  Eigen::VectorXd sorted_values_;
  Eigen::VectorXd sorted_weights_;
  Eigen::MatrixXd sorted_atoms_;
  Eigen::VectorXd positions_;
  PiecewiseLinearFn cdf_;
  bool degenerate_ = false;
};

struct MaxSwConfig {
  int mc_points = 1000;    // K
  int ascent_steps = 5;
  double ascent_lr = 1e-3;
  double p = 2.0;
  Seed seed;
};

struct MaxSwResult {
  Eigen::VectorXd u;   // unit vector, first nonzero coordinate positive
  double value = 0.0;  // best objective encountered (order-p power)
};

// Objective of the quantile-sample approximation at a fixed direction:
//   (1/K) sum_k |Q_{u#mu}(t_k) - Q_{u#nu}(t_k)|^p.
double max_sw_objective_quantile(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                 const Eigen::VectorXd& u, const Eigen::VectorXd& ts,
                                 double p);

// Objective of the pushforward-sample approximation at a fixed direction:
//   (1/K) sum_k |s_k - Q_{u#nu}(F_{u#mu}(s_k))|^p,  s_k = u' x_{idx_k}.
double max_sw_objective_pushforward(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                    const Eigen::VectorXd& u,
                                    const std::vector<int>& atom_indices, double p);

// Projected supergradient ascent of the two objectives over the unit sphere
// (additive step, renormalize); both return the best visited iterate.
MaxSwResult max_sw_quantile_mc(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                               const MaxSwConfig& config);
MaxSwResult max_sw_pushforward(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                               const MaxSwConfig& config);

}  // namespace prw
