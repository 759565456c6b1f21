#pragma once

#include <Eigen/Dense>
#include <vector>

#include "prw/common.hpp"

namespace prw {

// A weighted point cloud in R^d. Rows of `atoms` are the points; `weights`
// lives on the probability simplex (nonnegative, sums to 1 within 1e-12).
class DiscreteMeasure {
 public:
  DiscreteMeasure(Eigen::MatrixXd atoms, Eigen::VectorXd weights);

  const Eigen::MatrixXd& atoms() const { return atoms_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  Eigen::Index size() const { return atoms_.rows(); }
  Eigen::Index dim() const { return atoms_.cols(); }

 private:
  Eigen::MatrixXd atoms_;
  Eigen::VectorXd weights_;
};

// Empirical measure of a sample matrix: atoms copied verbatim, weights 1/n.
DiscreteMeasure make_empirical(const Eigen::MatrixXd& samples);

// n i.i.d. draws from the uniform distribution on [-v, v]^d.
Eigen::MatrixXd sample_hypercube(int d, double v, int n, Seed seed);

// Fixed center sets for the 2-D Gaussian-mixture data generators:
// kind 8 and 12 give K points evenly spaced on the unit circle starting at
// (1, 0); kind 25 gives the 5x5 grid over {-2,-1,0,1,2}^2.
std::vector<Eigen::Vector2d> mixture_centers(int kind);

struct MixtureSpec {
  std::vector<Eigen::Vector2d> centers;
  double variance = 0.01;
  double center_scale = 2.0;
};

// Each row: pick a center m uniformly, then draw from
// N(center_scale * m, variance * I).
Eigen::MatrixXd sample_gaussian_mixture(const MixtureSpec& spec, int n, Seed seed);

// Totally skewed positive stable draws by the Chambers-Mallows-Stuck
// transform. The output is distributed as S_a(gamma, beta=1, delta=0) in the
// type-1 (Samorodnitsky-Taqqu) parameterization with a = alpha_half in (0, 1)
// and gamma = 2 * cos(pi * a / 2)^(1/a), so the Laplace transform is
//   E[exp(-s A)] = exp(-(2 s)^a),  s >= 0,
// which is exactly the mixing law needed by sample_ecs below.
Eigen::VectorXd sample_positive_stable(double alpha_half, int n, Seed seed);

// Elliptically contoured alpha-stable law: characteristic function
// exp(-(t' Sigma t)^(alpha/2) + i t' m).
struct EcsSpec {
  double alpha = 1.8;            // tail index in (0, 2)
  Eigen::MatrixXd sigma;         // symmetric positive definite
  Eigen::VectorXd location;      // m
};

// Rows are sqrt(A) * g + m with A from sample_positive_stable(alpha/2) and
// g ~ N(0, Sigma).
Eigen::MatrixXd sample_ecs(const EcsSpec& spec, int n, Seed seed);

}  // namespace prw
