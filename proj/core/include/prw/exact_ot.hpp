#pragma once

#include <Eigen/Dense>
#include <vector>

#include "prw/common.hpp"
#include "prw/measures.hpp"
#include "prw/stiefel.hpp"

namespace prw {

struct CostMatrix {
  Eigen::MatrixXd values;  // n x m, finite, entries >= 0
};

// Projected pairwise costs: entry (i, j) = ||P'x_i - P'y_j||^p, with P the
// identity when no projection is given.
CostMatrix cost_matrix(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                       const StiefelPoint* projection, double p);

struct PlanEntry {
  int row;
  int col;
  double mass;
};

// A coupling with prescribed marginals, stored by its support (a transport
// plan from the simplex solver has at most n + m - 1 entries).
struct TransportPlan {
  std::vector<PlanEntry> entries;
  Eigen::VectorXd row_marginal;
  Eigen::VectorXd col_marginal;

  Eigen::Index rows() const { return row_marginal.size(); }
  Eigen::Index cols() const { return col_marginal.size(); }
  Eigen::MatrixXd dense() const;
};

struct OtSolution {
  TransportPlan plan;
  double value = 0.0;
};

// Exact solution of the transportation LP
//   min sum_ij pi_ij c_ij   s.t.  pi >= 0, row sums = r, col sums = c
// by the transportation simplex: north-west-corner start on epsilon-perturbed
// marginals, spanning-tree basis, block pricing with lexicographic
// tie-breaking, Bland's rule engaged after a degenerate stall. The final
// basis is re-solved against the unperturbed marginals, so the returned plan
// meets them to machine accuracy.
OtSolution solve_exact_ot(const CostMatrix& cost, const Eigen::VectorXd& r,
                          const Eigen::VectorXd& c);

struct SinkhornResult {
  TransportPlan plan;
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
};

// Entropic approximation in the log domain (stable for small reg). The plan
// marginals are within tol of (r, c) on convergence; otherwise the best
// iterate comes back flagged as unconverged.
SinkhornResult sinkhorn(const CostMatrix& cost, const Eigen::VectorXd& r,
                        const Eigen::VectorXd& c, double reg, double tol = 1e-9,
                        int max_iter = 10000);

// Order-p Wasserstein distance between discrete measures, optionally after
// projecting both supports by an orthonormal matrix.
double wasserstein_p(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                     const StiefelPoint* projection = nullptr);

// Closed-form 1-D distance via the quantile integral, evaluated exactly by
// merging the two weight partitions of [0, 1]. Returns the p-th power; the
// optimal monotone coupling is appended to *plan_entries when requested.
double wasserstein_1d_pth(const Eigen::Ref<const Eigen::VectorXd>& xs,
                          const Eigen::Ref<const Eigen::VectorXd>& wx,
                          const Eigen::Ref<const Eigen::VectorXd>& ys,
                          const Eigen::Ref<const Eigen::VectorXd>& wy, double p,
                          std::vector<PlanEntry>* plan_entries = nullptr);

double wasserstein_1d(const Eigen::Ref<const Eigen::VectorXd>& xs,
                      const Eigen::Ref<const Eigen::VectorXd>& wx,
                      const Eigen::Ref<const Eigen::VectorXd>& ys,
                      const Eigen::Ref<const Eigen::VectorXd>& wy, double p);

// Piecewise-linear function on strictly increasing breakpoints; evaluation
// clamps to the boundary values outside the breakpoint range.
struct PiecewiseLinearFn {
  Eigen::VectorXd breakpoints;
  Eigen::VectorXd values;

  double operator()(double x) const;
  double slope_at(double x) const;  // 0 outside the breakpoint range
};

// Interpolation positions of sorted weights on [0, 1]:
//   p_i = W_{i-1} / (1 - w_i),  W_i = w_1 + ... + w_i.
// Reversal-symmetric, spans [0, 1] exactly, and reduces to (i-1)/(n-1) for
// uniform weights (the common "linear" quantile convention).
Eigen::VectorXd quantile_positions(const Eigen::Ref<const Eigen::VectorXd>& sorted_weights);

// Linear interpolation of the quantile function of a weighted sample.
// A single (distinct) sample yields a constant function.
PiecewiseLinearFn interp_quantile(const Eigen::Ref<const Eigen::VectorXd>& samples,
                                  const Eigen::Ref<const Eigen::VectorXd>& weights);

// Linear interpolation of the CDF; the exact functional inverse of
// interp_quantile (duplicate atoms are merged first).
PiecewiseLinearFn interp_cdf(const Eigen::Ref<const Eigen::VectorXd>& samples,
                             const Eigen::Ref<const Eigen::VectorXd>& weights);

}  // namespace prw
