#pragma once

#include <Eigen/Dense>

#include "prw/common.hpp"

namespace prw {

// A d x k matrix with orthonormal columns (U'U = I_k within 1e-10).
class StiefelPoint {
 public:
  explicit StiefelPoint(Eigen::MatrixXd u);

  const Eigen::MatrixXd& matrix() const { return u_; }
  Eigen::Index rows() const { return u_.rows(); }
  Eigen::Index cols() const { return u_.cols(); }

 private:
  Eigen::MatrixXd u_;
};

// Tangent vector at a base point: xi' Z + Z' xi = 0. The base is carried
// along so retraction can reject vectors from the wrong tangent space.
struct TangentVector {
  Eigen::MatrixXd xi;
  StiefelPoint base;
};

TangentVector scaled(const TangentVector& t, double factor);

// Orthogonal projection of an ambient gradient onto the tangent space:
//   P(G) = G - Z (G'Z + Z'G) / 2.
TangentVector tangent_project(const StiefelPoint& z, const Eigen::MatrixXd& g);

// Thin QR with the positive-diagonal-R sign convention. Throws
// DegenerateStepError when a diagonal entry of R falls below 1e-12.
Eigen::MatrixXd thin_qr_positive(const Eigen::MatrixXd& a);

// QR retraction: the Q factor of Z + xi. A zero step returns Z exactly.
StiefelPoint qr_retract(const StiefelPoint& z, const TangentVector& step);

// Haar-uniform point of the Stiefel manifold: QR of a standard Gaussian
// matrix with the sign fix above.
StiefelPoint sample_uniform_stiefel(int d, int k, Seed seed);

}  // namespace prw
