#include "prw/stiefel.hpp"

#include <Eigen/QR>
#include <cmath>

namespace prw {

StiefelPoint::StiefelPoint(Eigen::MatrixXd u) : u_(std::move(u)) {
  const Eigen::Index d = u_.rows(), k = u_.cols();
  if (k < 1 || k > d) throw InvalidInputError("StiefelPoint: need 1 <= k <= d");
  if (!u_.allFinite()) throw InvalidInputError("StiefelPoint: non-finite entries");
  const Eigen::MatrixXd gram = u_.transpose() * u_;
  if ((gram - Eigen::MatrixXd::Identity(k, k)).norm() > 1e-10)
    throw InvalidInputError("StiefelPoint: columns not orthonormal within 1e-10");
}

TangentVector scaled(const TangentVector& t, double factor) {
  return TangentVector{factor * t.xi, t.base};
}

TangentVector tangent_project(const StiefelPoint& z, const Eigen::MatrixXd& g) {
  if (g.rows() != z.rows() || g.cols() != z.cols())
    throw InvalidInputError("tangent_project: shape mismatch");
  const Eigen::MatrixXd sym = g.transpose() * z.matrix() + z.matrix().transpose() * g;
  return TangentVector{g - z.matrix() * (0.5 * sym), z};
}

Eigen::MatrixXd thin_qr_positive(const Eigen::MatrixXd& a) {
  const Eigen::Index d = a.rows(), k = a.cols();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, k);
  const Eigen::MatrixXd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < k; ++j) {
    if (std::abs(r(j, j)) < 1e-12)
      throw DegenerateStepError("thin_qr_positive: rank-deficient factorization");
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

StiefelPoint qr_retract(const StiefelPoint& z, const TangentVector& step) {
  if (step.xi.rows() != z.rows() || step.xi.cols() != z.cols())
    throw InvalidInputError("qr_retract: shape mismatch");
  if (step.base.matrix() != z.matrix())
    throw InvalidInputError("qr_retract: tangent vector has a different base point");
  if (step.xi.isZero(0.0)) return z;  // Retr_Z(0) = Z, exactly
  return StiefelPoint(thin_qr_positive(z.matrix() + step.xi));
}

StiefelPoint sample_uniform_stiefel(int d, int k, Seed seed) {
  if (k < 1 || k > d) throw InvalidInputError("sample_uniform_stiefel: need 1 <= k <= d");
  Rng rng(seed);
  Eigen::MatrixXd g(d, k);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < k; ++j) g(i, j) = rng.normal();
  return StiefelPoint(thin_qr_positive(g));
}

}  // namespace prw
