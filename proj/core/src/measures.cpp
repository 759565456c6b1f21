#include "prw/measures.hpp"

#include <Eigen/Cholesky>
#include <cmath>

namespace prw {

DiscreteMeasure::DiscreteMeasure(Eigen::MatrixXd atoms, Eigen::VectorXd weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
  if (atoms_.rows() < 1 || atoms_.cols() < 1)
    throw InvalidInputError("DiscreteMeasure: need at least one atom in R^d, d >= 1");
  if (weights_.size() != atoms_.rows())
    throw InvalidInputError("DiscreteMeasure: weight count does not match atom count");
  if (!atoms_.allFinite() || !weights_.allFinite())
    throw InvalidInputError("DiscreteMeasure: non-finite entries");
  if (weights_.minCoeff() < 0.0)
    throw InvalidInputError("DiscreteMeasure: negative weight");
  if (std::abs(weights_.sum() - 1.0) > 1e-12)
    throw InvalidInputError("DiscreteMeasure: weights must sum to 1 within 1e-12");
}

DiscreteMeasure make_empirical(const Eigen::MatrixXd& samples) {
  if (samples.rows() < 1) throw InvalidInputError("make_empirical: empty sample set");
  const Eigen::Index n = samples.rows();
  return DiscreteMeasure(samples, Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
}

Eigen::MatrixXd sample_hypercube(int d, double v, int n, Seed seed) {
  if (d < 1 || n < 1) throw InvalidInputError("sample_hypercube: d and n must be >= 1");
  if (!(v > 0.0)) throw InvalidInputError("sample_hypercube: v must be positive");
  Rng rng(seed);
  Eigen::MatrixXd out(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) out(i, j) = rng.uniform(-v, v);
  return out;
}

std::vector<Eigen::Vector2d> mixture_centers(int kind) {
  std::vector<Eigen::Vector2d> centers;
  if (kind == 8 || kind == 12) {
    for (int j = 0; j < kind; ++j) {
      const double angle = 2.0 * M_PI * j / kind;
      centers.emplace_back(std::cos(angle), std::sin(angle));
    }
  } else if (kind == 25) {
    for (int a = -2; a <= 2; ++a)
      for (int b = -2; b <= 2; ++b) centers.emplace_back(static_cast<double>(a), static_cast<double>(b));
  } else {
    throw InvalidInputError("mixture_centers: kind must be 8, 12 or 25");
  }
  return centers;
}

Eigen::MatrixXd sample_gaussian_mixture(const MixtureSpec& spec, int n, Seed seed) {
  if (spec.centers.empty()) throw InvalidInputError("sample_gaussian_mixture: no centers");
  if (!(spec.variance > 0.0)) throw InvalidInputError("sample_gaussian_mixture: variance must be positive");
  if (n < 1) throw InvalidInputError("sample_gaussian_mixture: n must be >= 1");
  Rng rng(seed);
  const double sd = std::sqrt(spec.variance);
  Eigen::MatrixXd out(n, 2);
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d& center = spec.centers[rng.uniform_int(static_cast<int>(spec.centers.size()))];
    out(i, 0) = spec.center_scale * center.x() + sd * rng.normal();
    out(i, 1) = spec.center_scale * center.y() + sd * rng.normal();
  }
  return out;
}

namespace {

// CMS draw from S_a(1, beta=1, 0), 0 < a < 1, type-1 parameterization.
// For beta = 1 the shift angle is pi/2 and the scale factor is
// cos(pi a / 2)^(-1/a); the output is strictly positive with Laplace
// transform exp(-s^a / cos(pi a / 2)).
double one_sided_stable_unit(double a, Rng& rng) {
  double uv = rng.uniform01();
  if (uv <= 0.0) uv = 0x1.0p-53;
  const double angle = M_PI * (uv - 0.5);  // V ~ U(-pi/2, pi/2)
  double ue = rng.uniform01();
  double expo = -std::log(1.0 - ue);  // W ~ Exp(1)
  if (expo <= 0.0) expo = 0x1.0p-53;
  const double scale = std::pow(std::cos(M_PI * a / 2.0), -1.0 / a);
  const double shifted = a * (angle + M_PI / 2.0);
  return scale * std::sin(shifted) * std::pow(std::cos(angle), -1.0 / a) *
         std::pow(std::cos(angle - shifted) / expo, (1.0 - a) / a);
}

}  // namespace

Eigen::VectorXd sample_positive_stable(double alpha_half, int n, Seed seed) {
  if (!(alpha_half > 0.0 && alpha_half < 1.0))
    throw InvalidInputError("sample_positive_stable: alpha_half must be in (0, 1)");
  if (n < 1) throw InvalidInputError("sample_positive_stable: n must be >= 1");
  Rng rng(seed);
  const double gamma = 2.0 * std::pow(std::cos(M_PI * alpha_half / 2.0), 1.0 / alpha_half);
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) out(i) = gamma * one_sided_stable_unit(alpha_half, rng);
  return out;
}

Eigen::MatrixXd sample_ecs(const EcsSpec& spec, int n, Seed seed) {
  if (!(spec.alpha > 0.0 && spec.alpha < 2.0))
    throw InvalidInputError("sample_ecs: alpha must be in (0, 2)");
  const Eigen::Index d = spec.sigma.rows();
  if (d < 1 || spec.sigma.cols() != d) throw InvalidInputError("sample_ecs: Sigma must be square");
  if (spec.location.size() != d) throw InvalidInputError("sample_ecs: location dimension mismatch");
  if ((spec.sigma - spec.sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw InvalidInputError("sample_ecs: Sigma must be symmetric within 1e-12");
  Eigen::LLT<Eigen::MatrixXd> llt(spec.sigma);
  if (llt.info() != Eigen::Success)
    throw InvalidInputError("sample_ecs: Sigma must be positive definite");
  const Eigen::MatrixXd chol = llt.matrixL();
  if (n < 1) throw InvalidInputError("sample_ecs: n must be >= 1");

  const Eigen::VectorXd mixing = sample_positive_stable(spec.alpha / 2.0, n, derive_seed(seed, 0));
  Rng rng(derive_seed(seed, 1));
  Eigen::MatrixXd out(n, d);
  Eigen::VectorXd z(d);
  for (int i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) z(j) = rng.normal();
    out.row(i) = (std::sqrt(mixing(i)) * (chol * z) + spec.location).transpose();
  }
  return out;
}

}  // namespace prw
