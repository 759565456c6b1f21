#include <doctest.h>

#include <cmath>

#include "prw/exact_ot.hpp"
#include "prw/measures.hpp"
#include "prw/projector_distances.hpp"

using namespace prw;

namespace {

DiscreteMeasure cube_measure(int d, double v, int n, Seed seed) {
  return make_empirical(sample_hypercube(d, v, n, seed));
}

}  // namespace

TEST_CASE("compute_v_pi") {
  SUBCASE("identity coupling of identical clouds vanishes") {
    const Eigen::MatrixXd x = sample_hypercube(3, 1.0, 5, Seed{1});
    TransportPlan plan;
    plan.row_marginal = Eigen::VectorXd::Constant(5, 0.2);
    plan.col_marginal = plan.row_marginal;
    for (int i = 0; i < 5; ++i) plan.entries.push_back({i, i, 0.2});
    CHECK(compute_v_pi(plan, x, x).norm() <= 1e-15);
  }

  SUBCASE("rank-one outer product for singletons") {
    Eigen::MatrixXd x(1, 2), y(1, 2);
    x << 1.0, 0.0;
    y << 0.0, 0.0;
    TransportPlan plan;
    plan.row_marginal = Eigen::VectorXd::Constant(1, 1.0);
    plan.col_marginal = plan.row_marginal;
    plan.entries.push_back({0, 0, 1.0});
    const Eigen::MatrixXd v = compute_v_pi(plan, x, y);
    CHECK(v(0, 0) == doctest::Approx(1.0));
    CHECK(v(0, 1) == doctest::Approx(0.0));
    CHECK(v(1, 0) == doctest::Approx(0.0));
    CHECK(v(1, 1) == doctest::Approx(0.0));
  }

  SUBCASE("trace identity <UU', V_pi> = projected plan cost") {
    for (int trial = 0; trial < 8; ++trial) {
      const Seed s{40 + (unsigned)trial};
      const DiscreteMeasure mu = cube_measure(5, 1.0, 9, derive_seed(s, 0));
      const DiscreteMeasure nu = cube_measure(5, 1.0, 7, derive_seed(s, 1));
      const StiefelPoint u = sample_uniform_stiefel(5, 2, derive_seed(s, 2));
      const CostMatrix cost = cost_matrix(mu.atoms(), nu.atoms(), &u, 2.0);
      const OtSolution sol = solve_exact_ot(cost, mu.weights(), nu.weights());
      const Eigen::MatrixXd v = compute_v_pi(sol.plan, mu.atoms(), nu.atoms());
      CHECK((v - v.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
      const double projected =
          (u.matrix() * u.matrix().transpose()).cwiseProduct(v).sum();
      CHECK(projected == doctest::Approx(sol.value).epsilon(1e-9));
    }
  }
}

TEST_CASE("rsgan on identical measures converges immediately to zero") {
  const DiscreteMeasure mu = cube_measure(4, 1.0, 12, Seed{7});
  RsganConfig config;
  config.k = 2;
  config.seed = Seed{8};
  const PrwResult r = prw2_rsgan(mu, mu, config);
  CHECK(r.value == doctest::Approx(0.0));
  CHECK(r.converged);
  CHECK(r.iterations <= 1);
}

TEST_CASE("rsgan recovers the translation optimum with k = 1") {
  int hits = 0;
  const int trials = 10;
  for (int trial = 0; trial < trials; ++trial) {
    const Seed s{1000 + (unsigned)trial};
    const Eigen::MatrixXd base = sample_hypercube(5, 1.0, 30, derive_seed(s, 0));
    Rng rng(derive_seed(s, 1));
    Eigen::RowVectorXd shift(5);
    for (int j = 0; j < 5; ++j) shift(j) = rng.normal();
    const double len = shift.norm();
    const DiscreteMeasure mu = make_empirical(base);
    const DiscreteMeasure nu = make_empirical(base.rowwise() + shift);
    RsganConfig config;
    config.k = 1;
    config.seed = derive_seed(s, 2);
    const PrwResult r = prw2_rsgan(mu, nu, config);
    CHECK(r.value <= len + 1e-8);
    if (r.value >= 0.95 * len) ++hits;
  }
  CHECK(hits >= trials - 1);
}

TEST_CASE("rsgan runs with the sinkhorn inner solver behind the config switch") {
  const DiscreteMeasure mu = cube_measure(4, 1.0, 14, Seed{1150});
  const DiscreteMeasure nu = cube_measure(4, 1.0, 14, Seed{1151});
  RsganConfig config;
  config.k = 2;
  config.seed = Seed{1152};
  config.use_sinkhorn = true;
  config.sinkhorn_reg = 0.05;
  const PrwResult approx = prw2_rsgan(mu, nu, config);
  CHECK(approx.value >= 0.0);
  CHECK(std::isfinite(approx.value));
  // entropic inner values sit above the exact optimum, so the projected
  // value still cannot exceed the full W2 by more than the entropic bias
  const double w2 = wasserstein_p(mu, nu, 2.0);
  CHECK(approx.value <= w2 + 0.5);
}

TEST_CASE("rsgan with k = d matches the plain W2") {
  for (int trial = 0; trial < 5; ++trial) {
    const Seed s{1100 + (unsigned)trial};
    const DiscreteMeasure mu = cube_measure(4, 1.0, 20, derive_seed(s, 0));
    const DiscreteMeasure nu = cube_measure(4, 1.0, 20, derive_seed(s, 1));
    RsganConfig config;
    config.k = 4;
    config.seed = derive_seed(s, 2);
    const PrwResult r = prw2_rsgan(mu, nu, config);
    CHECK(std::abs(r.value - wasserstein_p(mu, nu, 2.0)) <= 1e-6);
  }
}

TEST_CASE("rsgan invariants: best-iterate return, self-consistency, symmetry") {
  for (int trial = 0; trial < 5; ++trial) {
    const Seed s{1200 + (unsigned)trial};
    const DiscreteMeasure mu = cube_measure(6, 1.0, 18, derive_seed(s, 0));
    const DiscreteMeasure nu = cube_measure(6, 1.0, 18, derive_seed(s, 1));
    RsganConfig config;
    config.k = 2;
    config.seed = derive_seed(s, 2);
    const PrwResult r = prw2_rsgan(mu, nu, config);

    // history holds the inner optima; the returned value dominates all of them
    REQUIRE(!r.history.empty());
    for (const PrwIterate& it : r.history)
      CHECK(r.value * r.value >= it.objective - 1e-12);

    // recomputing the exact OT at the returned projection reproduces value
    const double recomputed = wasserstein_p(mu, nu, 2.0, &r.projection);
    CHECK(recomputed == doctest::Approx(r.value).epsilon(1e-9));

    // swap symmetry with the same U_0
    const PrwResult swapped = prw2_rsgan(nu, mu, config);
    CHECK(swapped.value == doctest::Approx(r.value).epsilon(1e-9));
  }
}

TEST_CASE("iprw basics and sandwich") {
  const DiscreteMeasure mu = cube_measure(10, 1.0, 30, Seed{2000});
  CHECK(iprw(mu, mu, 2.0, 2, 20, Seed{1}) == doctest::Approx(0.0));

  for (int trial = 0; trial < 5; ++trial) {
    const Seed s{2100 + (unsigned)trial};
    const DiscreteMeasure a = cube_measure(10, 1.0, 30, derive_seed(s, 0));
    const DiscreteMeasure b = cube_measure(10, 1.0, 30, derive_seed(s, 1));
    const double w2 = wasserstein_p(a, b, 2.0);
    for (int k : {1, 2, 5}) {
      const double lower = iprw(a, b, 2.0, k, 30, derive_seed(s, 2));
      CHECK(lower <= w2 + 1e-9);
      CHECK(lower >= 0.0);
    }
    // symmetry under a shared projection set
    CHECK(iprw(a, b, 2.0, 2, 30, derive_seed(s, 2)) ==
          doctest::Approx(iprw(b, a, 2.0, 2, 30, derive_seed(s, 2))).epsilon(1e-9));
  }
}

TEST_CASE("iprw triangle inequality over a shared projection set") {
  for (int trial = 0; trial < 5; ++trial) {
    const Seed s{2200 + (unsigned)trial};
    const DiscreteMeasure a = cube_measure(4, 1.0, 10, derive_seed(s, 0));
    const DiscreteMeasure b = cube_measure(4, 1.0, 8, derive_seed(s, 1));
    const DiscreteMeasure c = cube_measure(4, 1.0, 12, derive_seed(s, 2));
    const Seed shared = derive_seed(s, 3);
    CHECK(iprw(a, c, 2.0, 2, 25, shared) <=
          iprw(a, b, 2.0, 2, 25, shared) + iprw(b, c, 2.0, 2, 25, shared) + 1e-9);
  }
}

TEST_CASE("iprw scales with the separation of Gaussian clouds") {
  // N(u1, I) vs N(u2, I): the k = 2 integral distance is c * ||u1 - u2||
  const int n = 300, d = 6;
  auto gaussian_cloud = [&](double offset, Seed seed) {
    Rng rng(seed);
    Eigen::MatrixXd pts(n, d);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < d; ++j) pts(i, j) = rng.normal();
    pts.col(0).array() += offset;
    return make_empirical(pts);
  };
  const DiscreteMeasure base = gaussian_cloud(0.0, Seed{2300});
  const Seed shared{2303};
  const double separations[] = {6.0, 12.0, 18.0};
  double values[3];
  for (int t = 0; t < 3; ++t) {
    const DiscreteMeasure other = gaussian_cloud(separations[t], Seed{2301 + (unsigned)t});
    values[t] = iprw(base, other, 2.0, 2, 40, shared);
  }
  CHECK(values[1] / values[0] == doctest::Approx(2.0).epsilon(0.15));
  CHECK(values[2] / values[0] == doctest::Approx(3.0).epsilon(0.15));
  CHECK(values[2] / values[1] == doctest::Approx(1.5).epsilon(0.15));
}

TEST_CASE("max-sliced approximations") {
  const int n = 100;
  Rng rng(Seed{2400});
  Eigen::MatrixXd base(n, 3);
  for (int i = 0; i < n; ++i) {
    base(i, 0) = rng.uniform(-1.0, 1.0);
    base(i, 1) = 0.0;
    base(i, 2) = 0.0;
  }
  const DiscreteMeasure mu = make_empirical(base);

  SUBCASE("identical measures give zero") {
    MaxSwConfig config;
    config.seed = Seed{1};
    CHECK(max_sw_quantile_mc(mu, mu, config).value == doctest::Approx(0.0));
    CHECK(max_sw_pushforward(mu, mu, config).value <= 0.05);
  }

  SUBCASE("axis-aligned data is maximal along the axis") {
    Eigen::MatrixXd shifted = base;
    shifted.col(0).array() += 2.0;
    const DiscreteMeasure nu = make_empirical(shifted);
    MaxSwConfig config;
    config.mc_points = 1000;
    config.ascent_steps = 60;
    config.ascent_lr = 0.05;
    config.seed = Seed{5};
    const MaxSwResult r = max_sw_quantile_mc(mu, nu, config);
    CHECK(std::abs(r.u(0)) == doctest::Approx(1.0).epsilon(0.02));
    const double axis_value =
        wasserstein_1d(base.col(0), mu.weights(), shifted.col(0), mu.weights(), 2.0);
    CHECK(std::sqrt(r.value) == doctest::Approx(axis_value).epsilon(0.05));
    // contraction up to interpolation slack
    const double w2 = wasserstein_p(mu, nu, 2.0);
    CHECK(std::sqrt(r.value) <= w2 * 1.05 + 1e-9);
  }

  SUBCASE("pushforward objective sees a pure translation exactly") {
    Eigen::MatrixXd shifted = base;
    shifted.col(0).array() += 1.5;
    const DiscreteMeasure nu = make_empirical(shifted);
    const Eigen::VectorXd e1 = Eigen::Vector3d(1.0, 0.0, 0.0);
    Rng idx_rng(Seed{6});
    std::vector<int> indices(1000);
    for (int& idx : indices) idx = idx_rng.uniform_int(n);
    const double value = max_sw_objective_pushforward(mu, nu, e1, indices, 2.0);
    CHECK(value == doctest::Approx(1.5 * 1.5).epsilon(0.05));
  }

  SUBCASE("determinism") {
    Eigen::MatrixXd shifted = base;
    shifted.col(0).array() += 1.0;
    const DiscreteMeasure nu = make_empirical(shifted);
    MaxSwConfig config;
    config.seed = Seed{77};
    const MaxSwResult a = max_sw_pushforward(mu, nu, config);
    const MaxSwResult b = max_sw_pushforward(mu, nu, config);
    CHECK(a.value == b.value);
    CHECK(a.u == b.u);
    // canonical sign: first nonzero coordinate positive
    bool seen = false;
    for (Eigen::Index i = 0; i < a.u.size() && !seen; ++i) {
      if (a.u(i) != 0.0) {
        CHECK(a.u(i) > 0.0);
        seen = true;
      }
    }
  }
}

TEST_CASE("scaling data and direction scales the pushforward objective quadratically") {
  Rng rng(Seed{2500});
  const int n = 40;
  Eigen::MatrixXd x(n, 2), y(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < 2; ++j) {
      x(i, j) = rng.uniform(-1.0, 1.0);
      y(i, j) = rng.uniform(-1.0, 1.0);
    }
  const Eigen::VectorXd u = Eigen::Vector2d(1.0, 1.0).normalized();
  std::vector<int> indices(500);
  for (int& idx : indices) idx = rng.uniform_int(n);

  const DiscreteMeasure mu = make_empirical(x);
  const DiscreteMeasure nu = make_empirical(y);
  const double base_value = max_sw_objective_pushforward(mu, nu, u, indices, 2.0);
  const double c = 3.0;
  const DiscreteMeasure mu_scaled = make_empirical((c * x).eval());
  const DiscreteMeasure nu_scaled = make_empirical((c * y).eval());
  const double scaled_value = max_sw_objective_pushforward(mu_scaled, nu_scaled, u, indices, 2.0);
  CHECK(scaled_value == doctest::Approx(c * c * base_value).epsilon(1e-9));
}
