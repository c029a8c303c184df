#include "gama/solver.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace gama;

namespace {

SymMatrix mat1(double a) {
  Eigen::MatrixXd m(1, 1);
  m << a;
  return SymMatrix::from_matrix(m);
}

SymMatrix mat2(double a, double b, double c, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, c, d;
  return SymMatrix::from_matrix(m);
}

SolverConfig tight_config(double lambda, double eps = 1e-12) {
  SolverConfig cfg;
  cfg.lambda = lambda;
  cfg.eps_opt = eps;
  return cfg;
}

}  // namespace

TEST_CASE("initial_point strategies") {
  Eigen::VectorXd d(2);
  d << 1.0, 2.0;
  SymMatrix s = SymMatrix::diagonal(d);
  SymMatrix y1 = initial_point(s, 0.5, InitStrategy::SPlusLambdaI);
  CHECK(y1(0, 0) == doctest::Approx(1.5));
  CHECK(y1(1, 1) == doctest::Approx(2.5));

  SymMatrix s2 = mat2(1.0, 0.3, 0.3, 1.0);
  SymMatrix y2 = initial_point(s2, 0.1, InitStrategy::DiagSPlusLambdaI);
  CHECK(y2(0, 0) == doctest::Approx(1.1));
  CHECK(y2(1, 1) == doctest::Approx(1.1));
  CHECK(y2(0, 1) == 0.0);

  SymMatrix not_pd = mat2(1.0, 2.0, 2.0, 1.0);
  CHECK_THROWS_AS(initial_point(s2, 0.1, InitStrategy::Custom, not_pd),
                  NotPositiveDefiniteError);
  SymMatrix ok = initial_point(s2, 0.1, InitStrategy::Custom, SymMatrix::identity(2));
  CHECK(ok(0, 0) == 1.0);
}

TEST_CASE("gama_step scalar arithmetic") {
  SymMatrix y = mat1(3.0);
  SymMatrix y_inv = inverse(*cholesky(y));
  auto [z_plus, y_plus] = gama_step(y, y_inv, mat1(2.0), 1.0, 1.0);
  CHECK(y_plus(0, 0) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(z_plus(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("gama_step with dominating lambda is a pure ascent step") {
  SymMatrix y = testing::random_spd(4, 17);
  SymMatrix s = testing::random_spd(4, 23);
  SymMatrix y_inv = inverse(*cholesky(y));
  const double tau = 0.7;
  const double huge =
      max_abs(SymMatrix::from_matrix(y.mat() - s.mat() + tau * y_inv.mat())) + 1.0;
  auto [z_plus, y_plus] = gama_step(y, y_inv, s, huge, tau);
  const Eigen::MatrixXd expected = y.mat() + tau * y_inv.mat();
  CHECK((y_plus.mat() - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("gama_step updates are mutually consistent") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SymMatrix y = testing::random_spd(6, 100 + seed);
    SymMatrix s = testing::random_spd(6, 200 + seed);
    SymMatrix y_inv = inverse(*cholesky(y));
    for (double tau : {0.1, 1.0, 3.0}) {
      auto [z_plus, y_plus] = gama_step(y, y_inv, s, 0.2, tau);
      const Eigen::MatrixXd reconstructed = y.mat() + tau * (y_inv.mat() - z_plus.mat());
      const double scale = std::max(1.0, y_plus.mat().cwiseAbs().maxCoeff());
      CHECK((y_plus.mat() - reconstructed).cwiseAbs().maxCoeff() <= 1e-12 * scale);
    }
  }
}

TEST_CASE("sufficient descent accepts a null step and small steps") {
  SymMatrix y = testing::random_spd(5, 31);
  const double logdet_y = log_det(*cholesky(y));
  SymMatrix y_inv = inverse(*cholesky(y));
  CHECK(sufficient_descent_ok(y, y, y_inv, 1.0, logdet_y, logdet_y));

  // Quadratic model upper-bounds the objective for steps below the
  // curvature scale, so any such step passes.
  SymMatrix s = testing::random_spd(5, 37);
  const double lam_min = extreme_eigenvalues(y).first;
  const double tau = 0.25 * lam_min * lam_min;
  auto [z_plus, y_plus] = gama_step(y, y_inv, s, 0.3, tau);
  auto f_plus = cholesky(y_plus);
  REQUIRE(f_plus.has_value());
  CHECK(sufficient_descent_ok(y, y_plus, y_inv, tau, logdet_y, log_det(*f_plus)));
}

TEST_CASE("sufficient descent rejects an overshoot") {
  // Scalar case: -log(0.1) = 2.303 exceeds the model value.
  SymMatrix y = mat1(1.0);
  SymMatrix y_plus = mat1(0.1);
  CHECK_FALSE(sufficient_descent_ok(y, y_plus, SymMatrix::identity(1), 10.0, 0.0,
                                    std::log(0.1)));

  // Scalar ascent overshoot: step 3 from y=1 exceeds the curvature scale 1.
  SymMatrix y_over = mat1(4.0);
  CHECK_FALSE(sufficient_descent_ok(y, y_over, SymMatrix::identity(1), 3.0, 0.0,
                                    std::log(4.0)));
  SymMatrix y_mild = mat1(1.5);
  CHECK(sufficient_descent_ok(y, y_mild, SymMatrix::identity(1), 0.5, 0.0,
                              std::log(1.5)));
}

TEST_CASE("bb_step ratio and guards") {
  SymMatrix y_prev = SymMatrix::zero(2);
  SymMatrix y_curr = SymMatrix::identity(2);
  SymMatrix x_curr = SymMatrix::zero(2);
  SymMatrix x_prev = SymMatrix::identity(2).scaled(2.0);
  auto tau = bb_step(y_prev, y_curr, x_prev, x_curr);
  REQUIRE(tau.has_value());
  CHECK(*tau == doctest::Approx(0.5));

  CHECK_FALSE(bb_step(y_prev, y_prev, x_prev, x_curr).has_value());
  // negative curvature
  CHECK_FALSE(bb_step(y_prev, y_curr, x_curr, x_prev).has_value());
}

TEST_CASE("duality gap at the scalar optimum and for indefinite Z") {
  auto gap = duality_gap(mat1(3.0), mat1(1.0 / 3.0), mat1(2.0), 1.0);
  REQUIRE(gap.has_value());
  CHECK(std::abs(*gap) < 1e-14);

  CHECK_FALSE(duality_gap(mat1(3.0), mat1(-1.0), mat1(2.0), 1.0).has_value());
}

TEST_CASE("kkt_residual cases") {
  SymMatrix x = mat1(1.0 / 3.0);
  SymMatrix x_inv = mat1(3.0);
  CHECK(kkt_residual(x, x_inv, mat1(2.0), 1.0) < 1e-14);

  SymMatrix i2 = SymMatrix::identity(2);
  CHECK(kkt_residual(i2, i2, i2, 0.5) == doctest::Approx(0.5));
}

TEST_CASE("solve recovers the scalar closed form") {
  SolverReport r = solve(mat1(2.0), tight_config(1.0));
  CHECK(r.converged);
  CHECK(r.gap <= 1e-12);
  CHECK(r.Y_star(0, 0) == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(r.Z_star(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-8));
  CHECK(r.stop_reason == "gap");
}

TEST_CASE("solve on a diagonal problem") {
  Eigen::VectorXd d(2);
  d << 1.0, 2.0;
  SolverReport r = solve(SymMatrix::diagonal(d), tight_config(0.5));
  CHECK(r.converged);
  CHECK(r.Y_star(0, 0) == doctest::Approx(1.5).epsilon(1e-8));
  CHECK(r.Y_star(1, 1) == doctest::Approx(2.5).epsilon(1e-8));
  CHECK(std::abs(r.Y_star(0, 1)) < 1e-8);
  CHECK(r.Z_star(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
  CHECK(r.Z_star(1, 1) == doctest::Approx(0.4).epsilon(1e-8));
}

TEST_CASE("solve on the 2x2 box-boundary problem") {
  SymMatrix s = mat2(1.0, 0.3, 0.3, 1.0);
  SolverReport r = solve(s, tight_config(0.1));
  CHECK(r.converged);
  CHECK(r.Y_star(0, 0) == doctest::Approx(1.1).epsilon(1e-7));
  CHECK(r.Y_star(0, 1) == doctest::Approx(0.2).epsilon(1e-7));
  const double det = 1.17;
  CHECK(r.Z_star(0, 0) == doctest::Approx(1.1 / det).epsilon(1e-7));
  CHECK(r.Z_star(0, 1) == doctest::Approx(-0.2 / det).epsilon(1e-7));
}

TEST_CASE("solve rejects bad inputs") {
  SolverConfig cfg = tight_config(0.1);
  cfg.backtrack_c = 1.5;
  CHECK_THROWS_AS(solve(SymMatrix::identity(2), cfg), std::invalid_argument);

  SolverConfig cfg2 = tight_config(0.1);
  cfg2.init_strategy = InitStrategy::Custom;
  cfg2.custom_init = mat2(1.0, 2.0, 2.0, 1.0);
  CHECK_THROWS_AS(solve(SymMatrix::identity(2), cfg2), NotPositiveDefiniteError);
}

TEST_CASE("iterates stay dual-feasible, PD, and monotone in -logdet") {
  for (std::uint64_t seed : {3u, 8u, 21u}) {
    for (Eigen::Index p : {5, 12, 20}) {
      SymMatrix s =
          testing::random_spd(p, 5000 + seed * 131 + static_cast<std::uint64_t>(p));
      const double lambda = 0.05 + 0.03 * static_cast<double>(seed % 3);

      int violations_feas = 0;
      int violations_pd = 0;
      int violations_descent = 0;
      int violations_suffdesc = 0;
      SolveHooks hooks;
      hooks.on_accept = [&](const IterateInfo& info) {
        const SymMatrix y_curr = SymMatrix::from_matrix(info.y_curr);
        const SymMatrix y_prev = SymMatrix::from_matrix(info.y_prev);
        const SymMatrix x_prev = SymMatrix::from_matrix(info.x_prev);
        if (max_abs(y_curr - s) > lambda + 1e-12) ++violations_feas;
        if (!cholesky(y_curr).has_value()) ++violations_pd;
        if (info.logdet_curr < info.logdet_prev - 1e-10) ++violations_descent;
        if (!sufficient_descent_ok(y_prev, y_curr, x_prev, info.tau, info.logdet_prev,
                                   info.logdet_curr)) {
          ++violations_suffdesc;
        }
      };

      SolverConfig cfg = tight_config(lambda, 1e-10);
      SolverReport r = solve(s, cfg, hooks);
      CHECK(r.converged);
      CHECK(violations_feas == 0);
      CHECK(violations_pd == 0);
      CHECK(violations_descent == 0);
      CHECK(violations_suffdesc == 0);
    }
  }
}

TEST_CASE("converged report is a fixed point with small KKT residual") {
  for (std::uint64_t seed : {2u, 9u}) {
    SymMatrix s = testing::random_spd(8, 7000 + seed);
    SolverConfig cfg = tight_config(0.1, 1e-13);
    SolverReport r = solve(s, cfg);
    REQUIRE(r.converged);

    const SymMatrix y_star = SymMatrix::from_matrix(r.Y_star);
    const SymMatrix z_star = SymMatrix::from_matrix(r.Z_star);
    const double tau_last = r.trace.back().tau;
    auto [z_next, y_next] =
        gama_step(y_star, inverse(*cholesky(y_star)), s, 0.1, tau_last);
    CHECK(frob_norm(y_next - y_star) <= 1e-6 * frob_norm(y_star));

    CHECK(kkt_residual(z_star, inverse(*cholesky(z_star)), s, 0.1) <= 1e-6);
  }
}

TEST_CASE("reported gap is bit-identical to an independent recomputation") {
  SymMatrix s = testing::random_spd(10, 99);
  SolverConfig cfg = tight_config(0.08, 1e-9);
  SolverReport r = solve(s, cfg);
  REQUIRE(r.converged);
  auto gap = duality_gap(SymMatrix::from_matrix(r.Y_star),
                         SymMatrix::from_matrix(r.Z_star), s, 0.08);
  REQUIRE(gap.has_value());
  CHECK(*gap == r.gap);  // bit-for-bit
}

TEST_CASE("large lambda yields the diagonal solution") {
  for (std::uint64_t seed : {4u, 13u}) {
    SymMatrix s = testing::random_spd(6, 8800 + seed);
    double off_max = 0.0;
    for (Eigen::Index i = 0; i < 6; ++i) {
      for (Eigen::Index j = i + 1; j < 6; ++j) {
        off_max = std::max(off_max, std::abs(s(i, j)));
      }
    }
    const double lambda = 1.01 * off_max;
    SolverReport r = solve(s, tight_config(lambda, 1e-10));
    REQUIRE(r.converged);
    for (Eigen::Index i = 0; i < 6; ++i) {
      for (Eigen::Index j = 0; j < 6; ++j) {
        if (i == j) {
          CHECK(r.Z_star(i, i) ==
                doctest::Approx(1.0 / (s(i, i) + lambda)).epsilon(1e-8));
        } else {
          CHECK(std::abs(r.Z_star(i, j)) < 1e-8);
        }
      }
    }
  }
}

TEST_CASE("constant safe step contracts linearly toward the solution") {
  for (std::uint64_t seed : {5u, 16u}) {
    const Eigen::Index p = 10;
    SymMatrix s = testing::random_spd(p, 9100 + seed);
    const double lambda = 0.15;

    SolverReport ref = solve(s, tight_config(lambda, 1e-12));
    REQUIRE(ref.converged);
    const SymMatrix y_star = SymMatrix::from_matrix(ref.Y_star);
    const auto [star_min, star_max] = extreme_eigenvalues(y_star);

    const SymMatrix y0 = initial_point(s, lambda, InitStrategy::SPlusLambdaI);
    const double a0 = extreme_eigenvalues(y0).first;
    const double safe_alpha = std::min(a0, star_min);
    const double tau = 0.9 * safe_alpha * safe_alpha;
    std::vector<double> schedule(600, tau);

    struct Step {
      double dist_prev, dist_curr, bound;
    };
    std::vector<Step> steps;
    SolveHooks hooks;
    hooks.tau_schedule = &schedule;
    hooks.on_accept = [&](const IterateInfo& info) {
      const SymMatrix y_prev = SymMatrix::from_matrix(info.y_prev);
      const SymMatrix y_curr = SymMatrix::from_matrix(info.y_curr);
      const auto [prev_min, prev_max] = extreme_eigenvalues(y_prev);
      const double alpha = std::min(prev_min, star_min);
      const double beta = std::max(prev_max, star_max);
      const double bound = std::max(std::abs(1.0 - info.tau / (alpha * alpha)),
                                    std::abs(1.0 - info.tau / (beta * beta)));
      steps.push_back({frob_norm(y_prev - y_star), frob_norm(y_curr - y_star), bound});
    };

    SolverConfig cfg = tight_config(lambda, 1e-13);
    cfg.max_iters = 600;
    solve(s, cfg, hooks);

    // The reference point carries its own O(sqrt(eps)) error, so ratio
    // checks are only meaningful well above it.
    const double floor = 1e-6 * frob_norm(y_star);
    int checked = 0;
    for (const auto& st : steps) {
      if (st.dist_prev <= floor) break;
      CHECK(st.dist_curr < st.dist_prev);
      CHECK(st.dist_curr <= (st.bound + 1e-6) * st.dist_prev);
      ++checked;
    }
    CHECK(checked > 10);
  }
}

TEST_CASE("trace records accepted iterations") {
  SymMatrix s = testing::random_spd(5, 321);
  SolverReport r = solve(s, tight_config(0.1, 1e-9));
  REQUIRE(r.converged);
  REQUIRE_FALSE(r.trace.empty());
  CHECK(r.trace.size() == static_cast<size_t>(r.iters));
  CHECK(r.trace.front().iter == 0);
  CHECK(r.trace.back().gap == r.gap);
  for (const auto& t : r.trace) CHECK(t.tau > 0.0);
}

TEST_CASE("nnz_percent counts entries above the zero tolerance") {
  SymMatrix m = SymMatrix::zero(2);
  m.set(0, 0, 1.0);
  CHECK(nnz_percent(m) == doctest::Approx(25.0));
  m.set(0, 1, 1e-13);  // below tolerance
  CHECK(nnz_percent(m) == doctest::Approx(25.0));
}
