#include "gama/oracle.hpp"

#include "gama/solver.hpp"
#include "test_util.hpp"

#include <doctest.h>

using namespace gama;

namespace {

SymMatrix mat1(double a) {
  Eigen::MatrixXd m(1, 1);
  m << a;
  return SymMatrix::from_matrix(m);
}

}  // namespace

TEST_CASE("scalar_solution closed form") {
  CHECK(scalar_solution(2.0, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(scalar_solution(0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(scalar_solution(-2.0, 1.0), std::domain_error);
}

TEST_CASE("oracle matches scalar and diagonal closed forms") {
  SymMatrix x1 = oracle_solve(mat1(2.0), 1.0, 1e-12);
  CHECK(x1(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));

  Eigen::VectorXd d(2);
  d << 1.0, 2.0;
  SymMatrix x2 = oracle_solve(SymMatrix::diagonal(d), 0.5, 1e-12);
  CHECK(x2(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  CHECK(x2(1, 1) == doctest::Approx(0.4).epsilon(1e-9));
  CHECK(std::abs(x2(0, 1)) < 1e-9);

  Eigen::MatrixXd s(2, 2);
  s << 1.0, 0.3, 0.3, 1.0;
  SymMatrix x3 = oracle_solve(SymMatrix::from_matrix(s), 0.1, 1e-12);
  const double det = 1.17;
  CHECK(x3(0, 0) == doctest::Approx(1.1 / det).epsilon(1e-8));
  CHECK(x3(0, 1) == doctest::Approx(-0.2 / det).epsilon(1e-8));
}

TEST_CASE("oracle rejects out-of-contract inputs") {
  CHECK_THROWS_AS(oracle_solve(SymMatrix::identity(11), 0.1, 1e-10),
                  std::invalid_argument);
  CHECK_THROWS_AS(oracle_solve(SymMatrix::identity(2), 0.0, 1e-10),
                  std::invalid_argument);
}

TEST_CASE("oracle satisfies the stationarity conditions") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Eigen::Index p = 1 + static_cast<Eigen::Index>(seed % 5);
    SymMatrix s = testing::random_spd(p, 4000 + seed);
    const double lambda = 0.1 + 0.1 * static_cast<double>(seed % 3);
    SymMatrix x = oracle_solve(s, lambda, 1e-12);
    CHECK(kkt_residual(x, inverse(*cholesky(x)), s, lambda) <= 1e-8);
  }
}

TEST_CASE("oracle and solver agree on small instances") {
  int idx = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    for (double lambda : {0.05, 0.1, 0.5, 1.0}) {
      const Eigen::Index p = 1 + static_cast<Eigen::Index>(idx % 5);
      ++idx;
      SymMatrix s =
          testing::random_spd(p, 5500 + seed * 17 + static_cast<std::uint64_t>(p));
      SolverConfig cfg;
      cfg.lambda = lambda;
      cfg.eps_opt = 1e-12;
      SolverReport r = solve(s, cfg);
      REQUIRE(r.converged);
      SymMatrix x_ref = oracle_solve(s, lambda, 1e-12);
      CHECK(frob_norm(SymMatrix::from_matrix(r.Z_star) - x_ref) <= 1e-6);
    }
  }
}
