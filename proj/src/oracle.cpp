#include "gama/oracle.hpp"

#include "gama/prox.hpp"

#include <cmath>
#include <stdexcept>

namespace gama {

SymMatrix oracle_solve(const SymMatrix& s, double lambda, double tol) {
  if (s.dim() > 10) throw std::invalid_argument("oracle_solve: p must be <= 10");
  if (!(lambda > 0.0)) throw std::invalid_argument("oracle_solve: lambda must be > 0");
  if (!(tol > 0.0)) throw std::invalid_argument("oracle_solve: tol must be > 0");

  const Eigen::Index p = s.dim();
  const Eigen::MatrixXd ones = Eigen::MatrixXd::Constant(p, p, 1.0);
  const SymMatrix lower = SymMatrix::from_matrix(s.mat() - lambda * ones);
  const SymMatrix upper = SymMatrix::from_matrix(s.mat() + lambda * ones);

  SymMatrix y = s.add_scaled_identity(lambda);
  auto f = cholesky(y);
  if (!f) throw NotPositiveDefiniteError("oracle_solve: S + lambda*I is not PD");

  double eta = 0.9 * std::pow(extreme_eigenvalues(y).first, 2);
  constexpr int kMaxIters = 400000;

  for (int t = 0; t < kMaxIters; ++t) {
    const SymMatrix x = inverse(*f);
    const auto fx = cholesky(x);
    if (fx) {
      const double gap = -log_det(*f) - static_cast<double>(p) - log_det(*fx) +
                         inner(s, x) + lambda * abs_sum(x);
      if (gap <= tol) return x;
    }

    // Monotone non-increasing step bounded by the current curvature scale.
    eta = std::min(eta, 0.9 * std::pow(extreme_eigenvalues(y).first, 2));
    for (int halvings = 0; halvings < 80; ++halvings) {
      SymMatrix y_next =
          box_project(SymMatrix::from_matrix(y.mat() + eta * x.mat()), lower, upper);
      auto f_next = cholesky(y_next);
      if (f_next) {
        y = std::move(y_next);
        f = std::move(f_next);
        break;
      }
      eta *= 0.5;
    }
  }
  throw std::runtime_error("oracle_solve: did not reach the gap target");
}

double scalar_solution(double s, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("scalar_solution: lambda must be > 0");
  if (!(s + lambda > 0.0)) {
    throw std::domain_error("scalar_solution: requires s + lambda > 0");
  }
  return 1.0 / (s + lambda);
}

}  // namespace gama
