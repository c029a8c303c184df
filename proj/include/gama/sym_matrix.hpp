#ifndef GAMA_SYM_MATRIX_HPP
#define GAMA_SYM_MATRIX_HPP

#include <Eigen/Core>

#include <optional>
#include <stdexcept>
#include <utility>

namespace gama {

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotPositiveDefiniteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dense symmetric p-by-p matrix with both triangles stored. Symmetry is
// bit-exact: construction mirrors or averages the triangles, and set()
// writes both entries. All entries are required to be finite.
class SymMatrix {
 public:
  SymMatrix() = default;

  static SymMatrix zero(Eigen::Index p);
  static SymMatrix identity(Eigen::Index p);
  static SymMatrix diagonal(const Eigen::VectorXd& d);
  // Symmetrizes as (m + m^T)/2 and rejects non-finite entries. Exact
  // symmetric input passes through bit-unchanged.
  static SymMatrix from_matrix(const Eigen::MatrixXd& m);

  Eigen::Index dim() const { return m_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
  void set(Eigen::Index i, Eigen::Index j, double v);
  const Eigen::MatrixXd& mat() const { return m_; }
  Eigen::VectorXd diag() const { return m_.diagonal(); }
  double trace() const { return m_.trace(); }

  SymMatrix operator+(const SymMatrix& o) const;
  SymMatrix operator-(const SymMatrix& o) const;
  SymMatrix scaled(double a) const;
  SymMatrix add_scaled_identity(double a) const;

 private:
  struct Exact {};
  SymMatrix(Eigen::MatrixXd m, Exact) : m_(std::move(m)) {}

  Eigen::MatrixXd m_;
};

// Lower-triangular Cholesky factor with strictly positive diagonal;
// factor * factor^T reconstructs the source matrix.
class CholeskyFactor {
 public:
  CholeskyFactor(Eigen::MatrixXd lower) : lower_(std::move(lower)) {}
  Eigen::Index dim() const { return lower_.rows(); }
  const Eigen::MatrixXd& lower() const { return lower_; }

 private:
  Eigen::MatrixXd lower_;
};

// Factorization attempt; empty when a non-positive pivot is hit, which is
// how the solver's backtracking detects infeasible steps.
std::optional<CholeskyFactor> cholesky(const SymMatrix& m);

// 2 * sum(log diag(L)).
double log_det(const CholeskyFactor& f);

// Inverse of the factored matrix via triangular solves, symmetrized.
SymMatrix inverse(const CholeskyFactor& f);

// (lambda_min, lambda_max) from a full symmetric eigensolve.
std::pair<double, double> extreme_eigenvalues(const SymMatrix& m);

double frob_norm(const SymMatrix& m);
double max_abs(const SymMatrix& m);
double inner(const SymMatrix& a, const SymMatrix& b);
// Sum of |entries| over the full matrix (the elementwise l1 norm).
double abs_sum(const SymMatrix& m);

}  // namespace gama

#endif  // GAMA_SYM_MATRIX_HPP
