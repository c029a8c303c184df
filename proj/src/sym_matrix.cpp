#include "gama/sym_matrix.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>

namespace gama {

namespace {

void require_square(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) {
    throw DimensionError("matrix is not square");
  }
}

void require_same_dim(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("matrix dimensions do not match");
  }
}

}  // namespace

SymMatrix SymMatrix::zero(Eigen::Index p) {
  return SymMatrix(Eigen::MatrixXd::Zero(p, p), Exact{});
}

SymMatrix SymMatrix::identity(Eigen::Index p) {
  return SymMatrix(Eigen::MatrixXd::Identity(p, p), Exact{});
}

SymMatrix SymMatrix::diagonal(const Eigen::VectorXd& d) {
  Eigen::MatrixXd m = d.asDiagonal();
  return SymMatrix(std::move(m), Exact{});
}

SymMatrix SymMatrix::from_matrix(const Eigen::MatrixXd& m) {
  require_square(m);
  if (!m.allFinite()) {
    throw std::invalid_argument("matrix has non-finite entries");
  }
  // (a+b)/2 evaluates identically for (i,j) and (j,i), so the result is
  // symmetric bit-for-bit; exact-symmetric input survives unchanged.
  Eigen::MatrixXd sym = (m + m.transpose()) / 2.0;
  return SymMatrix(std::move(sym), Exact{});
}

void SymMatrix::set(Eigen::Index i, Eigen::Index j, double v) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument("entry must be finite");
  }
  m_(i, j) = v;
  m_(j, i) = v;
}

SymMatrix SymMatrix::operator+(const SymMatrix& o) const {
  require_same_dim(*this, o);
  return SymMatrix(m_ + o.m_, Exact{});
}

SymMatrix SymMatrix::operator-(const SymMatrix& o) const {
  require_same_dim(*this, o);
  return SymMatrix(m_ - o.m_, Exact{});
}

SymMatrix SymMatrix::scaled(double a) const {
  return SymMatrix(a * m_, Exact{});
}

SymMatrix SymMatrix::add_scaled_identity(double a) const {
  Eigen::MatrixXd m = m_;
  m.diagonal().array() += a;
  return SymMatrix(std::move(m), Exact{});
}

std::optional<CholeskyFactor> cholesky(const SymMatrix& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m.mat());
  if (llt.info() != Eigen::Success) {
    return std::nullopt;
  }
  return CholeskyFactor(llt.matrixL());
}

double log_det(const CholeskyFactor& f) {
  return 2.0 * f.lower().diagonal().array().log().sum();
}

SymMatrix inverse(const CholeskyFactor& f) {
  const Eigen::Index p = f.dim();
  // M^{-1} = L^{-T} L^{-1}; symmetrize to kill triangular-solve drift.
  Eigen::MatrixXd linv =
      f.lower().triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(p, p));
  Eigen::MatrixXd inv = linv.transpose() * linv;
  return SymMatrix::from_matrix(inv);
}

std::pair<double, double> extreme_eigenvalues(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.mat(), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return {ev(0), ev(ev.size() - 1)};
}

double frob_norm(const SymMatrix& m) { return m.mat().norm(); }

double max_abs(const SymMatrix& m) {
  if (m.dim() == 0) return 0.0;
  return m.mat().cwiseAbs().maxCoeff();
}

double inner(const SymMatrix& a, const SymMatrix& b) {
  require_same_dim(a, b);
  return a.mat().cwiseProduct(b.mat()).sum();
}

double abs_sum(const SymMatrix& m) { return m.mat().cwiseAbs().sum(); }

}  // namespace gama
