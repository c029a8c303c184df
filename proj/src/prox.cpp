#include "gama/prox.hpp"

#include <algorithm>
#include <cmath>

namespace gama {

namespace {

double shrink(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

}  // namespace

SymMatrix soft_threshold(const SymMatrix& m, double t) {
  if (t < 0.0) {
    throw std::invalid_argument("soft_threshold: threshold must be >= 0");
  }
  Eigen::MatrixXd out = m.mat().unaryExpr([t](double x) { return shrink(x, t); });
  return SymMatrix::from_matrix(out);
}

SymMatrix soft_threshold(const SymMatrix& m, const SymMatrix& t) {
  if (m.dim() != t.dim()) {
    throw DimensionError("soft_threshold: threshold matrix dimension mismatch");
  }
  if (t.mat().minCoeff() < 0.0) {
    throw std::invalid_argument("soft_threshold: thresholds must be >= 0");
  }
  Eigen::MatrixXd out =
      m.mat().binaryExpr(t.mat(), [](double x, double ti) { return shrink(x, ti); });
  return SymMatrix::from_matrix(out);
}

SymMatrix clip(const SymMatrix& m, double t) {
  if (t < 0.0) {
    throw std::invalid_argument("clip: threshold must be >= 0");
  }
  Eigen::MatrixXd out =
      m.mat().unaryExpr([t](double x) { return std::clamp(x, -t, t); });
  return SymMatrix::from_matrix(out);
}

SymMatrix box_project(const SymMatrix& m, const SymMatrix& l, const SymMatrix& u) {
  if (m.dim() != l.dim() || m.dim() != u.dim()) {
    throw DimensionError("box_project: bound dimension mismatch");
  }
  if (((u.mat() - l.mat()).array() < 0.0).any()) {
    throw std::invalid_argument("box_project: requires l <= u elementwise");
  }
  Eigen::MatrixXd out = m.mat().cwiseMax(l.mat()).cwiseMin(u.mat());
  return SymMatrix::from_matrix(out);
}

}  // namespace gama
