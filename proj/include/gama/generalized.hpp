#ifndef GAMA_GENERALIZED_HPP
#define GAMA_GENERALIZED_HPP

#include "gama/solver.hpp"

namespace gama {

// Elementwise interval constraints l_ij <= Y_ij <= u_ij on the covariance.
struct BoundSpec {
  SymMatrix lower;
  SymMatrix upper;

  void validate() const;
};

// Pair of maps for the transformed penalty ||A^T X B||_1. Both are p-by-q;
// the dual variable lives in q-by-q. With A == B symmetric this is the
// symmetric-transform case; A == B == I recovers the plain l1 penalty.
struct LinearMapPair {
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;

  void validate(Eigen::Index p) const;
};

// Interval midpoints and half-widths: the box problem is the plain problem
// with S replaced by the midpoints and an entrywise penalty.
std::pair<SymMatrix, SymMatrix> translate_bounds(const BoundSpec& bounds);

// Box-constrained covariance estimation: same loop as solve() with the
// projected update Y+ = box_project(Y + tau*Y^-1, L, U). The box need not
// contain a PD point; persistent failure to find one is reported via
// infeasibility_suspected rather than an exception.
SolverReport solve_box(const BoundSpec& bounds, const SolverConfig& cfg);
SolverReport solve_box(const BoundSpec& bounds, const SolverConfig& cfg,
                       const SolveHooks& hooks);

// One dual update for the transformed penalty:
//   X+ = (S + sym(A Y B^T))^-1,  Y+ = clip(Y + tau * A^T X+ B, lambda).
// Empty when the inner matrix is not PD (signals backtracking).
std::optional<Eigen::MatrixXd> linear_penalty_step(const Eigen::MatrixXd& y,
                                                   const SymMatrix& s,
                                                   const LinearMapPair& maps,
                                                   double lambda, double tau);

// Minimizes -logdet X + <S,X> + lambda*||A^T X B||_1 over PD X by iterating
// the clipped dual update from Y0 = 0. The report carries the recovered
// precision in X_star; Y_star/Z_star are the transform-space dual/primal
// surrogates (q-by-q, not symmetric in general).
SolverReport solve_linear_penalty(const SymMatrix& s, const LinearMapPair& maps,
                                  double lambda, const SolverConfig& cfg);
SolverReport solve_linear_penalty(const SymMatrix& s, const LinearMapPair& maps,
                                  double lambda, const SolverConfig& cfg,
                                  const SolveHooks& hooks);

}  // namespace gama

#endif  // GAMA_GENERALIZED_HPP
