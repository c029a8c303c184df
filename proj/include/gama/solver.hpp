#ifndef GAMA_SOLVER_HPP
#define GAMA_SOLVER_HPP

#include "gama/prox.hpp"
#include "gama/sym_matrix.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace gama {

enum class InitStrategy {
  SPlusLambdaI,      // Y0 = S + lambda*I, dual-feasible for every lambda
  DiagSPlusLambdaI,  // Y0 = diag(S) + lambda*I, good for very sparse targets
  Custom,            // caller-supplied PD start
};

struct SolverConfig {
  double lambda = 0.0;
  double eps_opt = 1e-8;   // duality-gap tolerance
  double eps_prim = 0.0;   // relative-progress tolerance; 0 disables
  double backtrack_c = 0.5;
  double tau_init = 1.0;
  int max_iters = 5000;
  int max_backtracks = 20;
  InitStrategy init_strategy = InitStrategy::SPlusLambdaI;
  std::optional<SymMatrix> custom_init;

  void validate() const;
};

struct TraceRecord {
  int iter = 0;
  double gap = 0.0;  // NaN while the gap is not evaluable (Z not PD)
  double tau = 0.0;
  double frob_change = 0.0;
};

struct SolverDiagnostics {
  // lambda^p / beta^(p-1); NaN when it underflows (it does for realistic p).
  double alpha_bound = 0.0;
  // ||Y0 - Y*||_F + ||Y*||_2, the iterate spectral-norm bound.
  double beta_bound = 0.0;
  // Contraction factor estimated from successive step-size ratios.
  double empirical_contraction = 0.0;
  double condition_number = 0.0;  // kappa(Y*)
};

struct SolverReport {
  Eigen::MatrixXd Y_star;  // covariance estimate (dual solution)
  Eigen::MatrixXd Z_star;  // sparse primal estimate
  // Linear-transform penalty only: precision recovered from the dual.
  std::optional<Eigen::MatrixXd> X_star;
  double gap = 0.0;  // NaN when never evaluable
  int iters = 0;
  int backtracks_total = 0;
  bool converged = false;
  bool infeasibility_suspected = false;
  std::string stop_reason;  // "gap", "prim", "max_iters", "infeasible"
  std::vector<TraceRecord> trace;
  SolverDiagnostics diagnostics;
};

// Per-accepted-iterate view handed to observers. References are only valid
// during the callback.
struct IterateInfo {
  int iter = 0;
  const Eigen::MatrixXd& y_prev;
  const Eigen::MatrixXd& y_curr;
  const Eigen::MatrixXd& x_prev;  // inverse of y_prev (gradient at y_prev)
  double tau = 0.0;
  double logdet_prev = 0.0;
  double logdet_curr = 0.0;
  std::optional<double> gap;
};

// Test/diagnostic hooks. With a tau_schedule the step sizes are taken
// verbatim (no line search, no safe step) and the run ends when the
// schedule is exhausted.
struct SolveHooks {
  std::function<void(const IterateInfo&)> on_accept;
  const std::vector<double>* tau_schedule = nullptr;
};

SymMatrix initial_point(const SymMatrix& s, double lambda, InitStrategy strategy,
                        const std::optional<SymMatrix>& custom = std::nullopt);

// One dual proximal-gradient update:
//   Z+ = soft_threshold(Y^-1 + (Y - S)/tau, lambda/tau)
//   Y+ = clip(Y - S + tau*Y^-1, lambda) + S
// The pair satisfies Y+ = Y + tau*(Y^-1 - Z+) up to roundoff.
std::pair<SymMatrix, SymMatrix> gama_step(const SymMatrix& y, const SymMatrix& y_inv,
                                          const SymMatrix& s, double lambda,
                                          double tau);

// Quadratic-model acceptance test for a candidate step:
//   -logdet(Y+) <= -logdet(Y) - <Y+ - Y, Y^-1> + ||Y+ - Y||_F^2 / (2 tau)
// with 1e-12 absolute slack. The right-hand side is the local quadratic
// model of -logdet around Y (gradient -Y^-1).
bool sufficient_descent_ok(const SymMatrix& y, const SymMatrix& y_plus,
                           const SymMatrix& y_inv, double tau, double logdet_y,
                           double logdet_y_plus);

// Two-point secant step <dY,dY> / <dY, X_prev - X_curr>. Empty when the
// denominator vanishes or the ratio is non-positive or non-finite; the
// caller then reuses its previous step.
std::optional<double> bb_step(const SymMatrix& y_prev, const SymMatrix& y_curr,
                              const SymMatrix& x_prev, const SymMatrix& x_curr);

// -logdet(Y) - p - logdet(Z) + <S,Z> + lambda*||Z||_1. Empty while Z is not
// positive definite (the loop treats that as "not converged yet").
std::optional<double> duality_gap(const SymMatrix& y, const SymMatrix& z,
                                  const SymMatrix& s, double lambda);

// Same gap with an entrywise penalty matrix: <S,Z> + sum t_ij |Z_ij|.
std::optional<double> duality_gap_weighted(const SymMatrix& y, const SymMatrix& z,
                                           const SymMatrix& s, const SymMatrix& t);

// Max-norm violation of the stationarity conditions at X: entries with
// |X_ij| <= zero-tol contribute max(|S_ij - Xinv_ij| - lambda, 0), the rest
// |S_ij - Xinv_ij + lambda*sign(X_ij)|.
double kkt_residual(const SymMatrix& x, const SymMatrix& x_inv, const SymMatrix& s,
                    double lambda);

// Percentage of entries (all p^2, diagonal included) with |m_ij| above the
// sparsity zero-tolerance.
double nnz_percent(const SymMatrix& m);

// Entries at or below this magnitude count as structural zeros for sparsity
// reporting and KKT branch selection.
inline constexpr double kZeroTol = 1e-12;

SolverReport solve(const SymMatrix& s, const SolverConfig& cfg);
SolverReport solve(const SymMatrix& s, const SolverConfig& cfg, const SolveHooks& hooks);

}  // namespace gama

#endif  // GAMA_SOLVER_HPP
