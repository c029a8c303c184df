#ifndef GAMA_PORTFOLIO_HPP
#define GAMA_PORTFOLIO_HPP

#include "gama/problem_gen.hpp"
#include "gama/solver.hpp"

#include <functional>
#include <vector>

namespace gama {

struct BacktestError : std::runtime_error {
  BacktestError(int block, const std::string& what)
      : std::runtime_error(what), block(block) {}
  int block = 0;  // 1-based block that failed
};

// Penalty selection per rebalancing block: a fixed value, or a fraction of
// the spectral norm of the block's sample covariance (recomputed per block).
struct LambdaRule {
  enum class Kind { Fixed, SpectralFraction };
  Kind kind = Kind::Fixed;
  double value = 0.1;

  static LambdaRule fixed(double v) { return {Kind::Fixed, v}; }
  static LambdaRule spectral_fraction(double f) { return {Kind::SpectralFraction, f}; }
};

struct RebalancePlan {
  int n_estim = 0;    // estimation window length
  int hold_len = 0;   // L, periods each weight vector is held
  int n_blocks = 0;   // K
  int n_assets = 0;   // p
  LambdaRule lambda_rule;
  Divisor divisor = Divisor::N;
  double risk_free = 0.0;          // per period
  std::vector<double> costs;       // eta_i per asset; empty means zero

  void validate() const;
};

struct BlockDiagnostics {
  double lambda = 0.0;
  int iters = 0;
  double gap = 0.0;
  double nnz_pct = 0.0;
};

struct BacktestReport {
  double realized_return = 0.0;  // r_p
  double realized_risk = 0.0;    // sigma_p
  double sharpe = 0.0;           // (r_p - r_f) / sigma_p
  std::vector<double> turnover_series;        // TO(j), K entries
  std::vector<double> wealth_curve;           // W(t), t = n_estim .. n_estim + K*L
  double short_side_mean = 0.0;
  std::vector<Eigen::VectorXd> weights_per_block;
  std::vector<BlockDiagnostics> blocks;
};

// Closed-form minimum-variance weights from a precision matrix:
// w = (P 1) / (1^T P 1). No inversion involved.
Eigen::VectorXd min_variance_weights(const SymMatrix& precision);

// TO(j): sum_i |w_curr_i - (prod_t (1 + r_ti)) * w_prev_i| with the product
// taken over the supplied block rows. Pass a zero w_prev for the first block.
double turnover(const Eigen::VectorXd& w_curr, const Eigen::VectorXd& w_prev,
                const Eigen::MatrixXd& block_returns);

// Precision estimator invoked once per block with that block's sample
// covariance and penalty.
using BlockSolver = std::function<SolverReport(const SymMatrix& s, double lambda)>;

// Runs the rebalancing protocol over a T-by-p simple-returns matrix with
// T == n_estim + K*L: per block, estimate S over the trailing window, solve
// for the precision, hold the weights for L periods; then assemble the
// realized metrics and the unit-initial-wealth curve with transaction costs
// deducted at block boundaries. Throws BacktestError when a block's solve
// does not converge.
BacktestReport backtest(const Eigen::MatrixXd& returns, const RebalancePlan& plan,
                        const BlockSolver& solver);

// p_t / p_{t-1} - 1 rowwise; optionally keep every k-th price row first
// (resample_every <= 1 keeps all rows).
Eigen::MatrixXd prices_to_returns(const Eigen::MatrixXd& prices, int resample_every = 1);

}  // namespace gama

#endif  // GAMA_PORTFOLIO_HPP
