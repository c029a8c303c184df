#include "gama/portfolio.hpp"

#include <cmath>

namespace gama {

void RebalancePlan::validate() const {
  if (n_estim < 1) throw std::invalid_argument("n_estim must be >= 1");
  if (hold_len < 1) throw std::invalid_argument("hold_len must be >= 1");
  if (n_blocks < 1) throw std::invalid_argument("n_blocks must be >= 1");
  if (n_assets < 1) throw std::invalid_argument("n_assets must be >= 1");
  if (!costs.empty() && static_cast<int>(costs.size()) != n_assets) {
    throw std::invalid_argument("costs must have one entry per asset");
  }
  for (double c : costs) {
    if (c < 0.0 || !std::isfinite(c)) {
      throw std::invalid_argument("costs must be finite and >= 0");
    }
  }
}

Eigen::VectorXd min_variance_weights(const SymMatrix& precision) {
  const Eigen::VectorXd row_sums = precision.mat().rowwise().sum();
  const double denom = row_sums.sum();  // 1^T P 1
  if (!(denom > 1e-300)) {
    throw std::domain_error("min_variance_weights: degenerate precision (1'P1 ~ 0)");
  }
  return row_sums / denom;
}

double turnover(const Eigen::VectorXd& w_curr, const Eigen::VectorXd& w_prev,
                const Eigen::MatrixXd& block_returns) {
  if (w_curr.size() != w_prev.size() || block_returns.cols() != w_curr.size()) {
    throw DimensionError("turnover: dimension mismatch");
  }
  Eigen::VectorXd drift = Eigen::VectorXd::Ones(w_prev.size());
  for (Eigen::Index t = 0; t < block_returns.rows(); ++t) {
    drift = drift.cwiseProduct(Eigen::VectorXd::Ones(w_prev.size()) +
                               block_returns.row(t).transpose());
  }
  return (w_curr - drift.cwiseProduct(w_prev)).cwiseAbs().sum();
}

BacktestReport backtest(const Eigen::MatrixXd& returns, const RebalancePlan& plan,
                        const BlockSolver& solver) {
  plan.validate();
  const int p = plan.n_assets;
  const int L = plan.hold_len;
  const int K = plan.n_blocks;
  const Eigen::Index t_needed = plan.n_estim + static_cast<Eigen::Index>(K) * L;
  if (returns.rows() != t_needed || returns.cols() != p) {
    throw std::invalid_argument("backtest: returns must be (n_estim + K*L) x p");
  }
  if (!returns.allFinite()) {
    throw std::invalid_argument("backtest: returns must be finite");
  }

  BacktestReport report;
  report.weights_per_block.reserve(K);
  report.turnover_series.reserve(K);
  report.blocks.reserve(K);

  // Pass 1: per-block estimation and weights.
  for (int j = 1; j <= K; ++j) {
    const Eigen::Index block_start = plan.n_estim + static_cast<Eigen::Index>(j - 1) * L;
    const Eigen::MatrixXd window =
        returns.middleRows(block_start - plan.n_estim, plan.n_estim);
    const SymMatrix s = sample_covariance(window, plan.divisor);

    double lambda = plan.lambda_rule.value;
    if (plan.lambda_rule.kind == LambdaRule::Kind::SpectralFraction) {
      lambda = plan.lambda_rule.value * extreme_eigenvalues(s).second;
    }

    SolverReport sr = solver(s, lambda);
    if (!sr.converged) {
      throw BacktestError(j, "backtest: solver did not converge on block " +
                                 std::to_string(j));
    }
    const SymMatrix precision = SymMatrix::from_matrix(sr.Z_star);
    report.weights_per_block.push_back(min_variance_weights(precision));
    report.blocks.push_back({lambda, sr.iters, sr.gap, nnz_percent(precision)});
  }

  // Pass 2: turnover, transaction costs, wealth and realized moments.
  const Eigen::VectorXd zero_w = Eigen::VectorXd::Zero(p);
  std::vector<double> tc(K, 0.0);
  for (int j = 1; j <= K; ++j) {
    const Eigen::Index block_start = plan.n_estim + static_cast<Eigen::Index>(j - 1) * L;
    const Eigen::MatrixXd block = returns.middleRows(block_start, L);
    const Eigen::VectorXd& w_prev = j == 1 ? zero_w : report.weights_per_block[j - 2];
    const Eigen::VectorXd& w_curr = report.weights_per_block[j - 1];
    report.turnover_series.push_back(turnover(w_curr, w_prev, block));

    if (!plan.costs.empty()) {
      Eigen::VectorXd drift = Eigen::VectorXd::Ones(p);
      for (Eigen::Index t = 0; t < block.rows(); ++t) {
        drift = drift.cwiseProduct(Eigen::VectorXd::Ones(p) + block.row(t).transpose());
      }
      double cost = 0.0;
      for (int i = 0; i < p; ++i) {
        cost += plan.costs[static_cast<size_t>(i)] *
                std::abs(w_curr(i) - drift(i) * w_prev(i));
      }
      tc[static_cast<size_t>(j - 1)] = cost;
    }
  }

  double sum_ret = 0.0;
  double sum_sq = 0.0;
  double short_sum = 0.0;
  report.wealth_curve.reserve(static_cast<size_t>(K) * L + 1);
  report.wealth_curve.push_back(1.0);  // W(n_estim) = 1
  double wealth = 1.0;

  for (int j = 1; j <= K; ++j) {
    const Eigen::Index block_start = plan.n_estim + static_cast<Eigen::Index>(j - 1) * L;
    const Eigen::VectorXd& w = report.weights_per_block[j - 1];
    double block_ret = 0.0;
    for (int t = 0; t < L; ++t) {
      const double r = returns.row(block_start + t).dot(w);
      block_ret += r;
      sum_sq += r * r;
      double growth = 1.0 + r;
      if (t == L - 1) growth -= tc[static_cast<size_t>(j - 1)];
      wealth *= growth;
      report.wealth_curve.push_back(wealth);
    }
    sum_ret += block_ret / L;
    const double gross = w.cwiseAbs().sum();
    if (gross > 0.0) {
      short_sum += w.cwiseMin(0.0).cwiseAbs().sum() / gross;
    }
  }

  report.realized_return = sum_ret / K;
  const double second_moment = sum_sq / (static_cast<double>(K) * L);
  report.realized_risk =
      std::sqrt(std::max(second_moment - report.realized_return * report.realized_return, 0.0));
  report.sharpe = (report.realized_return - plan.risk_free) / report.realized_risk;
  report.short_side_mean = short_sum / K;
  return report;
}

Eigen::MatrixXd prices_to_returns(const Eigen::MatrixXd& prices, int resample_every) {
  if (resample_every < 1) resample_every = 1;
  const Eigen::Index kept = (prices.rows() + resample_every - 1) / resample_every;
  if (kept < 2) throw std::invalid_argument("prices_to_returns: need at least two rows");
  Eigen::MatrixXd sampled(kept, prices.cols());
  for (Eigen::Index i = 0; i < kept; ++i) {
    sampled.row(i) = prices.row(i * resample_every);
  }
  Eigen::MatrixXd out(kept - 1, prices.cols());
  for (Eigen::Index t = 1; t < kept; ++t) {
    out.row(t - 1) =
        sampled.row(t).cwiseQuotient(sampled.row(t - 1)) - Eigen::RowVectorXd::Ones(prices.cols());
  }
  return out;
}

}  // namespace gama
