#include "gama/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gama {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Safe-step size when the line search exhausts its budget: 0.9*lambda_min^2
// of the current iterate keeps the step inside the contraction regime.
double safe_step(const SymMatrix& y) {
  const double alpha = extreme_eigenvalues(y).first;
  return 0.9 * alpha * alpha;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return kNaN;
  const size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  if (v.size() % 2 == 1) return v[mid];
  const double hi = v[mid];
  std::nth_element(v.begin(), v.begin() + mid - 1, v.end());
  return 0.5 * (v[mid - 1] + hi);
}

// Contraction factor estimated from successive step-size ratios over the
// tail of the trace; for a linearly convergent run both converge to the
// same limit.
double estimate_contraction(const std::vector<TraceRecord>& trace) {
  std::vector<double> ratios;
  const size_t n = trace.size();
  const size_t start = n > 21 ? n - 21 : 0;
  for (size_t i = start; i + 1 < n; ++i) {
    if (trace[i].frob_change > 0.0) {
      const double r = trace[i + 1].frob_change / trace[i].frob_change;
      if (std::isfinite(r)) ratios.push_back(r);
    }
  }
  return median_of(std::move(ratios));
}

double lemma_alpha_bound(double lambda, double beta, Eigen::Index p) {
  if (lambda <= 0.0 || beta <= 0.0) return kNaN;
  const double log_alpha =
      static_cast<double>(p) * std::log(lambda) - static_cast<double>(p - 1) * std::log(beta);
  if (log_alpha < std::log(std::numeric_limits<double>::min()) + 2.0) return kNaN;
  return std::exp(log_alpha);
}

}  // namespace

void SolverConfig::validate() const {
  if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
  if (!(eps_opt > 0.0)) throw std::invalid_argument("eps_opt must be > 0");
  if (eps_prim < 0.0) throw std::invalid_argument("eps_prim must be >= 0");
  if (!(backtrack_c > 0.0 && backtrack_c < 1.0)) {
    throw std::invalid_argument("backtrack_c must be in (0,1)");
  }
  if (!(tau_init > 0.0)) throw std::invalid_argument("tau_init must be > 0");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (max_backtracks < 1) throw std::invalid_argument("max_backtracks must be >= 1");
  if (init_strategy == InitStrategy::Custom && !custom_init.has_value()) {
    throw std::invalid_argument("Custom init requires a matrix");
  }
}

SymMatrix initial_point(const SymMatrix& s, double lambda, InitStrategy strategy,
                        const std::optional<SymMatrix>& custom) {
  if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
  SymMatrix y0;
  switch (strategy) {
    case InitStrategy::SPlusLambdaI:
      y0 = s.add_scaled_identity(lambda);
      break;
    case InitStrategy::DiagSPlusLambdaI:
      y0 = SymMatrix::diagonal(s.diag()).add_scaled_identity(lambda);
      break;
    case InitStrategy::Custom:
      if (!custom.has_value()) {
        throw std::invalid_argument("Custom init requires a matrix");
      }
      if (custom->dim() != s.dim()) {
        throw DimensionError("custom initial point dimension mismatch");
      }
      y0 = *custom;
      break;
  }
  if (!cholesky(y0).has_value()) {
    throw NotPositiveDefiniteError("initial point is not positive definite");
  }
  return y0;
}

std::pair<SymMatrix, SymMatrix> gama_step(const SymMatrix& y, const SymMatrix& y_inv,
                                          const SymMatrix& s, double lambda,
                                          double tau) {
  const Eigen::MatrixXd grad_arg = y_inv.mat() + (y.mat() - s.mat()) / tau;
  SymMatrix z_plus = soft_threshold(SymMatrix::from_matrix(grad_arg), lambda / tau);
  const Eigen::MatrixXd clip_arg = y.mat() - s.mat() + tau * y_inv.mat();
  SymMatrix y_plus = clip(SymMatrix::from_matrix(clip_arg), lambda) + s;
  return {std::move(z_plus), std::move(y_plus)};
}

bool sufficient_descent_ok(const SymMatrix& y, const SymMatrix& y_plus,
                           const SymMatrix& y_inv, double tau, double logdet_y,
                           double logdet_y_plus) {
  const SymMatrix d = y_plus - y;
  const double fn = frob_norm(d);
  const double rhs = -logdet_y - inner(d, y_inv) + fn * fn / (2.0 * tau);
  return -logdet_y_plus <= rhs + 1e-12;
}

std::optional<double> bb_step(const SymMatrix& y_prev, const SymMatrix& y_curr,
                              const SymMatrix& x_prev, const SymMatrix& x_curr) {
  const SymMatrix d = y_curr - y_prev;
  const double num = inner(d, d);
  const double den = inner(d, x_prev - x_curr);
  if (!(den > 1e-300)) return std::nullopt;
  const double ratio = num / den;
  if (!(ratio > 0.0) || !std::isfinite(ratio)) return std::nullopt;
  return ratio;
}

std::optional<double> duality_gap(const SymMatrix& y, const SymMatrix& z,
                                  const SymMatrix& s, double lambda) {
  auto fz = cholesky(z);
  if (!fz) return std::nullopt;
  auto fy = cholesky(y);
  if (!fy) throw NotPositiveDefiniteError("duality_gap: Y must be positive definite");
  const double p = static_cast<double>(y.dim());
  return -log_det(*fy) - p - log_det(*fz) + inner(s, z) + lambda * abs_sum(z);
}

std::optional<double> duality_gap_weighted(const SymMatrix& y, const SymMatrix& z,
                                           const SymMatrix& s, const SymMatrix& t) {
  auto fz = cholesky(z);
  if (!fz) return std::nullopt;
  auto fy = cholesky(y);
  if (!fy) throw NotPositiveDefiniteError("duality_gap: Y must be positive definite");
  const double p = static_cast<double>(y.dim());
  const double weighted_l1 = t.mat().cwiseProduct(z.mat().cwiseAbs()).sum();
  return -log_det(*fy) - p - log_det(*fz) + inner(s, z) + weighted_l1;
}

double kkt_residual(const SymMatrix& x, const SymMatrix& x_inv, const SymMatrix& s,
                    double lambda) {
  const Eigen::Index p = x.dim();
  double worst = 0.0;
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < p; ++i) {
      const double g = s(i, j) - x_inv(i, j);
      double v;
      if (std::abs(x(i, j)) <= kZeroTol) {
        v = std::max(std::abs(g) - lambda, 0.0);
      } else {
        v = std::abs(g + lambda * (x(i, j) > 0.0 ? 1.0 : -1.0));
      }
      worst = std::max(worst, v);
    }
  }
  return worst;
}

double nnz_percent(const SymMatrix& m) {
  const Eigen::Index p = m.dim();
  if (p == 0) return 0.0;
  const auto nnz = (m.mat().cwiseAbs().array() > kZeroTol).count();
  return 100.0 * static_cast<double>(nnz) / static_cast<double>(p * p);
}

SolverReport solve(const SymMatrix& s, const SolverConfig& cfg) {
  return solve(s, cfg, SolveHooks{});
}

SolverReport solve(const SymMatrix& s, const SolverConfig& cfg, const SolveHooks& hooks) {
  cfg.validate();
  const Eigen::Index p = s.dim();
  const double lambda = cfg.lambda;

  SymMatrix y = initial_point(s, lambda, cfg.init_strategy, cfg.custom_init);
  const SymMatrix y0 = y;
  auto f = cholesky(y);
  if (!f) throw NotPositiveDefiniteError("initial point is not positive definite");
  SymMatrix x = inverse(*f);
  double logdet_y = log_det(*f);

  SymMatrix z = SymMatrix::zero(p);
  SolverReport report;
  report.trace.reserve(64);
  std::optional<double> gap;
  double tau_prop = cfg.tau_init;
  bool stalled = false;

  int k = 0;
  for (; k < cfg.max_iters; ++k) {
    if (hooks.tau_schedule && static_cast<size_t>(k) >= hooks.tau_schedule->size()) {
      report.stop_reason = "schedule";
      break;
    }

    double tau = 0.0;
    std::optional<CholeskyFactor> f_plus;
    SymMatrix z_plus, y_plus;

    if (hooks.tau_schedule) {
      tau = (*hooks.tau_schedule)[static_cast<size_t>(k)];
      auto step = gama_step(y, x, s, lambda, tau);
      z_plus = std::move(step.first);
      y_plus = std::move(step.second);
      f_plus = cholesky(y_plus);
      if (!f_plus) {
        throw NotPositiveDefiniteError("forced step produced a non-PD iterate");
      }
    } else {
      tau = tau_prop;
      bool accepted = false;
      for (int j = 0; j < cfg.max_backtracks; ++j) {
        auto step = gama_step(y, x, s, lambda, tau);
        z_plus = std::move(step.first);
        y_plus = std::move(step.second);
        f_plus = cholesky(y_plus);
        if (f_plus &&
            sufficient_descent_ok(y, y_plus, x, tau, logdet_y, log_det(*f_plus))) {
          accepted = true;
          break;
        }
        ++report.backtracks_total;
        tau *= cfg.backtrack_c;
      }
      if (!accepted) {
        // Line search exhausted; take the safe step, halving only as far as
        // needed to stay positive definite.
        tau = safe_step(y);
        f_plus.reset();
        for (int j = 0; j < 60; ++j) {
          auto step = gama_step(y, x, s, lambda, tau);
          z_plus = std::move(step.first);
          y_plus = std::move(step.second);
          f_plus = cholesky(y_plus);
          if (f_plus) break;
          ++report.backtracks_total;
          tau *= 0.5;
        }
        if (!f_plus) {
          stalled = true;
          break;
        }
      }
    }

    const double frob_change = frob_norm(y_plus - y);
    const double logdet_prev = logdet_y;
    const SymMatrix y_prev = std::move(y);
    const SymMatrix x_prev = std::move(x);
    y = std::move(y_plus);
    z = std::move(z_plus);
    x = inverse(*f_plus);
    logdet_y = log_det(*f_plus);

    gap = duality_gap(y, z, s, lambda);
    report.trace.push_back({k, gap.value_or(kNaN), tau, frob_change});

    if (hooks.on_accept) {
      hooks.on_accept(IterateInfo{k, y_prev.mat(), y.mat(), x_prev.mat(), tau,
                                  logdet_prev, logdet_y, gap});
    }

    if (gap && *gap <= cfg.eps_opt) {
      report.converged = true;
      report.stop_reason = "gap";
      ++k;
      break;
    }
    const double y_prev_norm = frob_norm(y_prev);
    if (cfg.eps_prim > 0.0 && y_prev_norm > 0.0 &&
        frob_change / y_prev_norm <= cfg.eps_prim) {
      report.stop_reason = "prim";
      ++k;
      break;
    }

    tau_prop = bb_step(y_prev, y, x_prev, x).value_or(tau);
  }

  report.iters = std::min(k, cfg.max_iters);
  if (report.stop_reason.empty()) {
    report.stop_reason = stalled ? "stalled" : "max_iters";
  }
  report.Y_star = y.mat();
  report.Z_star = z.mat();
  report.gap = gap.value_or(kNaN);

  const auto [y_min, y_max] = extreme_eigenvalues(y);
  report.diagnostics.beta_bound = frob_norm(y0 - y) + y_max;
  report.diagnostics.alpha_bound = lemma_alpha_bound(lambda, report.diagnostics.beta_bound, p);
  report.diagnostics.condition_number = y_max / y_min;
  report.diagnostics.empirical_contraction = estimate_contraction(report.trace);
  return report;
}

}  // namespace gama
