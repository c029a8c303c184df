#include "gama/generalized.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace gama {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double safe_step_for(const SymMatrix& y) {
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

Eigen::MatrixXd clip_dense(const Eigen::MatrixXd& m, double t) {
  return m.unaryExpr([t](double x) { return std::clamp(x, -t, t); });
}

Eigen::MatrixXd shrink_dense(const Eigen::MatrixXd& m, double t) {
  return m.unaryExpr([t](double x) {
    if (x > t) return x - t;
    if (x < -t) return x + t;
    return 0.0;
  });
}

// S + sym(A Y B^T): the matrix whose inverse is the current primal estimate.
Eigen::MatrixXd inner_matrix(const Eigen::MatrixXd& y, const SymMatrix& s,
                             const LinearMapPair& maps) {
  const Eigen::MatrixXd ayb = maps.a * y * maps.b.transpose();
  return s.mat() + (ayb + ayb.transpose()) / 2.0;
}

}  // namespace

void BoundSpec::validate() const {
  if (lower.dim() != upper.dim()) {
    throw DimensionError("bound matrices must have equal dimension");
  }
  if (((upper.mat() - lower.mat()).array() < 0.0).any()) {
    throw std::invalid_argument("bounds require l <= u elementwise");
  }
}

void LinearMapPair::validate(Eigen::Index p) const {
  if (a.rows() != p || b.rows() != p) {
    throw DimensionError("maps must have p rows");
  }
  if (a.cols() != b.cols() || a.cols() < 1) {
    throw DimensionError("maps must share a positive column count");
  }
  if (!a.allFinite() || !b.allFinite()) {
    throw std::invalid_argument("maps must be finite");
  }
}

std::pair<SymMatrix, SymMatrix> translate_bounds(const BoundSpec& bounds) {
  bounds.validate();
  SymMatrix mid = SymMatrix::from_matrix((bounds.lower.mat() + bounds.upper.mat()) / 2.0);
  SymMatrix half = SymMatrix::from_matrix((bounds.upper.mat() - bounds.lower.mat()) / 2.0);
  return {std::move(mid), std::move(half)};
}

SolverReport solve_box(const BoundSpec& bounds, const SolverConfig& cfg) {
  return solve_box(bounds, cfg, SolveHooks{});
}

SolverReport solve_box(const BoundSpec& bounds, const SolverConfig& cfg,
                       const SolveHooks& hooks) {
  cfg.validate();
  bounds.validate();
  const auto [s_bar, lam_bar] = translate_bounds(bounds);
  const Eigen::Index p = s_bar.dim();

  SolverReport report;
  report.trace.reserve(64);

  // The box may not contain a PD point; probe S_bar shifted by a growing
  // multiple of the identity before giving up.
  double delta = std::max(s_bar.trace() / static_cast<double>(p), 1.0) * 1e-2;
  SymMatrix y;
  std::optional<CholeskyFactor> f;
  for (int attempt = 0; attempt < 8; ++attempt) {
    y = box_project(s_bar.add_scaled_identity(delta), bounds.lower, bounds.upper);
    f = cholesky(y);
    if (f) break;
    delta *= 2.0;
  }
  if (!f) {
    report.infeasibility_suspected = true;
    report.stop_reason = "infeasible";
    report.Y_star = y.mat();
    report.Z_star = Eigen::MatrixXd::Zero(p, p);
    report.gap = kNaN;
    return report;
  }

  const SymMatrix y0 = y;
  SymMatrix x = inverse(*f);
  double logdet_y = log_det(*f);
  SymMatrix z = SymMatrix::zero(p);
  std::optional<double> gap;
  double tau_prop = cfg.tau_init;
  bool stalled = false;
  int exhausted_streak = 0;

  auto box_step = [&](double tau) -> std::pair<SymMatrix, SymMatrix> {
    SymMatrix z_plus = soft_threshold(
        SymMatrix::from_matrix(x.mat() + (y.mat() - s_bar.mat()) / tau),
        lam_bar.scaled(1.0 / tau));
    SymMatrix y_plus = box_project(SymMatrix::from_matrix(y.mat() + tau * x.mat()),
                                   bounds.lower, bounds.upper);
    return {std::move(z_plus), std::move(y_plus)};
  };

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
      auto step = box_step(tau);
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
        auto step = box_step(tau);
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
        ++exhausted_streak;
        tau = safe_step_for(y);
        f_plus.reset();
        for (int j = 0; j < 60; ++j) {
          auto step = box_step(tau);
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
      } else {
        exhausted_streak = 0;
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

    gap = duality_gap_weighted(y, z, s_bar, lam_bar);
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
    report.stop_reason = stalled ? "infeasible" : "max_iters";
  }
  if (stalled || (report.stop_reason == "max_iters" && exhausted_streak >= 5)) {
    report.infeasibility_suspected = true;
    if (stalled) report.stop_reason = "infeasible";
  }
  report.Y_star = y.mat();
  report.Z_star = z.mat();
  report.gap = gap.value_or(kNaN);

  const auto [y_min, y_max] = extreme_eigenvalues(y);
  report.diagnostics.beta_bound = frob_norm(y0 - y) + y_max;
  report.diagnostics.alpha_bound = kNaN;  // the Lemma constant needs a scalar penalty
  report.diagnostics.condition_number = y_max / y_min;
  report.diagnostics.empirical_contraction = estimate_contraction(report.trace);
  return report;
}

std::optional<Eigen::MatrixXd> linear_penalty_step(const Eigen::MatrixXd& y,
                                                   const SymMatrix& s,
                                                   const LinearMapPair& maps,
                                                   double lambda, double tau) {
  maps.validate(s.dim());
  if (y.rows() != maps.a.cols() || y.cols() != maps.a.cols()) {
    throw DimensionError("dual variable must be q-by-q");
  }
  auto f = cholesky(SymMatrix::from_matrix(inner_matrix(y, s, maps)));
  if (!f) return std::nullopt;
  const SymMatrix x_plus = inverse(*f);
  return clip_dense(y + tau * maps.a.transpose() * x_plus.mat() * maps.b, lambda);
}

SolverReport solve_linear_penalty(const SymMatrix& s, const LinearMapPair& maps,
                                  double lambda, const SolverConfig& cfg) {
  return solve_linear_penalty(s, maps, lambda, cfg, SolveHooks{});
}

SolverReport solve_linear_penalty(const SymMatrix& s, const LinearMapPair& maps,
                                  double lambda, const SolverConfig& cfg,
                                  const SolveHooks& hooks) {
  cfg.validate();
  maps.validate(s.dim());
  if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
  const Eigen::Index p = s.dim();
  const Eigen::Index q = maps.a.cols();

  // Y0 = 0 is always clip-feasible and makes the inner matrix plain S.
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(q, q);
  auto f = cholesky(SymMatrix::from_matrix(inner_matrix(y, s, maps)));
  if (!f) {
    throw NotPositiveDefiniteError("S must be positive definite to start from Y = 0");
  }
  SymMatrix x = inverse(*f);
  double logdet_m = log_det(*f);

  // Lipschitz scale of the composed gradient: sigma_max(A)^2 sigma_max(B)^2
  // enters the safe-step denominator.
  const double sig_a = maps.a.jacobiSvd().singularValues()(0);
  const double sig_b = maps.b.jacobiSvd().singularValues()(0);
  const double map_scale = std::max(sig_a * sig_a * sig_b * sig_b, 1e-300);

  SolverReport report;
  report.trace.reserve(64);
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(q, q);
  double gap = kNaN;
  double tau_prop = cfg.tau_init;
  bool stalled = false;

  Eigen::MatrixXd grad = maps.a.transpose() * x.mat() * maps.b;  // ascent direction

  auto primal_gap = [&](const SymMatrix& x_cur, const Eigen::MatrixXd& g_cur) {
    // P(X) - D(Y) with X = M(Y)^-1 collapses to <S,X> + lambda*||A^T X B||_1 - p.
    return inner(s, x_cur) + lambda * g_cur.cwiseAbs().sum() - static_cast<double>(p);
  };

  int k = 0;
  for (; k < cfg.max_iters; ++k) {
    if (hooks.tau_schedule && static_cast<size_t>(k) >= hooks.tau_schedule->size()) {
      report.stop_reason = "schedule";
      break;
    }

    double tau = 0.0;
    std::optional<CholeskyFactor> f_plus;
    Eigen::MatrixXd y_plus, z_plus;

    auto try_step = [&](double t) -> bool {
      z_plus = shrink_dense(grad + y / t, lambda / t);
      y_plus = clip_dense(y + t * grad, lambda);
      f_plus = cholesky(SymMatrix::from_matrix(inner_matrix(y_plus, s, maps)));
      return f_plus.has_value();
    };

    if (hooks.tau_schedule) {
      tau = (*hooks.tau_schedule)[static_cast<size_t>(k)];
      if (!try_step(tau)) {
        throw NotPositiveDefiniteError("forced step produced a non-PD inner matrix");
      }
    } else {
      tau = tau_prop;
      bool accepted = false;
      for (int j = 0; j < cfg.max_backtracks; ++j) {
        if (try_step(tau)) {
          const double logdet_plus = log_det(*f_plus);
          const Eigen::MatrixXd d = y_plus - y;
          const double fn = d.norm();
          const double rhs = -logdet_m - d.cwiseProduct(grad).sum() + fn * fn / (2.0 * tau);
          if (-logdet_plus <= rhs + 1e-12) {
            accepted = true;
            break;
          }
        }
        ++report.backtracks_total;
        tau *= cfg.backtrack_c;
      }
      if (!accepted) {
        const double alpha = extreme_eigenvalues(
                                 SymMatrix::from_matrix(inner_matrix(y, s, maps)))
                                 .first;
        tau = 0.9 * alpha * alpha / map_scale;
        f_plus.reset();
        for (int j = 0; j < 60; ++j) {
          if (try_step(tau)) break;
          ++report.backtracks_total;
          tau *= 0.5;
        }
        if (!f_plus) {
          stalled = true;
          break;
        }
      }
    }

    const double frob_change = (y_plus - y).norm();
    const double logdet_prev = logdet_m;
    const Eigen::MatrixXd y_prev = std::move(y);
    const Eigen::MatrixXd x_prev_mat = x.mat();
    y = std::move(y_plus);
    z = std::move(z_plus);
    x = inverse(*f_plus);
    logdet_m = log_det(*f_plus);
    const Eigen::MatrixXd grad_prev = std::move(grad);
    grad = maps.a.transpose() * x.mat() * maps.b;

    gap = primal_gap(x, grad);
    report.trace.push_back({k, gap, tau, frob_change});

    if (hooks.on_accept) {
      hooks.on_accept(IterateInfo{k, y_prev, y, x_prev_mat, tau, logdet_prev,
                                  logdet_m, gap});
    }

    if (gap <= cfg.eps_opt) {
      report.converged = true;
      report.stop_reason = "gap";
      ++k;
      break;
    }
    const double y_prev_norm = y_prev.norm();
    if (cfg.eps_prim > 0.0 && y_prev_norm > 0.0 &&
        frob_change / y_prev_norm <= cfg.eps_prim) {
      report.stop_reason = "prim";
      ++k;
      break;
    }

    // BB secant on the dual: curvature from the gradient difference.
    const Eigen::MatrixXd dy = y - y_prev;
    const double num = dy.squaredNorm();
    const double den = dy.cwiseProduct(grad_prev - grad).sum();
    if (den > 1e-300) {
      const double ratio = num / den;
      if (ratio > 0.0 && std::isfinite(ratio)) tau_prop = ratio;
      else tau_prop = tau;
    } else {
      tau_prop = tau;
    }
  }

  report.iters = std::min(k, cfg.max_iters);
  if (report.stop_reason.empty()) {
    report.stop_reason = stalled ? "stalled" : "max_iters";
  }
  report.Y_star = y;
  report.Z_star = z;
  report.X_star = x.mat();
  report.gap = gap;

  const SymMatrix m_final = SymMatrix::from_matrix(inner_matrix(y, s, maps));
  const auto [m_min, m_max] = extreme_eigenvalues(m_final);
  report.diagnostics.beta_bound = kNaN;
  report.diagnostics.alpha_bound = kNaN;
  report.diagnostics.condition_number = m_max / m_min;
  report.diagnostics.empirical_contraction = estimate_contraction(report.trace);
  return report;
}

}  // namespace gama
