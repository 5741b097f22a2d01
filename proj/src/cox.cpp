#include "survkit/cox.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "survkit/detail/time_groups.hpp"
#include "survkit/errors.hpp"

namespace survkit {

using detail::build_time_groups;
using detail::TimeGroups;

namespace {

Eigen::VectorXd centered_predictors(const Eigen::MatrixXd& X, const Eigen::VectorXd& beta,
                                    double* center_out) {
  Eigen::VectorXd eta = X * beta;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    if (!std::isfinite(eta[i])) {
      throw Error(ErrorCode::OverflowGuard, "linear predictor overflow at subject " + std::to_string(i));
    }
  }
  const double m = eta.size() > 0 ? eta.maxCoeff() : 0.0;
  eta.array() -= m;
  *center_out = m;
  return eta;
}

struct Standardization {
  Eigen::VectorXd means;
  Eigen::VectorXd scales;
  Eigen::MatrixXd X;  // standardized copy
};

Standardization standardize(const Eigen::MatrixXd& X, bool enabled) {
  Standardization s;
  const Eigen::Index n = X.rows(), p = X.cols();
  s.means = Eigen::VectorXd::Zero(p);
  s.scales = Eigen::VectorXd::Ones(p);
  if (enabled) {
    s.means = X.colwise().mean();
    for (Eigen::Index j = 0; j < p; ++j) {
      const double var = (X.col(j).array() - s.means[j]).square().sum() / static_cast<double>(n);
      const double sd = std::sqrt(var);
      s.scales[j] = sd > 0.0 ? sd : 1.0;
    }
  }
  s.X = (X.rowwise() - s.means.transpose()).array().rowwise() / s.scales.transpose().array();
  return s;
}

void finish_model(CoxModel& model, const SurvivalDataset& d, const Standardization& std_info,
                  const Eigen::VectorXd& beta_std) {
  model.feature_means = std_info.means;
  model.feature_scales = std_info.scales;
  model.beta = beta_std.array() / std_info.scales.array();
  const RiskVector train_risks = cox_risk(model, d.features);
  model.baseline = breslow_baseline(d, train_risks);
}

}  // namespace

std::pair<double, Eigen::VectorXd> cox_partial_loglik(const SurvivalDataset& d,
                                                      const Eigen::VectorXd& beta) {
  validate_dataset(d);
  if (beta.size() != d.p()) {
    throw Error(ErrorCode::DimensionMismatch, "beta length vs feature count");
  }
  double center = 0.0;
  const Eigen::VectorXd eta = centered_predictors(d.features, beta, &center);
  const TimeGroups g = build_time_groups(d.times);
  const Eigen::Index p = d.p();

  double ll = 0.0;
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(p);
  double sw = 0.0;
  Eigen::VectorXd swx = Eigen::VectorXd::Zero(p);
  for (std::size_t gi = g.group_begin.size(); gi-- > 0;) {
    for (std::size_t k = g.group_begin[gi]; k < g.group_end[gi]; ++k) {
      const auto idx = static_cast<Eigen::Index>(g.order[k]);
      const double w = std::exp(eta[idx]);
      sw += w;
      swx += w * d.features.row(idx).transpose();
    }
    const double log_sw = std::log(sw);
    for (std::size_t k = g.group_begin[gi]; k < g.group_end[gi]; ++k) {
      const auto idx = static_cast<Eigen::Index>(g.order[k]);
      if (!d.events[g.order[k]]) continue;
      ll += eta[idx] - log_sw;
      grad += d.features.row(idx).transpose() - swx / sw;
    }
  }
  return {ll, grad};
}

CoxNewtonQuantities cox_newton_quantities(const SurvivalDataset& d, const Eigen::VectorXd& beta) {
  validate_dataset(d);
  if (beta.size() != d.p()) {
    throw Error(ErrorCode::DimensionMismatch, "beta length vs feature count");
  }
  double center = 0.0;
  const Eigen::VectorXd eta = centered_predictors(d.features, beta, &center);
  const TimeGroups g = build_time_groups(d.times);
  const Eigen::Index p = d.p();

  CoxNewtonQuantities q;
  q.loglik = 0.0;
  q.gradient = Eigen::VectorXd::Zero(p);
  q.information = Eigen::MatrixXd::Zero(p, p);

  double sw = 0.0;
  Eigen::VectorXd swx = Eigen::VectorXd::Zero(p);
  Eigen::MatrixXd swxx = Eigen::MatrixXd::Zero(p, p);
  for (std::size_t gi = g.group_begin.size(); gi-- > 0;) {
    for (std::size_t k = g.group_begin[gi]; k < g.group_end[gi]; ++k) {
      const auto idx = static_cast<Eigen::Index>(g.order[k]);
      const double w = std::exp(eta[idx]);
      const Eigen::VectorXd x = d.features.row(idx).transpose();
      sw += w;
      swx += w * x;
      swxx.selfadjointView<Eigen::Lower>().rankUpdate(x, w);
    }
    const double log_sw = std::log(sw);
    std::size_t d_here = 0;
    for (std::size_t k = g.group_begin[gi]; k < g.group_end[gi]; ++k) {
      const auto idx = static_cast<Eigen::Index>(g.order[k]);
      if (!d.events[g.order[k]]) continue;
      ++d_here;
      q.loglik += eta[idx] - log_sw;
      q.gradient += d.features.row(idx).transpose() - swx / sw;
    }
    if (d_here > 0) {
      const Eigen::VectorXd mu = swx / sw;
      Eigen::MatrixXd full = swxx.selfadjointView<Eigen::Lower>();
      q.information += static_cast<double>(d_here) * (full / sw - mu * mu.transpose());
    }
  }
  return q;
}

Eigen::VectorXd cox_score_gradient(const std::vector<double>& times,
                                   const std::vector<uint8_t>& events,
                                   const Eigen::VectorXd& scores) {
  const std::size_t n = times.size();
  if (events.size() != n || static_cast<std::size_t>(scores.size()) != n) {
    throw Error(ErrorCode::LengthMismatch, "times/events/scores");
  }
  Eigen::VectorXd eta = scores;
  const double m = n > 0 ? eta.maxCoeff() : 0.0;
  eta.array() -= m;
  const TimeGroups g = build_time_groups(times);

  // risk-set sums per group, accumulated from the latest time backwards
  const std::size_t n_groups = g.group_begin.size();
  std::vector<double> group_inv(n_groups, 0.0);  // d_g / S_w(t_g)
  double sw = 0.0;
  for (std::size_t gi = n_groups; gi-- > 0;) {
    std::size_t d_here = 0;
    for (std::size_t k = g.group_begin[gi]; k < g.group_end[gi]; ++k) {
      sw += std::exp(eta[static_cast<Eigen::Index>(g.order[k])]);
      d_here += (events[g.order[k]] != 0);
    }
    if (d_here > 0) group_inv[gi] = static_cast<double>(d_here) / sw;
  }
  // prefix sums over groups in ascending time order: A(t) = sum_{t_g <= t} d_g / S_w(t_g)
  std::vector<double> prefix_inv(n_groups, 0.0);
  double acc = 0.0;
  for (std::size_t gi = 0; gi < n_groups; ++gi) {
    acc += group_inv[gi];
    prefix_inv[gi] = acc;
  }

  Eigen::VectorXd grad(static_cast<Eigen::Index>(n));
  for (std::size_t gi = 0; gi < n_groups; ++gi) {
    for (std::size_t k = g.group_begin[gi]; k < g.group_end[gi]; ++k) {
      const std::size_t i = g.order[k];
      grad[static_cast<Eigen::Index>(i)] =
          (events[i] ? 1.0 : 0.0) - std::exp(eta[static_cast<Eigen::Index>(i)]) * prefix_inv[gi];
    }
  }
  return grad;
}

CoxModel fit_cox(const SurvivalDataset& d, const CoxFitOptions& opts) {
  validate_dataset(d);
  if (d.n_events() == 0) {
    throw Error(ErrorCode::NoEventsObserved, "cannot fit a Cox model without events");
  }
  const Standardization std_info = standardize(d.features, opts.standardize);
  SurvivalDataset ds{std_info.X, d.times, d.events};
  const Eigen::Index p = d.p();

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  CoxModel model;
  model.converged = false;
  model.n_iter = 0;

  auto penalized = [&](const CoxNewtonQuantities& q, const Eigen::VectorXd& b) {
    return q.loglik - 0.5 * opts.ridge_eps * b.squaredNorm();
  };

  CoxNewtonQuantities q = cox_newton_quantities(ds, beta);
  double obj = penalized(q, beta);
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    Eigen::VectorXd grad = q.gradient - opts.ridge_eps * beta;
    if (grad.cwiseAbs().maxCoeff() < opts.tol) {
      model.converged = true;
      break;
    }
    Eigen::MatrixXd info = q.information;
    info.diagonal().array() += opts.ridge_eps;
    Eigen::LLT<Eigen::MatrixXd> llt(info);
    if (llt.info() != Eigen::Success) {
      throw Error(ErrorCode::SingularHessian, "information matrix not positive definite; raise ridge_eps");
    }
    Eigen::VectorXd step = llt.solve(grad);
    if (!step.allFinite()) {
      throw Error(ErrorCode::SingularHessian, "Newton step not finite");
    }

    // step halving keeps the penalized log-likelihood non-decreasing
    double scale = 1.0;
    Eigen::VectorXd beta_next;
    CoxNewtonQuantities q_next;
    double obj_next = 0.0;
    for (int h = 0; h <= 20; ++h) {
      beta_next = beta + scale * step;
      q_next = cox_newton_quantities(ds, beta_next);
      obj_next = penalized(q_next, beta_next);
      if (obj_next >= obj || h == 20) break;
      scale *= 0.5;
    }
    beta = beta_next;
    q = q_next;
    obj = obj_next;
    model.n_iter = iter + 1;
  }
  if (!model.converged) {
    Eigen::VectorXd grad = q.gradient - opts.ridge_eps * beta;
    model.converged = grad.cwiseAbs().maxCoeff() < opts.tol;
  }

  finish_model(model, d, std_info, beta);
  return model;
}

RiskVector cox_risk(const CoxModel& model, const Eigen::MatrixXd& X) {
  if (X.cols() != model.beta.size()) {
    throw Error(ErrorCode::DimensionMismatch, "feature count vs trained model");
  }
  const double offset = model.feature_means.dot(model.beta);
  RiskVector r = X * model.beta;
  r.array() -= offset;
  return r;
}

std::pair<SurvivalPredictionMatrix, RiskVector> cox_predict(const CoxModel& model,
                                                            const Eigen::MatrixXd& X,
                                                            const TimeGrid& grid) {
  RiskVector risks = cox_risk(model, X);
  SurvivalPredictionMatrix pred;
  pred.grid = grid;
  const Eigen::Index n = X.rows();
  const auto t_count = static_cast<Eigen::Index>(grid.size());
  Eigen::VectorXd h0(t_count);
  for (Eigen::Index k = 0; k < t_count; ++k) {
    h0[k] = model.baseline(grid[static_cast<std::size_t>(k)]);
  }
  pred.surv.resize(n, t_count);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double w = std::exp(risks[i]);
    for (Eigen::Index k = 0; k < t_count; ++k) {
      pred.surv(i, k) = h0[k] == 0.0 ? 1.0 : std::exp(-h0[k] * w);
    }
  }
  return {std::move(pred), std::move(risks)};
}

}  // namespace survkit
