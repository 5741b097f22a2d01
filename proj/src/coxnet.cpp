#include <algorithm>
#include <cmath>
#include <vector>

#include "survkit/cox.hpp"
#include "survkit/detail/time_groups.hpp"
#include "survkit/errors.hpp"

namespace survkit {

namespace {

struct Standardization {
  Eigen::VectorXd means;
  Eigen::VectorXd scales;
  Eigen::MatrixXd X;
};

Standardization standardize_always(const Eigen::MatrixXd& X) {
  Standardization s;
  const Eigen::Index n = X.rows(), p = X.cols();
  s.means = X.colwise().mean();
  s.scales = Eigen::VectorXd::Ones(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double var = (X.col(j).array() - s.means[j]).square().sum() / static_cast<double>(n);
    const double sd = std::sqrt(var);
    s.scales[j] = sd > 0.0 ? sd : 1.0;
  }
  s.X = (X.rowwise() - s.means.transpose()).array().rowwise() / s.scales.transpose().array();
  return s;
}

// diagonal of the negative Hessian of the partial log-likelihood w.r.t. the
// per-subject linear predictors
struct ScoreCurvature {
  Eigen::VectorXd gradient;  // d loglik / d eta_i
  Eigen::VectorXd weight;    // -d^2 loglik / d eta_i^2 (diagonal only)
};

ScoreCurvature score_curvature(const std::vector<double>& times, const std::vector<uint8_t>& events,
                               const Eigen::VectorXd& eta_raw) {
  const std::size_t n = times.size();
  Eigen::VectorXd eta = eta_raw;
  const double m = eta.maxCoeff();
  eta.array() -= m;

  const detail::TimeGroups g = detail::build_time_groups(times);
  const std::vector<std::size_t>& order = g.order;
  const std::vector<std::size_t>& gb = g.group_begin;
  const std::vector<std::size_t>& ge = g.group_end;
  const std::size_t n_groups = gb.size();
  std::vector<double> inv1(n_groups, 0.0), inv2(n_groups, 0.0);
  double sw = 0.0;
  for (std::size_t gi = n_groups; gi-- > 0;) {
    std::size_t d_here = 0;
    for (std::size_t k = gb[gi]; k < ge[gi]; ++k) {
      sw += std::exp(eta[static_cast<Eigen::Index>(order[k])]);
      d_here += (events[order[k]] != 0);
    }
    if (d_here > 0) {
      inv1[gi] = static_cast<double>(d_here) / sw;
      inv2[gi] = static_cast<double>(d_here) / (sw * sw);
    }
  }
  double a = 0.0, b = 0.0;
  std::vector<double> pre1(n_groups), pre2(n_groups);
  for (std::size_t gi = 0; gi < n_groups; ++gi) {
    a += inv1[gi];
    b += inv2[gi];
    pre1[gi] = a;
    pre2[gi] = b;
  }

  ScoreCurvature sc;
  sc.gradient.resize(static_cast<Eigen::Index>(n));
  sc.weight.resize(static_cast<Eigen::Index>(n));
  for (std::size_t gi = 0; gi < n_groups; ++gi) {
    for (std::size_t k = gb[gi]; k < ge[gi]; ++k) {
      const std::size_t s = order[k];
      const double e1 = std::exp(eta[static_cast<Eigen::Index>(s)]);
      sc.gradient[static_cast<Eigen::Index>(s)] = (events[s] ? 1.0 : 0.0) - e1 * pre1[gi];
      sc.weight[static_cast<Eigen::Index>(s)] = std::max(e1 * pre1[gi] - e1 * e1 * pre2[gi], 0.0);
    }
  }
  return sc;
}

double penalized_objective(const SurvivalDataset& ds, const Eigen::VectorXd& beta, double lambda,
                           double alpha) {
  auto [ll, grad] = cox_partial_loglik(ds, beta);
  (void)grad;
  const double n = static_cast<double>(ds.n());
  return -ll / n + lambda * (alpha * beta.lpNorm<1>() + 0.5 * (1.0 - alpha) * beta.squaredNorm());
}

// One elastic-net solve at fixed (lambda, alpha) starting from beta (standardized scale).
// Returns IRLS iteration count, sets *converged.
int coxnet_solve(const SurvivalDataset& ds, double lambda, double alpha, const CoxNetOptions& opts,
                 Eigen::VectorXd& beta, bool* converged) {
  const Eigen::Index n = ds.n(), p = ds.p();
  const double dn = static_cast<double>(n);
  Eigen::VectorXd v = ds.features * beta;  // current linear predictor
  double obj = penalized_objective(ds, beta, lambda, alpha);
  *converged = false;
  int outer = 0;

  for (; outer < opts.max_irls; ++outer) {
    const ScoreCurvature sc = score_curvature(ds.times, ds.events, v);
    const Eigen::VectorXd u = sc.weight.cwiseProduct(v) + sc.gradient;  // w*z, finite even at w=0

    // loop invariants for the cyclic sweeps
    Eigen::MatrixXd wX = ds.features.array().colwise() * sc.weight.array();
    Eigen::VectorXd xu = ds.features.transpose() * u;
    Eigen::VectorXd denom(p);
    for (Eigen::Index j = 0; j < p; ++j) {
      denom[j] = wX.col(j).dot(ds.features.col(j)) / dn + lambda * (1.0 - alpha);
    }

    const Eigen::VectorXd beta_prev = beta;
    int sweeps = 0;
    for (; sweeps < opts.max_sweeps; ++sweeps) {
      double max_delta = 0.0;
      for (Eigen::Index j = 0; j < p; ++j) {
        const double num = (xu[j] - wX.col(j).dot(v)) / dn + denom[j] * beta[j] -
                           lambda * (1.0 - alpha) * beta[j];
        const double thresholded =
            std::copysign(std::max(std::abs(num) - lambda * alpha, 0.0), num);
        const double bj = denom[j] > 1e-300 ? thresholded / denom[j] : 0.0;
        const double delta = bj - beta[j];
        if (delta != 0.0) {
          v += delta * ds.features.col(j);
          beta[j] = bj;
          max_delta = std::max(max_delta, std::abs(delta));
        }
      }
      if (max_delta < opts.tol) break;
    }

    // exact objective check with fallback halving toward the previous iterate
    double obj_new = penalized_objective(ds, beta, lambda, alpha);
    for (int h = 0; h < 10 && (!std::isfinite(obj_new) || obj_new > obj + 1e-12); ++h) {
      beta = 0.5 * (beta + beta_prev);
      v = ds.features * beta;
      obj_new = penalized_objective(ds, beta, lambda, alpha);
    }
    const double change = (beta - beta_prev).cwiseAbs().maxCoeff();
    obj = obj_new;
    v = ds.features * beta;
    if (change < opts.tol) {
      *converged = true;
      ++outer;
      break;
    }
  }
  return outer;
}

}  // namespace

double coxnet_lambda_max(const SurvivalDataset& d, double l1_ratio) {
  validate_dataset(d);
  if (d.n_events() == 0) {
    throw Error(ErrorCode::NoEventsObserved, "cannot compute lambda_max without events");
  }
  const Standardization std_info = standardize_always(d.features);
  SurvivalDataset ds{std_info.X, d.times, d.events};
  auto [ll, grad] = cox_partial_loglik(ds, Eigen::VectorXd::Zero(d.p()));
  (void)ll;
  const double alpha = std::max(l1_ratio, 1e-3);
  return grad.cwiseAbs().maxCoeff() / static_cast<double>(d.n()) / alpha;
}

CoxModel fit_coxnet(const SurvivalDataset& d, const ElasticNetConfig& cfg, const CoxNetOptions& opts) {
  validate_dataset(d);
  if (d.n_events() == 0) {
    throw Error(ErrorCode::NoEventsObserved, "cannot fit a Cox model without events");
  }
  if (cfg.lambda < 0.0 || cfg.l1_ratio < 0.0 || cfg.l1_ratio > 1.0) {
    throw Error(ErrorCode::ConfigError, "lambda >= 0 and l1_ratio in [0,1] required");
  }
  const Standardization std_info = standardize_always(d.features);
  SurvivalDataset ds{std_info.X, d.times, d.events};

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(d.p());
  CoxModel model;
  model.n_iter = coxnet_solve(ds, cfg.lambda, cfg.l1_ratio, opts, beta, &model.converged);

  model.feature_means = std_info.means;
  model.feature_scales = std_info.scales;
  model.beta = beta.array() / std_info.scales.array();
  const RiskVector train_risks = cox_risk(model, d.features);
  model.baseline = breslow_baseline(d, train_risks);
  return model;
}

std::vector<std::pair<double, CoxModel>> fit_coxnet_path(const SurvivalDataset& d, double l1_ratio,
                                                         int n_lambda, const CoxNetOptions& opts) {
  validate_dataset(d);
  const double lmax = coxnet_lambda_max(d, l1_ratio);
  const Standardization std_info = standardize_always(d.features);
  SurvivalDataset ds{std_info.X, d.times, d.events};

  std::vector<std::pair<double, CoxModel>> path;
  path.reserve(static_cast<std::size_t>(n_lambda));
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(d.p());  // warm start carried down the path
  for (int k = 0; k < n_lambda; ++k) {
    const double frac = n_lambda == 1 ? 1.0 : static_cast<double>(k) / (n_lambda - 1);
    const double lambda = lmax * std::pow(1e-3, frac);
    CoxModel model;
    model.n_iter = coxnet_solve(ds, lambda, l1_ratio, opts, beta, &model.converged);
    model.feature_means = std_info.means;
    model.feature_scales = std_info.scales;
    model.beta = beta.array() / std_info.scales.array();
    const RiskVector train_risks = cox_risk(model, d.features);
    model.baseline = breslow_baseline(d, train_risks);
    path.emplace_back(lambda, std::move(model));
  }
  return path;
}

}  // namespace survkit
