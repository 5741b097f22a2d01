#pragma once

#include <Eigen/Dense>
#include <utility>

#include "survkit/dataset.hpp"
#include "survkit/nonparam.hpp"
#include "survkit/step_function.hpp"

namespace survkit {

/// Fitted proportional-hazards model. `beta` is on the original feature
/// scale; risks are computed on centered features, risk(x) = (x - means) . beta,
/// so a subject at the training mean has risk 0 and curve exp(-H0).
struct CoxModel {
  Eigen::VectorXd beta;
  Eigen::VectorXd feature_means;
  Eigen::VectorXd feature_scales;
  StepFunction baseline;  // Breslow cumulative hazard on training risks
  bool converged = false;
  int n_iter = 0;
};

struct CoxFitOptions {
  double ridge_eps = 1e-6;
  int max_iter = 100;
  double tol = 1e-7;        // on max |gradient component|
  bool standardize = true;  // internal standardization; beta is de-standardized
};

struct ElasticNetConfig {
  double lambda = 0.0;   // overall penalty strength, >= 0
  double l1_ratio = 1.0; // mixing between lasso (1) and ridge (0)
};

struct CoxNetOptions {
  int max_sweeps = 10000;
  double tol = 1e-7;
  int max_irls = 100;
};

/// Breslow-ties partial log-likelihood and its analytic gradient at beta.
/// Zero events gives (0, 0). Throws OverflowGuard on non-finite predictors.
std::pair<double, Eigen::VectorXd> cox_partial_loglik(const SurvivalDataset& d,
                                                      const Eigen::VectorXd& beta);

/// Newton quantities at beta: log-likelihood, gradient and observed
/// information (negative Hessian). Shared by the fitter and by tests.
struct CoxNewtonQuantities {
  double loglik;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd information;
};
CoxNewtonQuantities cox_newton_quantities(const SurvivalDataset& d, const Eigen::VectorXd& beta);

/// Per-subject score gradient d loglik / d eta_i at the given linear
/// predictors; the boosting residual. Breslow ties.
Eigen::VectorXd cox_score_gradient(const std::vector<double>& times,
                                   const std::vector<uint8_t>& events,
                                   const Eigen::VectorXd& scores);

/// Newton-Raphson maximizer of loglik(beta) - ridge_eps * |beta|^2 / 2 with
/// step halving. Throws SingularHessian on collinear features at ridge 0;
/// returns converged=false (never throws) when max_iter is exhausted.
CoxModel fit_cox(const SurvivalDataset& d, const CoxFitOptions& opts = {});

/// Elastic-net penalized Cox via cyclic coordinate descent on the IRLS
/// quadratic approximation; objective loglik/N - lambda * (l1 |b|_1 + (1-l1) |b|^2 / 2)
/// on the standardized scale.
CoxModel fit_coxnet(const SurvivalDataset& d, const ElasticNetConfig& cfg,
                    const CoxNetOptions& opts = {});

/// Smallest lambda that zeroes every coefficient (from the null-model
/// gradient); the alpha used is max(l1_ratio, 1e-3) as in common practice.
double coxnet_lambda_max(const SurvivalDataset& d, double l1_ratio);

/// Warm-started descending lambda path (log-spaced, lambda_max down to
/// 1e-3 * lambda_max). Returns one model per lambda value.
std::vector<std::pair<double, CoxModel>> fit_coxnet_path(const SurvivalDataset& d, double l1_ratio,
                                                         int n_lambda = 50,
                                                         const CoxNetOptions& opts = {});

/// Survival curves on the grid plus scalar risks for new subjects.
std::pair<SurvivalPredictionMatrix, RiskVector> cox_predict(const CoxModel& model,
                                                            const Eigen::MatrixXd& X,
                                                            const TimeGrid& grid);

/// risk(x) = (x - feature_means) . beta
RiskVector cox_risk(const CoxModel& model, const Eigen::MatrixXd& X);

}  // namespace survkit
