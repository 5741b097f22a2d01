#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "survkit/dataset.hpp"
#include "survkit/step_function.hpp"
#include "survkit/survival_tree.hpp"

namespace survkit {

struct GBCoxParams {
  int n_stages = 200;
  double learning_rate = 0.1;
  int max_depth = 3;
  double subsample = 1.0;  // fraction of subjects per stage, without replacement
  uint64_t seed = 0;
};

/// Gradient-boosted trees on the Cox partial-likelihood loss. Stage trees
/// are least-squares fits to the score gradient; the summed stage outputs
/// are log-relative hazards, so predictions stay proportional.
struct GradientBoostedCoxModel {
  std::vector<RegressionTree> stages;
  GBCoxParams params;
  StepFunction baseline;             // Breslow cumulative hazard on training scores
  std::vector<double> stage_loglik;  // training partial log-likelihood after each stage
};

GradientBoostedCoxModel fit_gbcox(const SurvivalDataset& d, const GBCoxParams& params);

/// Summed stage contributions as risks; proportional curves through the
/// stored Breslow baseline.
std::pair<SurvivalPredictionMatrix, RiskVector> gbcox_predict(const GradientBoostedCoxModel& model,
                                                              const Eigen::MatrixXd& X,
                                                              const TimeGrid& grid);

RiskVector gbcox_risk(const GradientBoostedCoxModel& model, const Eigen::MatrixXd& X);

/// Partial log-likelihood of per-subject scores (Breslow ties); the
/// objective traced by stage_loglik.
double cox_score_loglik(const std::vector<double>& times, const std::vector<uint8_t>& events,
                        const Eigen::VectorXd& scores);

}  // namespace survkit
