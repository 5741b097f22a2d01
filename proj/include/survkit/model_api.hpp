#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "survkit/dataset.hpp"
#include "survkit/step_function.hpp"

namespace survkit {

enum class Method { CoxPH, CoxNet, RSF, GBCox };

const char* method_name(Method m);
Method parse_method(const std::string& name);

/// Hyperparameter assignment by name. Integer-valued parameters are stored
/// as doubles and rounded on use.
using HyperParams = std::map<std::string, double>;

/// Uniform model abstraction: every method predicts survival curves, PH
/// methods additionally expose scalar risks.
class FittedModel {
 public:
  virtual ~FittedModel() = default;
  virtual SurvivalPredictionMatrix predict_survival(const Eigen::MatrixXd& X,
                                                    const TimeGrid& grid) const = 0;
  virtual std::optional<RiskVector> predict_risk(const Eigen::MatrixXd& X) const = 0;
};

/// Accepted hyperparameters per method (unknown names are errors):
///   coxph:  ridge_eps
///   coxnet: l1_ratio, lambda_frac (fraction of the training lambda_max)
///   rsf:    n_trees, mtry, min_leaf_size, max_depth (-1 = unlimited)
///   gbcox:  n_stages, learning_rate, max_depth, subsample
std::unique_ptr<FittedModel> fit_model(Method method, const SurvivalDataset& train,
                                       const HyperParams& params, uint64_t seed, int threads = 1);

/// Reconstruction of a desk-scale search grid; the paper-style protocol
/// needs one per method.
std::map<std::string, std::vector<double>> default_grid(Method method, Eigen::Index p);

/// Prediction grid: `knots` event-time quantiles of the training portion
/// (levels 0..1 inclusive, duplicates collapsed).
TimeGrid event_quantile_grid(const SurvivalDataset& train, int knots = 100);

}  // namespace survkit
