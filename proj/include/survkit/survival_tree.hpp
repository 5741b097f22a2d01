#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

#include "survkit/dataset.hpp"
#include "survkit/step_function.hpp"

namespace survkit {

/// Standardized two-sample log-rank statistic |O - E| / sqrt(V) over the
/// pooled distinct event times. Returns 0 when the variance term is 0
/// (degenerate split) instead of dividing by zero.
double logrank_statistic(const std::vector<double>& times_left,
                         const std::vector<uint8_t>& events_left,
                         const std::vector<double>& times_right,
                         const std::vector<uint8_t>& events_right);

struct SurvivalTreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  StepFunction leaf_hazard;  // Nelson-Aalen of in-leaf training subjects
};

struct SurvivalTree {
  std::vector<SurvivalTreeNode> nodes;  // node 0 is the root

  int route(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
  const StepFunction& leaf_hazard(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
    return nodes[static_cast<std::size_t>(route(x))].leaf_hazard;
  }
};

struct SurvivalTreeParams {
  int mtry = 0;           // features sampled per split; 0 = ceil(sqrt(p))
  int min_leaf_size = 15;
  int max_depth = -1;     // -1 = unlimited
};

/// Grows one tree greedily on the given subject rows, maximizing the
/// log-rank statistic over mtry sampled features. Candidate thresholds are
/// midpoints between consecutive distinct in-node values, thinned to 64
/// evenly spaced candidates for nodes larger than 256 subjects. Splits that
/// would leave a child below min_leaf_size or without events are rejected.
SurvivalTree grow_survival_tree(const SurvivalDataset& d, const std::vector<std::size_t>& rows,
                                const SurvivalTreeParams& params, std::mt19937_64& rng);

// --- least-squares regression tree (boosting base learner) ---

struct RegressionTreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf mean
};

struct RegressionTree {
  std::vector<RegressionTreeNode> nodes;
  double predict(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
};

/// Depth-bounded CART on squared error; same candidate-threshold rule as the
/// survival tree. All features are scanned at every node.
RegressionTree fit_regression_tree(const Eigen::MatrixXd& X, const std::vector<std::size_t>& rows,
                                   const Eigen::VectorXd& targets, int max_depth);

}  // namespace survkit
