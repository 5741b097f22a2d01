#pragma once

#include <cstdint>
#include <vector>

#include "survkit/dataset.hpp"
#include "survkit/survival_tree.hpp"

namespace survkit {

struct RSFParams {
  int n_trees = 200;
  int mtry = 0;  // 0 = ceil(sqrt(p))
  int min_leaf_size = 15;
  int max_depth = -1;  // unlimited
  uint64_t seed = 0;
  int threads = 1;  // tree growth parallelism; output independent of it
};

/// Bootstrap forest with log-rank splits and Nelson-Aalen leaves. Trees are
/// reproducible from (dataset, params, seed): each tree draws from its own
/// counter-derived stream, so growing in parallel changes nothing.
struct RSFModel {
  std::vector<SurvivalTree> trees;
  RSFParams params;
};

RSFModel fit_rsf(const SurvivalDataset& d, const RSFParams& params);

/// Per subject: average the routed leaf cumulative hazards over trees and
/// map through S(t) = exp(-mean H(t)). Rows are monotone but may cross.
SurvivalPredictionMatrix rsf_predict(const RSFModel& model, const Eigen::MatrixXd& X,
                                     const TimeGrid& grid);

}  // namespace survkit
