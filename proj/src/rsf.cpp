#include "survkit/rsf.hpp"

#include <cmath>

#include "survkit/errors.hpp"
#include "survkit/parallel.hpp"
#include "survkit/rng.hpp"

namespace survkit {

RSFModel fit_rsf(const SurvivalDataset& d, const RSFParams& params) {
  validate_dataset(d);
  if (d.n_events() == 0) {
    throw Error(ErrorCode::NoEventsObserved, "cannot grow survival trees without events");
  }
  if (params.n_trees < 1) {
    throw Error(ErrorCode::ConfigError, "n_trees >= 1 required");
  }
  if (params.mtry > d.p()) {
    throw Error(ErrorCode::ConfigError, "mtry exceeds feature count");
  }

  RSFModel model;
  model.params = params;
  model.trees.resize(static_cast<std::size_t>(params.n_trees));

  const auto n = static_cast<std::size_t>(d.n());
  SurvivalTreeParams tp;
  tp.mtry = params.mtry;
  tp.min_leaf_size = params.min_leaf_size;
  tp.max_depth = params.max_depth;

  parallel_for(model.trees.size(), params.threads, [&](std::size_t t) {
    std::mt19937_64 rng = make_engine(params.seed, t);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<std::size_t> rows(n);
    // bootstrap must contain at least one event for the leaf estimates
    for (int attempt = 0; attempt < 100; ++attempt) {
      bool has_event = false;
      for (std::size_t i = 0; i < n; ++i) {
        rows[i] = pick(rng);
        has_event |= (d.events[rows[i]] != 0);
      }
      if (has_event) break;
    }
    model.trees[t] = grow_survival_tree(d, rows, tp, rng);
  });
  return model;
}

SurvivalPredictionMatrix rsf_predict(const RSFModel& model, const Eigen::MatrixXd& X,
                                     const TimeGrid& grid) {
  if (model.trees.empty()) {
    throw Error(ErrorCode::EmptyDataset, "model has no trees");
  }
  // feature count is implicit in split indices; verify against the widest split
  int max_feature = -1;
  for (const auto& tree : model.trees) {
    for (const auto& nd : tree.nodes) max_feature = std::max(max_feature, nd.feature);
  }
  if (max_feature >= X.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "feature count vs trained forest");
  }

  const Eigen::Index n = X.rows();
  const auto t_count = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd mean_hazard = Eigen::MatrixXd::Zero(n, t_count);

  std::vector<double> leaf_on_grid;
  for (const auto& tree : model.trees) {
    // evaluate each leaf once on the grid, then accumulate per routed subject
    std::vector<std::vector<double>> cache(tree.nodes.size());
    for (std::size_t node = 0; node < tree.nodes.size(); ++node) {
      if (tree.nodes[node].feature >= 0) continue;
      auto& vals = cache[node];
      vals.resize(static_cast<std::size_t>(t_count));
      for (Eigen::Index k = 0; k < t_count; ++k) {
        vals[static_cast<std::size_t>(k)] = tree.nodes[node].leaf_hazard(grid[static_cast<std::size_t>(k)]);
      }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      const int leaf = tree.route(X.row(i));
      const auto& vals = cache[static_cast<std::size_t>(leaf)];
      for (Eigen::Index k = 0; k < t_count; ++k) {
        mean_hazard(i, k) += vals[static_cast<std::size_t>(k)];
      }
    }
  }
  mean_hazard /= static_cast<double>(model.trees.size());

  SurvivalPredictionMatrix pred;
  pred.grid = grid;
  pred.surv = (-mean_hazard).array().exp();
  return pred;
}

}  // namespace survkit
