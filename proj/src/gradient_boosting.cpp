#include "survkit/gradient_boosting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "survkit/cox.hpp"
#include "survkit/detail/time_groups.hpp"
#include "survkit/errors.hpp"
#include "survkit/nonparam.hpp"
#include "survkit/rng.hpp"

namespace survkit {

double cox_score_loglik(const std::vector<double>& times, const std::vector<uint8_t>& events,
                        const Eigen::VectorXd& scores) {
  if (times.size() != events.size() || times.size() != static_cast<std::size_t>(scores.size())) {
    throw Error(ErrorCode::LengthMismatch, "times/events/scores");
  }
  Eigen::VectorXd eta = scores;
  const double m = eta.size() > 0 ? eta.maxCoeff() : 0.0;
  eta.array() -= m;
  const detail::TimeGroups g = detail::build_time_groups(times);

  double ll = 0.0;
  double sw = 0.0;
  for (std::size_t gi = g.group_begin.size(); gi-- > 0;) {
    for (std::size_t k = g.group_begin[gi]; k < g.group_end[gi]; ++k) {
      sw += std::exp(eta[static_cast<Eigen::Index>(g.order[k])]);
    }
    const double log_sw = std::log(sw);
    for (std::size_t k = g.group_begin[gi]; k < g.group_end[gi]; ++k) {
      if (!events[g.order[k]]) continue;
      ll += eta[static_cast<Eigen::Index>(g.order[k])] - log_sw;
    }
  }
  return ll;
}

GradientBoostedCoxModel fit_gbcox(const SurvivalDataset& d, const GBCoxParams& params) {
  validate_dataset(d);
  if (d.n_events() == 0) {
    throw Error(ErrorCode::NoEventsObserved, "cannot boost without events");
  }
  if (params.n_stages < 0 || params.learning_rate <= 0.0 || params.learning_rate > 1.0 ||
      params.max_depth < 1 || params.subsample <= 0.0 || params.subsample > 1.0) {
    throw Error(ErrorCode::ConfigError, "invalid boosting parameters");
  }

  const auto n = static_cast<std::size_t>(d.n());
  GradientBoostedCoxModel model;
  model.params = params;
  model.stages.reserve(static_cast<std::size_t>(params.n_stages));
  model.stage_loglik.reserve(static_cast<std::size_t>(params.n_stages));

  Eigen::VectorXd scores = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  std::vector<std::size_t> all_rows(n);
  std::iota(all_rows.begin(), all_rows.end(), 0);

  for (int stage = 0; stage < params.n_stages; ++stage) {
    std::vector<std::size_t> rows;
    if (params.subsample < 1.0) {
      const auto keep = std::max<std::size_t>(
          2, static_cast<std::size_t>(std::lround(params.subsample * static_cast<double>(n))));
      std::mt19937_64 rng = make_engine(params.seed, static_cast<uint64_t>(stage));
      rows = all_rows;
      for (std::size_t i = 0; i < keep; ++i) {  // partial Fisher-Yates
        std::uniform_int_distribution<std::size_t> pick(i, rows.size() - 1);
        std::swap(rows[i], rows[pick(rng)]);
      }
      rows.resize(keep);
      std::sort(rows.begin(), rows.end());
    } else {
      rows = all_rows;
    }

    // negative Cox loss gradient w.r.t. scores, on the stage sample's own risk sets
    std::vector<double> sub_times(rows.size());
    std::vector<uint8_t> sub_events(rows.size());
    Eigen::VectorXd sub_scores(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      sub_times[i] = d.times[rows[i]];
      sub_events[i] = d.events[rows[i]];
      sub_scores[static_cast<Eigen::Index>(i)] = scores[static_cast<Eigen::Index>(rows[i])];
    }
    const Eigen::VectorXd sub_grad = cox_score_gradient(sub_times, sub_events, sub_scores);
    Eigen::VectorXd residual = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      residual[static_cast<Eigen::Index>(rows[i])] = sub_grad[static_cast<Eigen::Index>(i)];
    }

    RegressionTree tree = fit_regression_tree(d.features, rows, residual, params.max_depth);
    for (std::size_t i = 0; i < n; ++i) {
      scores[static_cast<Eigen::Index>(i)] +=
          params.learning_rate * tree.predict(d.features.row(static_cast<Eigen::Index>(i)));
    }
    model.stages.push_back(std::move(tree));
    model.stage_loglik.push_back(cox_score_loglik(d.times, d.events, scores));
  }

  model.baseline = breslow_baseline(d, scores);
  return model;
}

RiskVector gbcox_risk(const GradientBoostedCoxModel& model, const Eigen::MatrixXd& X) {
  int max_feature = -1;
  for (const auto& tree : model.stages) {
    for (const auto& nd : tree.nodes) max_feature = std::max(max_feature, nd.feature);
  }
  if (max_feature >= X.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "feature count vs trained model");
  }
  RiskVector risks = RiskVector::Zero(X.rows());
  for (const auto& tree : model.stages) {
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      risks[i] += model.params.learning_rate * tree.predict(X.row(i));
    }
  }
  return risks;
}

std::pair<SurvivalPredictionMatrix, RiskVector> gbcox_predict(const GradientBoostedCoxModel& model,
                                                              const Eigen::MatrixXd& X,
                                                              const TimeGrid& grid) {
  RiskVector risks = gbcox_risk(model, X);
  SurvivalPredictionMatrix pred;
  pred.grid = grid;
  const auto t_count = static_cast<Eigen::Index>(grid.size());
  Eigen::VectorXd h0(t_count);
  for (Eigen::Index k = 0; k < t_count; ++k) {
    h0[k] = model.baseline(grid[static_cast<std::size_t>(k)]);
  }
  pred.surv.resize(X.rows(), t_count);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const double w = std::exp(risks[i]);
    for (Eigen::Index k = 0; k < t_count; ++k) {
      pred.surv(i, k) = h0[k] == 0.0 ? 1.0 : std::exp(-h0[k] * w);
    }
  }
  return {std::move(pred), std::move(risks)};
}

}  // namespace survkit
