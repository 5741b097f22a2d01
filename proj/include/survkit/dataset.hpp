#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "survkit/step_function.hpp"

namespace survkit {

/// Scalar risk scores, higher = earlier expected event.
using RiskVector = Eigen::VectorXd;

/// Right-censored time-to-event sample: features x, observed time t and
/// event indicator (true = event observed, false = censored).
struct SurvivalDataset {
  Eigen::MatrixXd features;     // N x p
  std::vector<double> times;    // N, strictly positive
  std::vector<uint8_t> events;  // N, 1 = event observed

  Eigen::Index n() const { return features.rows(); }
  Eigen::Index p() const { return features.cols(); }

  std::size_t n_events() const;
  std::size_t n_censored() const;
};

/// Throws on the first invariant violation (finite features, positive finite
/// times, consistent lengths, nonempty).
void validate_dataset(const SurvivalDataset& d);

/// Empirical quantiles (type-7 linear interpolation) of the observed
/// uncensored event times. Throws NoEventsObserved when all subjects are
/// censored. Each q must lie in (0,1).
std::vector<double> event_time_quantiles(const SurvivalDataset& d, const std::vector<double>& qs);

/// Row subset in the given index order.
SurvivalDataset subset(const SurvivalDataset& d, const std::vector<std::size_t>& indices);

/// Per-subject survival curves evaluated on a shared grid.
/// surv(i, k) = predicted S(grid[k] | x_i); rows non-increasing, values in [0,1].
struct SurvivalPredictionMatrix {
  TimeGrid grid;
  Eigen::MatrixXd surv;  // N x grid.size()

  /// S(t | subject i) under right-continuous step semantics on the grid
  /// (1 before the first knot, clamped to the last knot beyond it).
  double at(Eigen::Index i, double t) const {
    std::size_t k = grid.locate(t);
    if (k == TimeGrid::npos) return 1.0;
    return surv(i, static_cast<Eigen::Index>(k));
  }
};

/// Throws unless every entry is in [0,1] and every row is non-increasing.
void validate_predictions(const SurvivalPredictionMatrix& pred);

}  // namespace survkit
