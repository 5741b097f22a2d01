#include "survkit/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "survkit/errors.hpp"

namespace survkit {

std::size_t SurvivalDataset::n_events() const {
  std::size_t c = 0;
  for (uint8_t e : events) c += (e != 0);
  return c;
}

std::size_t SurvivalDataset::n_censored() const {
  return events.size() - n_events();
}

void validate_dataset(const SurvivalDataset& d) {
  const auto n = d.features.rows();
  if (n < 1 || d.features.cols() < 1) {
    throw Error(ErrorCode::EmptyDataset, "need N >= 1 subjects and p >= 1 features");
  }
  if (static_cast<Eigen::Index>(d.times.size()) != n ||
      static_cast<Eigen::Index>(d.events.size()) != n) {
    throw Error(ErrorCode::LengthMismatch,
                "features/times/events lengths " + std::to_string(n) + "/" +
                    std::to_string(d.times.size()) + "/" + std::to_string(d.events.size()));
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(d.times[static_cast<std::size_t>(i)] > 0.0) ||
        !std::isfinite(d.times[static_cast<std::size_t>(i)])) {
      throw Error(ErrorCode::NonPositiveTime, "subject " + std::to_string(i));
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d.features.cols(); ++j) {
      if (!std::isfinite(d.features(i, j))) {
        throw Error(ErrorCode::NonFiniteFeature,
                    "row " + std::to_string(i) + ", col " + std::to_string(j));
      }
    }
  }
}

std::vector<double> event_time_quantiles(const SurvivalDataset& d, const std::vector<double>& qs) {
  std::vector<double> ev;
  ev.reserve(d.times.size());
  for (std::size_t i = 0; i < d.times.size(); ++i) {
    if (d.events[i]) ev.push_back(d.times[i]);
  }
  if (ev.empty()) {
    throw Error(ErrorCode::NoEventsObserved, "all subjects censored");
  }
  std::sort(ev.begin(), ev.end());
  std::vector<double> out;
  out.reserve(qs.size());
  for (double q : qs) {
    if (!(q > 0.0 && q < 1.0)) {
      throw Error(ErrorCode::ConfigError, "quantile level must lie in (0,1)");
    }
    // type-7: linear interpolation between order statistics
    const double h = (static_cast<double>(ev.size()) - 1.0) * q;
    const std::size_t lo = static_cast<std::size_t>(h);
    const double frac = h - static_cast<double>(lo);
    double v = ev[lo];
    if (lo + 1 < ev.size()) v += frac * (ev[lo + 1] - ev[lo]);
    out.push_back(v);
  }
  return out;
}

SurvivalDataset subset(const SurvivalDataset& d, const std::vector<std::size_t>& indices) {
  SurvivalDataset s;
  s.features.resize(static_cast<Eigen::Index>(indices.size()), d.features.cols());
  s.times.resize(indices.size());
  s.events.resize(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    s.features.row(static_cast<Eigen::Index>(k)) =
        d.features.row(static_cast<Eigen::Index>(indices[k]));
    s.times[k] = d.times[indices[k]];
    s.events[k] = d.events[indices[k]];
  }
  return s;
}

void validate_predictions(const SurvivalPredictionMatrix& pred) {
  if (pred.surv.cols() != static_cast<Eigen::Index>(pred.grid.size())) {
    throw Error(ErrorCode::DimensionMismatch, "prediction columns vs grid size");
  }
  for (Eigen::Index i = 0; i < pred.surv.rows(); ++i) {
    double prev = 1.0;
    for (Eigen::Index k = 0; k < pred.surv.cols(); ++k) {
      const double v = pred.surv(i, k);
      if (!(v >= 0.0 && v <= 1.0)) {
        throw Error(ErrorCode::DimensionMismatch,
                    "survival value outside [0,1] at row " + std::to_string(i));
      }
      if (v > prev + 1e-12) {
        throw Error(ErrorCode::DimensionMismatch,
                    "survival row " + std::to_string(i) + " increases at column " + std::to_string(k));
      }
      prev = v;
    }
  }
}

}  // namespace survkit
