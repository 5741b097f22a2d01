#include "survkit/step_function.hpp"

#include <algorithm>
#include <cmath>

#include "survkit/errors.hpp"

namespace survkit {

namespace {

void check_knots(const std::vector<double>& knots, std::size_t n_values) {
  if (knots.size() != n_values) {
    throw Error(ErrorCode::LengthMismatch, "step function has " + std::to_string(knots.size()) +
                                               " knots but " + std::to_string(n_values) + " values");
  }
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!std::isfinite(knots[i])) {
      throw Error(ErrorCode::NonFiniteFeature, "knot " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && knots[i] <= knots[i - 1]) {
      throw Error(ErrorCode::LengthMismatch,
                  "knots must be strictly increasing at index " + std::to_string(i));
    }
  }
}

}  // namespace

StepFunction::StepFunction(std::vector<double> knots, std::vector<double> values, double value_before)
    : knots_(std::move(knots)), values_(std::move(values)), value_before_(value_before) {
  check_knots(knots_, values_.size());
}

double StepFunction::operator()(double t) const {
  // largest knot <= t
  auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
  if (it == knots_.begin()) return value_before_;
  return values_[static_cast<std::size_t>(it - knots_.begin()) - 1];
}

double StepFunction::left_limit(double t) const {
  // largest knot strictly < t
  auto it = std::lower_bound(knots_.begin(), knots_.end(), t);
  if (it == knots_.begin()) return value_before_;
  return values_[static_cast<std::size_t>(it - knots_.begin()) - 1];
}

bool StepFunction::is_survival_curve() const {
  if (value_before_ != 1.0) return false;
  double prev = 1.0;
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) return false;
    if (v > prev) return false;
    prev = v;
  }
  return true;
}

bool StepFunction::is_cumulative_hazard() const {
  if (value_before_ != 0.0) return false;
  double prev = 0.0;
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) return false;
    if (v < prev) return false;
    prev = v;
  }
  return true;
}

TimeGrid::TimeGrid(std::vector<double> knots) : knots_(std::move(knots)) {
  if (knots_.empty()) {
    throw Error(ErrorCode::EmptyDataset, "time grid needs at least one knot");
  }
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!std::isfinite(knots_[i]) || knots_[i] <= 0.0) {
      throw Error(ErrorCode::NonPositiveTime, "grid knot " + std::to_string(i));
    }
    if (i > 0 && knots_[i] <= knots_[i - 1]) {
      throw Error(ErrorCode::LengthMismatch,
                  "grid knots must be strictly increasing at index " + std::to_string(i));
    }
  }
}

std::size_t TimeGrid::locate(double t) const {
  auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
  if (it == knots_.begin()) return npos;
  return static_cast<std::size_t>(it - knots_.begin()) - 1;
}

}  // namespace survkit
