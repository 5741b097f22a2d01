#pragma once

#include <cstddef>
#include <vector>

namespace survkit {

/// Right-continuous piecewise-constant function of time.
/// f(t) = value at the largest knot <= t, or value_before_first_knot if t
/// lies before every knot. Knots are strictly increasing.
class StepFunction {
 public:
  StepFunction() = default;
  StepFunction(std::vector<double> knots, std::vector<double> values, double value_before);

  double operator()(double t) const;

  /// Left limit f(t-): value at the largest knot strictly below t.
  double left_limit(double t) const;

  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& values() const { return values_; }
  double value_before_first_knot() const { return value_before_; }
  std::size_t size() const { return knots_.size(); }
  bool empty() const { return knots_.empty(); }

  /// Mode checks used by estimator outputs.
  bool is_survival_curve() const;     // starts at 1, non-increasing, within [0,1]
  bool is_cumulative_hazard() const;  // starts at 0, non-decreasing, >= 0

 private:
  std::vector<double> knots_;
  std::vector<double> values_;
  double value_before_ = 0.0;
};

/// Shared evaluation abscissa for survival curves: strictly increasing,
/// finite, nonempty knots.
class TimeGrid {
 public:
  TimeGrid() = default;
  explicit TimeGrid(std::vector<double> knots);

  const std::vector<double>& knots() const { return knots_; }
  std::size_t size() const { return knots_.size(); }
  double operator[](std::size_t i) const { return knots_[i]; }
  double front() const { return knots_.front(); }
  double back() const { return knots_.back(); }

  /// Index of the largest knot <= t, or npos if t lies before all knots.
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t locate(double t) const;

 private:
  std::vector<double> knots_;
};

}  // namespace survkit
