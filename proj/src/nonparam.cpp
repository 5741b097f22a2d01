#include "survkit/nonparam.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "survkit/errors.hpp"

namespace survkit {

namespace {

struct TimeOrder {
  std::vector<std::size_t> idx;  // subjects sorted by (time asc, event first)
};

// Stable sort on (time, event desc, original index) so tied times resolve
// deterministically.
TimeOrder sort_by_time(const SurvivalDataset& d) {
  TimeOrder o;
  o.idx.resize(d.times.size());
  std::iota(o.idx.begin(), o.idx.end(), 0);
  std::stable_sort(o.idx.begin(), o.idx.end(), [&](std::size_t a, std::size_t b) {
    if (d.times[a] != d.times[b]) return d.times[a] < d.times[b];
    return d.events[a] > d.events[b];
  });
  return o;
}

KaplanMeierCurve km_impl(const std::vector<double>& times, const std::vector<uint8_t>& events) {
  const std::size_t n = times.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return times[a] < times[b]; });

  KaplanMeierCurve out;
  std::vector<double> knots, values;
  double s = 1.0;
  std::size_t i = 0;
  while (i < n) {
    const double t = times[idx[i]];
    std::size_t d_here = 0, tied = 0;
    while (i + tied < n && times[idx[i + tied]] == t) {
      d_here += (events[idx[i + tied]] != 0);
      ++tied;
    }
    if (d_here > 0) {
      const std::size_t at_risk = n - i;  // all subjects with time >= t
      s *= 1.0 - static_cast<double>(d_here) / static_cast<double>(at_risk);
      knots.push_back(t);
      values.push_back(s);
      out.at_risk.push_back(at_risk);
      out.events_at.push_back(d_here);
    }
    i += tied;
  }
  out.curve = StepFunction(std::move(knots), std::move(values), 1.0);
  return out;
}

}  // namespace

KaplanMeierCurve kaplan_meier(const SurvivalDataset& d) {
  validate_dataset(d);
  return km_impl(d.times, d.events);
}

KaplanMeierCurve censoring_survival(const SurvivalDataset& d) {
  validate_dataset(d);
  std::vector<uint8_t> inverted(d.events.size());
  for (std::size_t i = 0; i < d.events.size(); ++i) inverted[i] = d.events[i] ? 0 : 1;
  return km_impl(d.times, inverted);
}

StepFunction nelson_aalen(const std::vector<double>& times, const std::vector<uint8_t>& events) {
  const std::size_t n = times.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return times[a] < times[b]; });
  std::vector<double> knots, values;
  double h = 0.0;
  std::size_t i = 0;
  while (i < n) {
    const double t = times[idx[i]];
    std::size_t d_here = 0, tied = 0;
    while (i + tied < n && times[idx[i + tied]] == t) {
      d_here += (events[idx[i + tied]] != 0);
      ++tied;
    }
    if (d_here > 0) {
      h += static_cast<double>(d_here) / static_cast<double>(n - i);
      knots.push_back(t);
      values.push_back(h);
    }
    i += tied;
  }
  return StepFunction(std::move(knots), std::move(values), 0.0);
}

StepFunction nelson_aalen(const SurvivalDataset& d) {
  validate_dataset(d);
  return nelson_aalen(d.times, d.events);
}

StepFunction breslow_baseline(const SurvivalDataset& d, const RiskVector& risk_scores) {
  validate_dataset(d);
  if (risk_scores.size() != d.n()) {
    throw Error(ErrorCode::LengthMismatch, "risk scores length vs dataset");
  }
  for (Eigen::Index i = 0; i < risk_scores.size(); ++i) {
    if (!std::isfinite(risk_scores[i])) {
      throw Error(ErrorCode::OverflowGuard, "non-finite risk score at " + std::to_string(i));
    }
  }
  const double center = risk_scores.maxCoeff();
  Eigen::VectorXd w(risk_scores.size());
  for (Eigen::Index i = 0; i < risk_scores.size(); ++i) {
    w[i] = std::exp(risk_scores[i] - center);
    if (!std::isfinite(w[i])) {
      throw Error(ErrorCode::OverflowGuard, "exp(risk) non-finite after centering");
    }
  }

  const TimeOrder o = sort_by_time(d);
  const std::size_t n = o.idx.size();

  // suffix sums of centered exp(risk) over the time ordering
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    suffix[i] = suffix[i + 1] + w[static_cast<Eigen::Index>(o.idx[i])];
  }

  std::vector<double> knots, values;
  double h = 0.0;
  std::size_t i = 0;
  while (i < n) {
    const double t = d.times[o.idx[i]];
    std::size_t d_here = 0, tied = 0;
    while (i + tied < n && d.times[o.idx[i + tied]] == t) {
      d_here += (d.events[o.idx[i + tied]] != 0);
      ++tied;
    }
    if (d_here > 0) {
      // Breslow ties: all tied events share the same risk set {k: t_k >= t}
      h += static_cast<double>(d_here) / suffix[i];
      knots.push_back(t);
      values.push_back(h * std::exp(-center));
    }
    i += tied;
  }
  return StepFunction(std::move(knots), std::move(values), 0.0);
}

}  // namespace survkit
