#pragma once

#include "survkit/dataset.hpp"
#include "survkit/step_function.hpp"

namespace survkit {

/// Product-limit estimate with its risk-set bookkeeping. Knots are the
/// distinct event times; at_risk[k] counts subjects with t >= knot k,
/// events_at[k] the events tied at knot k.
struct KaplanMeierCurve {
  StepFunction curve;  // survival mode: starts at 1, non-increasing
  std::vector<std::size_t> at_risk;
  std::vector<std::size_t> events_at;
};

KaplanMeierCurve kaplan_meier(const SurvivalDataset& d);

/// Kaplan-Meier of the censoring distribution G(t): event indicator
/// inverted, censorings act as events. Used for IPCW weights.
KaplanMeierCurve censoring_survival(const SurvivalDataset& d);

/// Cumulative hazard H(t) = sum over event times t_j <= t of d_j / n_j.
StepFunction nelson_aalen(const SurvivalDataset& d);

/// Same estimator on bare (time, event) pairs; used for tree leaves where
/// no feature matrix exists.
StepFunction nelson_aalen(const std::vector<double>& times, const std::vector<uint8_t>& events);

/// Breslow baseline cumulative hazard given log-relative-hazard scores:
/// H0(t) = sum over event times t_j <= t of d_j / sum_{k at risk} exp(risk_k).
/// Model survival is then S(t|x) = exp(-H0(t) * exp(risk_x)).
StepFunction breslow_baseline(const SurvivalDataset& d, const RiskVector& risk_scores);

}  // namespace survkit
