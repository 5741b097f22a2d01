#pragma once

#include <utility>
#include <vector>

#include "survkit/dataset.hpp"
#include "survkit/nonparam.hpp"

namespace survkit {

struct MetricWarnings {
  std::size_t zero_weight_drops = 0;  // IPCW weights with G = 0
  std::size_t clamped_eval_times = 0; // evaluation times beyond the grid
  std::size_t failed_quantiles = 0;   // per-quantile metric errors excluded from means
};

/// Everything the harness records per evaluation. Rescaled Brier is
/// 1 - 2 * brier_avg, matching the C-index range and direction.
struct MetricReport {
  std::vector<double> eval_times;          // event-time quantiles used
  std::vector<double> harrell_per_quartile;
  double harrell_quartile_avg = 0.0;
  double antolini = 0.0;
  std::vector<double> brier_per_quantile;
  double brier_avg = 0.0;
  double brier_rescaled = 0.0;
  std::vector<double> auroc_per_quantile;
  double auroc_avg = 0.0;
  MetricWarnings warnings;
};

/// Pair (i,j) is comparable iff the earlier subject's event was observed:
/// t_i < t_j with delta_i = 1, or t_i = t_j with delta_i = 1, delta_j = 0.
/// Tied event times (1,1) are not comparable.
inline bool comparable_pair(double t_i, bool event_i, double t_j, bool event_j) {
  if (!event_i) return false;
  return t_i < t_j || (t_i == t_j && !event_j);
}

/// Harrell's concordance: fraction of comparable pairs ordered correctly by
/// scalar risk (higher risk must fail earlier); tied risks count 0.5.
double harrell_c(const RiskVector& risks, const SurvivalDataset& test);

/// Harrell's C at each event-time quartile, using risk 1 - S(q | x), plus
/// their mean. Quartiles hitting NoComparablePairs are excluded and counted
/// in the warnings.
std::pair<double, std::vector<double>> harrell_c_quartile_avg(
    const SurvivalPredictionMatrix& pred, const SurvivalDataset& test,
    const std::vector<double>& qs = {0.25, 0.5, 0.75}, MetricWarnings* warnings = nullptr);

/// Antolini's time-dependent concordance: the pair is concordant when the
/// earlier subject's predicted survival at its own event time is the lower
/// one; ties in survival value count 0.5.
double antolini_c(const SurvivalPredictionMatrix& pred, const SurvivalDataset& test);

/// IPCW Brier score at time t (Graf convention: G(t-) for the event term,
/// G(t) for the at-risk term). Subjects whose required weight is zero are
/// dropped from the average and counted in the warnings.
double brier_score_at(const SurvivalPredictionMatrix& pred, const SurvivalDataset& test, double t,
                      const KaplanMeierCurve* censoring = nullptr,
                      MetricWarnings* warnings = nullptr);

struct BrierSummary {
  std::vector<double> per_quantile;
  double mean = 0.0;
  double rescaled = 0.0;  // 1 - 2 * mean
};

BrierSummary brier_summary(const SurvivalPredictionMatrix& pred, const SurvivalDataset& test,
                           const std::vector<double>& qs = {0.25, 0.5, 0.75},
                           MetricWarnings* warnings = nullptr);

/// Cumulative/dynamic AUROC at t: cases have events by t (IPCW weight
/// 1/G(t_i-)), controls survive past t, risk is 1 - S(t | x); ties 0.5.
double cumulative_dynamic_auc_at(const SurvivalPredictionMatrix& pred, const SurvivalDataset& test,
                                 double t, const KaplanMeierCurve* censoring = nullptr,
                                 MetricWarnings* warnings = nullptr);

/// Pearson correlation; throws ZeroVariance when either side is constant.
double score_correlation(const std::vector<double>& xs, const std::vector<double>& ys);

/// All four metric families at the given event-time quantiles of the test set.
MetricReport evaluate_all(const SurvivalPredictionMatrix& pred, const SurvivalDataset& test,
                          const std::vector<double>& qs = {0.25, 0.5, 0.75});

}  // namespace survkit
