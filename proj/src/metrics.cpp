#include "survkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "survkit/errors.hpp"

namespace survkit {

namespace {

double concordance_from_scores(const std::vector<double>& scores, const SurvivalDataset& test,
                               bool higher_score_earlier) {
  const std::size_t n = test.times.size();
  double weight = 0.0, concordant = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (!comparable_pair(test.times[i], test.events[i] != 0, test.times[j], test.events[j] != 0)) {
        continue;
      }
      weight += 1.0;
      const double si = scores[i], sj = scores[j];
      if (si == sj) {
        concordant += 0.5;
      } else if ((si > sj) == higher_score_earlier) {
        concordant += 1.0;
      }
    }
  }
  if (weight == 0.0) {
    throw Error(ErrorCode::NoComparablePairs, "no comparable pairs in test set");
  }
  return concordant / weight;
}

}  // namespace

double harrell_c(const RiskVector& risks, const SurvivalDataset& test) {
  if (static_cast<std::size_t>(risks.size()) != test.times.size()) {
    throw Error(ErrorCode::LengthMismatch, "risks vs test set");
  }
  std::vector<double> scores(risks.data(), risks.data() + risks.size());
  return concordance_from_scores(scores, test, /*higher_score_earlier=*/true);
}

std::pair<double, std::vector<double>> harrell_c_quartile_avg(const SurvivalPredictionMatrix& pred,
                                                              const SurvivalDataset& test,
                                                              const std::vector<double>& qs,
                                                              MetricWarnings* warnings) {
  const std::vector<double> times = event_time_quantiles(test, qs);
  const std::size_t n = test.times.size();
  if (pred.surv.rows() != static_cast<Eigen::Index>(n)) {
    throw Error(ErrorCode::LengthMismatch, "prediction rows vs test set");
  }
  std::vector<double> per_q;
  per_q.reserve(times.size());
  double sum = 0.0;
  std::size_t ok = 0;
  for (double q : times) {
    std::vector<double> risk_at_q(n);
    for (std::size_t i = 0; i < n; ++i) {
      risk_at_q[i] = 1.0 - pred.at(static_cast<Eigen::Index>(i), q);
    }
    try {
      const double c = concordance_from_scores(risk_at_q, test, true);
      per_q.push_back(c);
      sum += c;
      ++ok;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoComparablePairs) throw;
      per_q.push_back(std::numeric_limits<double>::quiet_NaN());
      if (warnings) ++warnings->failed_quantiles;
    }
  }
  if (ok == 0) {
    throw Error(ErrorCode::NoComparablePairs, "every quartile failed");
  }
  return {sum / static_cast<double>(ok), per_q};
}

double antolini_c(const SurvivalPredictionMatrix& pred, const SurvivalDataset& test) {
  const std::size_t n = test.times.size();
  if (pred.surv.rows() != static_cast<Eigen::Index>(n)) {
    throw Error(ErrorCode::LengthMismatch, "prediction rows vs test set");
  }
  // survival at the earlier subject's event time: locate each t_i once
  std::vector<std::size_t> col(n);
  for (std::size_t i = 0; i < n; ++i) col[i] = pred.grid.locate(test.times[i]);

  double weight = 0.0, concordant = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!test.events[i]) continue;
    const std::size_t k = col[i];
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (!comparable_pair(test.times[i], true, test.times[j], test.events[j] != 0)) continue;
      weight += 1.0;
      double s_i = 1.0, s_j = 1.0;
      if (k != TimeGrid::npos) {
        s_i = pred.surv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
        s_j = pred.surv(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
      }
      if (s_i == s_j) {
        concordant += 0.5;
      } else if (s_i < s_j) {
        concordant += 1.0;
      }
    }
  }
  if (weight == 0.0) {
    throw Error(ErrorCode::NoComparablePairs, "no comparable pairs in test set");
  }
  return concordant / weight;
}

double brier_score_at(const SurvivalPredictionMatrix& pred, const SurvivalDataset& test, double t,
                      const KaplanMeierCurve* censoring, MetricWarnings* warnings) {
  const std::size_t n = test.times.size();
  if (pred.surv.rows() != static_cast<Eigen::Index>(n)) {
    throw Error(ErrorCode::LengthMismatch, "prediction rows vs test set");
  }
  KaplanMeierCurve local;
  if (!censoring) {
    local = censoring_survival(test);
    censoring = &local;
  }
  const double g_at_t = censoring->curve(t);
  double sum = 0.0;
  std::size_t dropped = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = pred.at(static_cast<Eigen::Index>(i), t);
    if (test.times[i] <= t && test.events[i]) {
      const double g = censoring->curve.left_limit(test.times[i]);
      if (g <= 0.0) {
        ++dropped;
        if (warnings) ++warnings->zero_weight_drops;
        continue;
      }
      sum += s * s / g;
    } else if (test.times[i] > t) {
      if (g_at_t <= 0.0) {
        ++dropped;
        if (warnings) ++warnings->zero_weight_drops;
        continue;
      }
      sum += (1.0 - s) * (1.0 - s) / g_at_t;
    }
    // subjects censored at or before t contribute 0 but stay in the average
  }
  const std::size_t kept = n - dropped;
  if (kept == 0) {
    throw Error(ErrorCode::NoCasesOrControls, "every subject dropped by zero IPCW weight");
  }
  return sum / static_cast<double>(kept);
}

BrierSummary brier_summary(const SurvivalPredictionMatrix& pred, const SurvivalDataset& test,
                           const std::vector<double>& qs, MetricWarnings* warnings) {
  const std::vector<double> times = event_time_quantiles(test, qs);
  const KaplanMeierCurve censoring = censoring_survival(test);
  BrierSummary out;
  double sum = 0.0;
  std::size_t ok = 0;
  for (double t : times) {
    try {
      const double b = brier_score_at(pred, test, t, &censoring, warnings);
      out.per_quantile.push_back(b);
      sum += b;
      ++ok;
    } catch (const Error&) {
      out.per_quantile.push_back(std::numeric_limits<double>::quiet_NaN());
      if (warnings) ++warnings->failed_quantiles;
    }
  }
  if (ok == 0) {
    throw Error(ErrorCode::NoCasesOrControls, "every Brier quantile failed");
  }
  out.mean = sum / static_cast<double>(ok);
  out.rescaled = 1.0 - 2.0 * out.mean;
  return out;
}

double cumulative_dynamic_auc_at(const SurvivalPredictionMatrix& pred, const SurvivalDataset& test,
                                 double t, const KaplanMeierCurve* censoring,
                                 MetricWarnings* warnings) {
  const std::size_t n = test.times.size();
  if (pred.surv.rows() != static_cast<Eigen::Index>(n)) {
    throw Error(ErrorCode::LengthMismatch, "prediction rows vs test set");
  }
  KaplanMeierCurve local;
  if (!censoring) {
    local = censoring_survival(test);
    censoring = &local;
  }
  std::vector<double> risk(n);
  for (std::size_t i = 0; i < n; ++i) risk[i] = 1.0 - pred.at(static_cast<Eigen::Index>(i), t);

  std::vector<std::size_t> cases, controls;
  std::vector<double> case_weight;
  for (std::size_t i = 0; i < n; ++i) {
    if (test.times[i] <= t && test.events[i]) {
      const double g = censoring->curve.left_limit(test.times[i]);
      if (g <= 0.0) {
        if (warnings) ++warnings->zero_weight_drops;
        continue;
      }
      cases.push_back(i);
      case_weight.push_back(1.0 / g);
    } else if (test.times[i] > t) {
      controls.push_back(i);
    }
  }
  if (cases.empty() || controls.empty()) {
    throw Error(ErrorCode::NoCasesOrControls, "need at least one case and one control");
  }
  double num = 0.0, total_weight = 0.0;
  for (std::size_t a = 0; a < cases.size(); ++a) {
    total_weight += case_weight[a];
    for (std::size_t b : controls) {
      if (risk[cases[a]] > risk[b]) {
        num += case_weight[a];
      } else if (risk[cases[a]] == risk[b]) {
        num += 0.5 * case_weight[a];
      }
    }
  }
  return num / (total_weight * static_cast<double>(controls.size()));
}

double score_correlation(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) {
    throw Error(ErrorCode::LengthMismatch, "score vectors");
  }
  if (xs.size() < 2) {
    throw Error(ErrorCode::EmptyDataset, "need at least two observations");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(ErrorCode::ZeroVariance, "constant score vector");
  }
  return sxy / std::sqrt(sxx * syy);
}

MetricReport evaluate_all(const SurvivalPredictionMatrix& pred, const SurvivalDataset& test,
                          const std::vector<double>& qs) {
  MetricReport report;
  report.eval_times = event_time_quantiles(test, qs);
  if (!pred.grid.knots().empty()) {
    for (double t : report.eval_times) {
      if (t > pred.grid.back()) ++report.warnings.clamped_eval_times;
    }
  }

  auto [h_avg, h_per_q] = harrell_c_quartile_avg(pred, test, qs, &report.warnings);
  report.harrell_quartile_avg = h_avg;
  report.harrell_per_quartile = std::move(h_per_q);
  report.antolini = antolini_c(pred, test);

  const BrierSummary brier = brier_summary(pred, test, qs, &report.warnings);
  report.brier_per_quantile = brier.per_quantile;
  report.brier_avg = brier.mean;
  report.brier_rescaled = brier.rescaled;

  const KaplanMeierCurve censoring = censoring_survival(test);
  double auc_sum = 0.0;
  std::size_t auc_ok = 0;
  for (double t : report.eval_times) {
    try {
      const double a = cumulative_dynamic_auc_at(pred, test, t, &censoring, &report.warnings);
      report.auroc_per_quantile.push_back(a);
      auc_sum += a;
      ++auc_ok;
    } catch (const Error&) {
      report.auroc_per_quantile.push_back(std::numeric_limits<double>::quiet_NaN());
      ++report.warnings.failed_quantiles;
    }
  }
  if (auc_ok == 0) {
    throw Error(ErrorCode::NoCasesOrControls, "every AUROC quantile failed");
  }
  report.auroc_avg = auc_sum / static_cast<double>(auc_ok);
  return report;
}

}  // namespace survkit
