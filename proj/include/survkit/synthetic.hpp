#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "survkit/dataset.hpp"
#include "survkit/step_function.hpp"

namespace survkit {

enum class GeneratorKind { LinPH, NonLinPH, NonPH };

const char* generator_kind_name(GeneratorKind kind);
GeneratorKind parse_generator_kind(const std::string& name);

/// All three kinds share 20 standard-normal features and a [0, 10] horizon;
/// NonPH works on 16 equal time intervals.
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::LinPH;
  std::size_t n = 0;
  uint64_t seed = 0;
  double censoring_fraction = 0.3;  // target, in [0,1)
  static constexpr double time_horizon = 10.0;
  static constexpr int n_features = 20;
  static constexpr int n_intervals = 16;
};

struct GroundTruth {
  std::vector<double> true_risk;                    // PH kinds: log-relative hazard
  std::vector<std::vector<double>> interval_probs;  // NonPH: n x 16, rows sum to 1
  StepFunction baseline_cumhaz;                     // PH kinds
  std::vector<double> linear_coefficients;          // LinPH: 8 coefficients
};

/// Cumulative baseline hazard on [0, 10]: 64 equal bins with |N(0,1)|
/// increments normalized so H0(10) = 3, accumulated from 0.
StepFunction gen_baseline_cumhaz(uint64_t seed);

/// Linear risk over the first 8 features; the rest are inert.
double risk_linph(const Eigen::Ref<const Eigen::RowVectorXd>& x,
                  const std::vector<double>& coefs);

/// x1 + x2*x3 + cos(6*x4); features 5-20 inert.
double risk_nonlinph(const Eigen::Ref<const Eigen::RowVectorXd>& x);

/// softmax(16 * x_1..16), log-sum-exp stabilized; features 17-20 inert.
std::vector<double> interval_probs_nonph(const Eigen::Ref<const Eigen::RowVectorXd>& x);

/// Inverse-transform draw for PH kinds: the smallest grid time with
/// S(t|x) <= u under step semantics. Returns nullopt when S(10|x) > u,
/// i.e. the subject outlives the horizon (administrative censoring).
std::optional<double> sample_event_time_ph(const StepFunction& baseline_cumhaz, double risk,
                                           double u);

/// NonPH draw: pick interval i with probability p_i, event at the interval's
/// right boundary so per-subject survival stays piecewise constant.
double sample_event_time_nonph(const std::vector<double>& probs, double u);

/// Uniform censoring on (0, c_max] with c_max calibrated by bisection until
/// the realized censored fraction lands within +-0.01 of the target.
/// events_in marks subjects already administratively censored (false).
/// Throws CalibrationFailed when the target is unreachable.
std::pair<std::vector<double>, std::vector<uint8_t>> apply_censoring(
    const std::vector<double>& times, const std::vector<uint8_t>& events_in, uint64_t seed,
    double target_fraction);

std::pair<SurvivalDataset, GroundTruth> generate(const GeneratorSpec& spec);

/// Stratified subsample: exactly round(n * censored_fraction) censored
/// subjects and the rest uncensored, uniformly without replacement.
SurvivalDataset subsample_pool(const SurvivalDataset& pool, std::size_t n, uint64_t seed,
                               double censored_fraction = 0.3);

/// Index form of subsample_pool (sorted ascending); lets callers carve
/// disjoint holdouts out of one pool.
std::vector<std::size_t> subsample_pool_indices(const SurvivalDataset& pool, std::size_t n,
                                                uint64_t seed, double censored_fraction = 0.3);

}  // namespace survkit
