#include "survkit/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "survkit/errors.hpp"
#include "survkit/rng.hpp"

namespace survkit {

namespace {

constexpr int kBaselineBins = 64;
constexpr double kBaselineTotal = 3.0;

double positive_uniform(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  double u;
  do {
    u = 1.0 - dist(rng);  // (0, 1]
  } while (u >= 1.0);
  return u;
}

double realized_censored_fraction(const std::vector<double>& times,
                                  const std::vector<uint8_t>& events_in,
                                  const std::vector<double>& draws, double c_max) {
  std::size_t censored = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!events_in[i] || draws[i] * c_max < times[i]) ++censored;
  }
  return static_cast<double>(censored) / static_cast<double>(times.size());
}

}  // namespace

const char* generator_kind_name(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::LinPH: return "linph";
    case GeneratorKind::NonLinPH: return "nonlinph";
    case GeneratorKind::NonPH: return "nonph";
  }
  return "?";
}

GeneratorKind parse_generator_kind(const std::string& name) {
  if (name == "linph") return GeneratorKind::LinPH;
  if (name == "nonlinph") return GeneratorKind::NonLinPH;
  if (name == "nonph") return GeneratorKind::NonPH;
  throw Error(ErrorCode::ConfigError, "unknown generator kind '" + name + "'");
}

StepFunction gen_baseline_cumhaz(uint64_t seed) {
  std::mt19937_64 rng = make_engine(seed, 0x6261736cULL);  // baseline stream
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> inc(kBaselineBins);
  double total = 0.0;
  for (double& v : inc) {
    v = std::abs(normal(rng));
    total += v;
  }
  std::vector<double> knots(kBaselineBins), values(kBaselineBins);
  double acc = 0.0;
  for (int k = 0; k < kBaselineBins; ++k) {
    acc += inc[static_cast<std::size_t>(k)] * (kBaselineTotal / total);
    knots[static_cast<std::size_t>(k)] =
        GeneratorSpec::time_horizon * static_cast<double>(k + 1) / kBaselineBins;
    values[static_cast<std::size_t>(k)] = acc;
  }
  return StepFunction(std::move(knots), std::move(values), 0.0);
}

double risk_linph(const Eigen::Ref<const Eigen::RowVectorXd>& x, const std::vector<double>& coefs) {
  double r = 0.0;
  for (std::size_t k = 0; k < coefs.size(); ++k) {
    r += coefs[k] * x[static_cast<Eigen::Index>(k)];
  }
  return r;
}

double risk_nonlinph(const Eigen::Ref<const Eigen::RowVectorXd>& x) {
  return x[0] + x[1] * x[2] + std::cos(6.0 * x[3]);
}

std::vector<double> interval_probs_nonph(const Eigen::Ref<const Eigen::RowVectorXd>& x) {
  const int k = GeneratorSpec::n_intervals;
  std::vector<double> p(static_cast<std::size_t>(k));
  double max_v = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < k; ++i) max_v = std::max(max_v, 16.0 * x[i]);
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    p[static_cast<std::size_t>(i)] = std::exp(16.0 * x[i] - max_v);
    total += p[static_cast<std::size_t>(i)];
  }
  for (double& v : p) v /= total;
  return p;
}

std::optional<double> sample_event_time_ph(const StepFunction& baseline_cumhaz, double risk,
                                           double u) {
  // S(t|x) <= u  <=>  H0(t) >= -ln(u) * exp(-risk)
  const double target = -std::log(u) * std::exp(-risk);
  const auto& values = baseline_cumhaz.values();
  const auto it = std::lower_bound(values.begin(), values.end(), target);
  if (it == values.end()) return std::nullopt;  // outlives the horizon
  return baseline_cumhaz.knots()[static_cast<std::size_t>(it - values.begin())];
}

double sample_event_time_nonph(const std::vector<double>& probs, double u) {
  const double width = GeneratorSpec::time_horizon / GeneratorSpec::n_intervals;
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u <= acc) return width * static_cast<double>(i + 1);
  }
  return width * static_cast<double>(probs.size());  // numerical slack on the last interval
}

std::pair<std::vector<double>, std::vector<uint8_t>> apply_censoring(
    const std::vector<double>& times, const std::vector<uint8_t>& events_in, uint64_t seed,
    double target_fraction) {
  if (times.size() != events_in.size()) {
    throw Error(ErrorCode::LengthMismatch, "times vs events");
  }
  if (!(target_fraction >= 0.0 && target_fraction < 1.0)) {
    throw Error(ErrorCode::ConfigError, "target censoring fraction must lie in [0,1)");
  }
  const std::size_t n = times.size();
  const bool has_admin = std::any_of(events_in.begin(), events_in.end(),
                                     [](uint8_t e) { return e == 0; });
  if (target_fraction == 0.0) {
    if (has_admin) {
      throw Error(ErrorCode::CalibrationFailed,
                  "target 0 unreachable with administrative censoring present");
    }
    return {times, events_in};
  }

  std::mt19937_64 rng = make_engine(seed, 0x63656e73ULL);  // censoring stream
  std::vector<double> draws(n);
  for (double& u : draws) u = positive_uniform(rng);

  // realized fraction is non-increasing in c_max; bracket then bisect
  double lo = 1e-12;
  double hi = GeneratorSpec::time_horizon;
  for (int i = 0; i < 80 && realized_censored_fraction(times, events_in, draws, hi) > target_fraction;
       ++i) {
    hi *= 2.0;
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (realized_censored_fraction(times, events_in, draws, mid) > target_fraction) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double c_max = hi;
  if (std::abs(realized_censored_fraction(times, events_in, draws, lo) - target_fraction) <
      std::abs(realized_censored_fraction(times, events_in, draws, hi) - target_fraction)) {
    c_max = lo;
  }
  const double realized = realized_censored_fraction(times, events_in, draws, c_max);
  if (std::abs(realized - target_fraction) > 0.01) {
    throw Error(ErrorCode::CalibrationFailed,
                "closest reachable censored fraction is " + std::to_string(realized));
  }

  std::vector<double> out_times(n);
  std::vector<uint8_t> out_events(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double c = draws[i] * c_max;
    out_times[i] = std::min(times[i], c);
    out_events[i] = (events_in[i] && times[i] <= c) ? 1 : 0;
  }
  return {std::move(out_times), std::move(out_events)};
}

std::pair<SurvivalDataset, GroundTruth> generate(const GeneratorSpec& spec) {
  if (spec.n < 1) {
    throw Error(ErrorCode::ConfigError, "generator needs n >= 1");
  }
  if (!(spec.censoring_fraction >= 0.0 && spec.censoring_fraction < 1.0)) {
    throw Error(ErrorCode::ConfigError, "censoring fraction must lie in [0,1)");
  }

  SurvivalDataset d;
  GroundTruth truth;
  const auto n = static_cast<Eigen::Index>(spec.n);
  const int p = GeneratorSpec::n_features;

  std::mt19937_64 feature_rng = make_engine(spec.seed, 1);
  std::normal_distribution<double> normal(0.0, 1.0);
  d.features.resize(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) d.features(i, j) = normal(feature_rng);
  }

  std::vector<double> latent_times(spec.n);
  std::vector<uint8_t> latent_events(spec.n, 1);
  std::mt19937_64 event_rng = make_engine(spec.seed, 2);

  if (spec.kind == GeneratorKind::NonPH) {
    truth.interval_probs.resize(spec.n);
    for (Eigen::Index i = 0; i < n; ++i) {
      truth.interval_probs[static_cast<std::size_t>(i)] = interval_probs_nonph(d.features.row(i));
      const double u = positive_uniform(event_rng);
      latent_times[static_cast<std::size_t>(i)] =
          sample_event_time_nonph(truth.interval_probs[static_cast<std::size_t>(i)], u);
    }
  } else {
    truth.baseline_cumhaz = gen_baseline_cumhaz(mix_seed(spec.seed, 3));
    truth.true_risk.resize(spec.n);
    if (spec.kind == GeneratorKind::LinPH) {
      std::mt19937_64 coef_rng = make_engine(spec.seed, 4);
      truth.linear_coefficients.resize(8);
      for (double& c : truth.linear_coefficients) c = normal(coef_rng);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      const double risk = spec.kind == GeneratorKind::LinPH
                              ? risk_linph(d.features.row(i), truth.linear_coefficients)
                              : risk_nonlinph(d.features.row(i));
      truth.true_risk[static_cast<std::size_t>(i)] = risk;
      const double u = positive_uniform(event_rng);
      const auto t = sample_event_time_ph(truth.baseline_cumhaz, risk, u);
      if (t.has_value()) {
        latent_times[static_cast<std::size_t>(i)] = *t;
      } else {
        latent_times[static_cast<std::size_t>(i)] = GeneratorSpec::time_horizon;
        latent_events[static_cast<std::size_t>(i)] = 0;
      }
    }
  }

  auto [obs_times, obs_events] =
      apply_censoring(latent_times, latent_events, mix_seed(spec.seed, 5), spec.censoring_fraction);
  d.times = std::move(obs_times);
  d.events = std::move(obs_events);
  validate_dataset(d);
  return {std::move(d), std::move(truth)};
}

SurvivalDataset subsample_pool(const SurvivalDataset& pool, std::size_t n, uint64_t seed,
                               double censored_fraction) {
  return subset(pool, subsample_pool_indices(pool, n, seed, censored_fraction));
}

std::vector<std::size_t> subsample_pool_indices(const SurvivalDataset& pool, std::size_t n,
                                                uint64_t seed, double censored_fraction) {
  validate_dataset(pool);
  if (n < 1 || n > static_cast<std::size_t>(pool.n())) {
    throw Error(ErrorCode::ConfigError, "subsample size out of range");
  }
  const auto n_censored = static_cast<std::size_t>(
      std::lround(censored_fraction * static_cast<double>(n)));
  const std::size_t n_events = n - n_censored;

  std::vector<std::size_t> censored_idx, event_idx;
  for (std::size_t i = 0; i < pool.times.size(); ++i) {
    (pool.events[i] ? event_idx : censored_idx).push_back(i);
  }
  if (censored_idx.size() < n_censored) {
    throw Error(ErrorCode::InsufficientStratum,
                "pool has " + std::to_string(censored_idx.size()) + " censored subjects, need " +
                    std::to_string(n_censored));
  }
  if (event_idx.size() < n_events) {
    throw Error(ErrorCode::InsufficientStratum,
                "pool has " + std::to_string(event_idx.size()) + " uncensored subjects, need " +
                    std::to_string(n_events));
  }

  std::mt19937_64 rng = make_engine(seed, 0x73756273ULL);
  auto take = [&rng](std::vector<std::size_t>& from, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {  // partial Fisher-Yates
      std::uniform_int_distribution<std::size_t> pick(i, from.size() - 1);
      std::swap(from[i], from[pick(rng)]);
    }
    from.resize(count);
  };
  take(censored_idx, n_censored);
  take(event_idx, n_events);

  std::vector<std::size_t> merged;
  merged.reserve(n);
  merged.insert(merged.end(), event_idx.begin(), event_idx.end());
  merged.insert(merged.end(), censored_idx.begin(), censored_idx.end());
  std::sort(merged.begin(), merged.end());
  return subset(pool, merged);
}

}  // namespace survkit
