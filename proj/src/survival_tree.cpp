#include "survkit/survival_tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "survkit/errors.hpp"
#include "survkit/nonparam.hpp"

namespace survkit {

namespace {

constexpr std::size_t kThinNodeSize = 256;
constexpr std::size_t kMaxCandidates = 64;

// Candidate thresholds: midpoints between consecutive distinct values.
// Nodes above kThinNodeSize keep 64 evenly spaced candidates.
struct Boundary {
  std::size_t prefix;  // subjects on the left side
  double threshold;
};

std::vector<Boundary> make_boundaries(const std::vector<double>& sorted_vals, std::size_t m) {
  std::vector<Boundary> all;
  for (std::size_t i = 1; i < sorted_vals.size(); ++i) {
    if (sorted_vals[i] != sorted_vals[i - 1]) {
      all.push_back({i, 0.5 * (sorted_vals[i] + sorted_vals[i - 1])});
    }
  }
  if (m > kThinNodeSize && all.size() > kMaxCandidates) {
    std::vector<Boundary> thinned;
    thinned.reserve(kMaxCandidates);
    std::size_t last = static_cast<std::size_t>(-1);
    for (std::size_t k = 0; k < kMaxCandidates; ++k) {
      const std::size_t idx = k * (all.size() - 1) / (kMaxCandidates - 1);
      if (idx != last) thinned.push_back(all[idx]);
      last = idx;
    }
    return thinned;
  }
  return all;
}

std::vector<int> sample_features(Eigen::Index p, int mtry, std::mt19937_64& rng) {
  std::vector<int> feats(static_cast<std::size_t>(p));
  std::iota(feats.begin(), feats.end(), 0);
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(mtry), feats.size());
  for (std::size_t i = 0; i < k; ++i) {  // partial Fisher-Yates
    std::uniform_int_distribution<std::size_t> pick(i, feats.size() - 1);
    std::swap(feats[i], feats[pick(rng)]);
  }
  feats.resize(k);
  return feats;
}

// Distinct event times of a node plus, per subject, the index of the last
// event time at or before its observed time (-1 if none). Events map onto
// their exact index.
struct NodeTimeIndex {
  std::vector<double> event_times;
  std::vector<int> rank;
  std::vector<double> d_total;
  std::vector<double> n_total;
};

NodeTimeIndex index_node_times(const SurvivalDataset& d, const std::vector<std::size_t>& rows,
                               std::size_t begin, std::size_t end) {
  NodeTimeIndex ix;
  for (std::size_t i = begin; i < end; ++i) {
    if (d.events[rows[i]]) ix.event_times.push_back(d.times[rows[i]]);
  }
  std::sort(ix.event_times.begin(), ix.event_times.end());
  ix.event_times.erase(std::unique(ix.event_times.begin(), ix.event_times.end()),
                       ix.event_times.end());
  const std::size_t k = ix.event_times.size();
  ix.rank.resize(end - begin);
  ix.d_total.assign(k, 0.0);
  std::vector<double> rank_hist(k, 0.0);
  for (std::size_t i = begin; i < end; ++i) {
    const double t = d.times[rows[i]];
    const auto it = std::upper_bound(ix.event_times.begin(), ix.event_times.end(), t);
    const int r = static_cast<int>(it - ix.event_times.begin()) - 1;
    ix.rank[i - begin] = r;
    if (r >= 0) rank_hist[static_cast<std::size_t>(r)] += 1.0;
    if (d.events[rows[i]]) {
      // event times match an index exactly
      const auto ej = static_cast<std::size_t>(
          std::lower_bound(ix.event_times.begin(), ix.event_times.end(), t) -
          ix.event_times.begin());
      ix.d_total[ej] += 1.0;
    }
  }
  ix.n_total.assign(k, 0.0);
  double suffix = 0.0;
  for (std::size_t j = k; j-- > 0;) {
    suffix += rank_hist[j];
    ix.n_total[j] = suffix;
  }
  return ix;
}

// |O - E| / sqrt(V) for the left group described by per-event-time counts.
double logrank_from_counts(const std::vector<double>& add_left, const std::vector<double>& d_left,
                           const NodeTimeIndex& ix) {
  const std::size_t k = ix.event_times.size();
  double observed = 0.0, expected = 0.0, variance = 0.0, n1 = 0.0;
  for (std::size_t j = k; j-- > 0;) {
    n1 += add_left[j];
    const double n = ix.n_total[j];
    const double dj = ix.d_total[j];
    if (dj == 0.0 || n <= 0.0) continue;
    observed += d_left[j];
    expected += dj * n1 / n;
    if (n > 1.0) {
      const double frac = n1 / n;
      variance += dj * frac * (1.0 - frac) * (n - dj) / (n - 1.0);
    }
  }
  if (variance <= 0.0) return 0.0;
  return std::abs(observed - expected) / std::sqrt(variance);
}

struct SplitChoice {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double statistic = 0.0;
};

SplitChoice best_logrank_split(const SurvivalDataset& d, std::vector<std::size_t>& rows,
                               std::size_t begin, std::size_t end, const NodeTimeIndex& ix,
                               int min_leaf, const std::vector<int>& features) {
  const std::size_t m = end - begin;
  const std::size_t k = ix.event_times.size();
  const double node_events =
      std::accumulate(ix.d_total.begin(), ix.d_total.end(), 0.0);

  std::vector<std::size_t> ord(m);
  std::vector<double> vals(m);
  std::vector<double> add_left(k), d_left(k);
  SplitChoice best;

  for (int f : features) {
    for (std::size_t i = 0; i < m; ++i) vals[i] = d.features(static_cast<Eigen::Index>(rows[begin + i]), f);
    std::iota(ord.begin(), ord.end(), 0);
    std::sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });

    std::vector<double> sorted_vals(m);
    for (std::size_t i = 0; i < m; ++i) sorted_vals[i] = vals[ord[i]];
    const std::vector<Boundary> cands = make_boundaries(sorted_vals, m);
    if (cands.empty()) continue;

    std::fill(add_left.begin(), add_left.end(), 0.0);
    std::fill(d_left.begin(), d_left.end(), 0.0);
    double left_events = 0.0;
    std::size_t ci = 0;
    for (std::size_t i = 0; i < m && ci < cands.size(); ++i) {
      const std::size_t local = ord[i];
      const int r = ix.rank[local];
      if (r >= 0) add_left[static_cast<std::size_t>(r)] += 1.0;
      if (d.events[rows[begin + local]]) {
        const double t = d.times[rows[begin + local]];
        const auto ej = static_cast<std::size_t>(
            std::lower_bound(ix.event_times.begin(), ix.event_times.end(), t) -
            ix.event_times.begin());
        d_left[ej] += 1.0;
        left_events += 1.0;
      }
      const std::size_t left_size = i + 1;
      if (left_size != cands[ci].prefix) continue;

      const std::size_t right_size = m - left_size;
      const double right_events = node_events - left_events;
      if (left_size >= static_cast<std::size_t>(min_leaf) &&
          right_size >= static_cast<std::size_t>(min_leaf) && left_events >= 1.0 &&
          right_events >= 1.0) {
        const double stat = logrank_from_counts(add_left, d_left, ix);
        if (stat > best.statistic) {
          best.found = true;
          best.feature = f;
          best.threshold = cands[ci].threshold;
          best.statistic = stat;
        }
      }
      ++ci;
    }
  }
  return best;
}

struct TreeGrower {
  const SurvivalDataset& d;
  const SurvivalTreeParams& params;
  std::mt19937_64& rng;
  std::vector<std::size_t>& rows;
  SurvivalTree& tree;
  int mtry;

  int grow(std::size_t begin, std::size_t end, int depth) {
    const int node_id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();

    const std::size_t m = end - begin;
    std::size_t node_events = 0;
    for (std::size_t i = begin; i < end; ++i) node_events += (d.events[rows[i]] != 0);

    const bool depth_ok = params.max_depth < 0 || depth < params.max_depth;
    SplitChoice split;
    if (depth_ok && m >= 2 * static_cast<std::size_t>(params.min_leaf_size) && node_events >= 2) {
      const NodeTimeIndex ix = index_node_times(d, rows, begin, end);
      const std::vector<int> feats = sample_features(d.p(), mtry, rng);
      split = best_logrank_split(d, rows, begin, end, ix, params.min_leaf_size, feats);
    }

    if (!split.found) {
      std::vector<double> t(m);
      std::vector<uint8_t> e(m);
      for (std::size_t i = 0; i < m; ++i) {
        t[i] = d.times[rows[begin + i]];
        e[i] = d.events[rows[begin + i]];
      }
      tree.nodes[static_cast<std::size_t>(node_id)].leaf_hazard = nelson_aalen(t, e);
      return node_id;
    }

    const auto mid = static_cast<std::size_t>(
        std::partition(rows.begin() + static_cast<std::ptrdiff_t>(begin),
                       rows.begin() + static_cast<std::ptrdiff_t>(end),
                       [&](std::size_t r) {
                         return d.features(static_cast<Eigen::Index>(r), split.feature) <=
                                split.threshold;
                       }) -
        rows.begin());

    tree.nodes[static_cast<std::size_t>(node_id)].feature = split.feature;
    tree.nodes[static_cast<std::size_t>(node_id)].threshold = split.threshold;
    const int left_id = grow(begin, mid, depth + 1);
    const int right_id = grow(mid, end, depth + 1);
    tree.nodes[static_cast<std::size_t>(node_id)].left = left_id;
    tree.nodes[static_cast<std::size_t>(node_id)].right = right_id;
    return node_id;
  }
};

}  // namespace

double logrank_statistic(const std::vector<double>& times_left,
                         const std::vector<uint8_t>& events_left,
                         const std::vector<double>& times_right,
                         const std::vector<uint8_t>& events_right) {
  if (times_left.size() != events_left.size() || times_right.size() != events_right.size()) {
    throw Error(ErrorCode::LengthMismatch, "times vs events");
  }
  if (times_left.empty() || times_right.empty()) {
    throw Error(ErrorCode::EmptyDataset, "both groups must be nonempty");
  }
  // pooled distinct event times
  std::vector<double> event_times;
  for (std::size_t i = 0; i < times_left.size(); ++i) {
    if (events_left[i]) event_times.push_back(times_left[i]);
  }
  for (std::size_t i = 0; i < times_right.size(); ++i) {
    if (events_right[i]) event_times.push_back(times_right[i]);
  }
  std::sort(event_times.begin(), event_times.end());
  event_times.erase(std::unique(event_times.begin(), event_times.end()), event_times.end());

  double observed = 0.0, expected = 0.0, variance = 0.0;
  for (double t : event_times) {
    double n1 = 0.0, n = 0.0, d1 = 0.0, dj = 0.0;
    for (std::size_t i = 0; i < times_left.size(); ++i) {
      if (times_left[i] >= t) {
        n1 += 1.0;
        n += 1.0;
        if (events_left[i] && times_left[i] == t) {
          d1 += 1.0;
          dj += 1.0;
        }
      }
    }
    for (std::size_t i = 0; i < times_right.size(); ++i) {
      if (times_right[i] >= t) {
        n += 1.0;
        if (events_right[i] && times_right[i] == t) dj += 1.0;
      }
    }
    observed += d1;
    expected += dj * n1 / n;
    if (n > 1.0) {
      const double frac = n1 / n;
      variance += dj * frac * (1.0 - frac) * (n - dj) / (n - 1.0);
    }
  }
  if (variance <= 0.0) return 0.0;
  return std::abs(observed - expected) / std::sqrt(variance);
}

int SurvivalTree::route(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  int node = 0;
  while (nodes[static_cast<std::size_t>(node)].feature >= 0) {
    const auto& nd = nodes[static_cast<std::size_t>(node)];
    node = x[nd.feature] <= nd.threshold ? nd.left : nd.right;
  }
  return node;
}

SurvivalTree grow_survival_tree(const SurvivalDataset& d, const std::vector<std::size_t>& rows,
                                const SurvivalTreeParams& params, std::mt19937_64& rng) {
  SurvivalTree tree;
  std::vector<std::size_t> work = rows;
  const int mtry = params.mtry > 0
                       ? params.mtry
                       : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(d.p()))));
  TreeGrower grower{d, params, rng, work, tree, mtry};
  grower.grow(0, work.size(), 0);
  return tree;
}

double RegressionTree::predict(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  int node = 0;
  while (nodes[static_cast<std::size_t>(node)].feature >= 0) {
    const auto& nd = nodes[static_cast<std::size_t>(node)];
    node = x[nd.feature] <= nd.threshold ? nd.left : nd.right;
  }
  return nodes[static_cast<std::size_t>(node)].value;
}

namespace {

struct RegressionGrower {
  const Eigen::MatrixXd& X;
  const Eigen::VectorXd& y;
  std::vector<std::size_t>& rows;
  RegressionTree& tree;
  int max_depth;

  int grow(std::size_t begin, std::size_t end, int depth) {
    const int node_id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();

    const std::size_t m = end - begin;
    double sum = 0.0;
    for (std::size_t i = begin; i < end; ++i) sum += y[static_cast<Eigen::Index>(rows[i])];
    const double mean = sum / static_cast<double>(m);

    int best_f = -1;
    double best_threshold = 0.0;
    double best_score = sum * sum / static_cast<double>(m) + 1e-12;
    if (depth < max_depth && m >= 2) {
      std::vector<std::size_t> ord(m);
      std::vector<double> vals(m);
      for (int f = 0; f < X.cols(); ++f) {
        for (std::size_t i = 0; i < m; ++i) vals[i] = X(static_cast<Eigen::Index>(rows[begin + i]), f);
        std::iota(ord.begin(), ord.end(), 0);
        std::sort(ord.begin(), ord.end(),
                  [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        std::vector<double> sorted_vals(m);
        for (std::size_t i = 0; i < m; ++i) sorted_vals[i] = vals[ord[i]];
        const std::vector<Boundary> cands = make_boundaries(sorted_vals, m);
        if (cands.empty()) continue;

        double left_sum = 0.0;
        std::size_t ci = 0;
        for (std::size_t i = 0; i < m && ci < cands.size(); ++i) {
          left_sum += y[static_cast<Eigen::Index>(rows[begin + ord[i]])];
          const std::size_t left_size = i + 1;
          if (left_size != cands[ci].prefix) continue;
          const double right_sum = sum - left_sum;
          const double score = left_sum * left_sum / static_cast<double>(left_size) +
                               right_sum * right_sum / static_cast<double>(m - left_size);
          if (score > best_score) {
            best_score = score;
            best_f = f;
            best_threshold = cands[ci].threshold;
          }
          ++ci;
        }
      }
    }

    if (best_f < 0) {
      tree.nodes[static_cast<std::size_t>(node_id)].value = mean;
      return node_id;
    }
    const auto mid = static_cast<std::size_t>(
        std::partition(rows.begin() + static_cast<std::ptrdiff_t>(begin),
                       rows.begin() + static_cast<std::ptrdiff_t>(end),
                       [&](std::size_t r) {
                         return X(static_cast<Eigen::Index>(r), best_f) <= best_threshold;
                       }) -
        rows.begin());
    tree.nodes[static_cast<std::size_t>(node_id)].feature = best_f;
    tree.nodes[static_cast<std::size_t>(node_id)].threshold = best_threshold;
    const int left_id = grow(begin, mid, depth + 1);
    const int right_id = grow(mid, end, depth + 1);
    tree.nodes[static_cast<std::size_t>(node_id)].left = left_id;
    tree.nodes[static_cast<std::size_t>(node_id)].right = right_id;
    return node_id;
  }
};

}  // namespace

RegressionTree fit_regression_tree(const Eigen::MatrixXd& X, const std::vector<std::size_t>& rows,
                                   const Eigen::VectorXd& targets, int max_depth) {
  if (rows.empty()) {
    throw Error(ErrorCode::EmptyDataset, "regression tree needs at least one row");
  }
  RegressionTree tree;
  std::vector<std::size_t> work = rows;
  RegressionGrower grower{X, targets, work, tree, max_depth};
  grower.grow(0, work.size(), 0);
  return tree;
}

}  // namespace survkit
