#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

namespace survkit::detail {

/// Subjects sorted by time ascending, chunked into tied-time groups.
/// Breslow ties: every event in a group shares the risk set
/// {k : t_k >= group time}.
struct TimeGroups {
  std::vector<std::size_t> order;
  std::vector<std::size_t> group_begin;  // offsets into order
  std::vector<std::size_t> group_end;
};

inline TimeGroups build_time_groups(const std::vector<double>& times) {
  TimeGroups g;
  g.order.resize(times.size());
  std::iota(g.order.begin(), g.order.end(), 0);
  std::stable_sort(g.order.begin(), g.order.end(),
                   [&](std::size_t a, std::size_t b) { return times[a] < times[b]; });
  std::size_t i = 0;
  while (i < g.order.size()) {
    std::size_t j = i + 1;
    while (j < g.order.size() && times[g.order[j]] == times[g.order[i]]) ++j;
    g.group_begin.push_back(i);
    g.group_end.push_back(j);
    i = j;
  }
  return g;
}

}  // namespace survkit::detail
