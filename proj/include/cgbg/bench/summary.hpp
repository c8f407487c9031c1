#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cgbg/bench/experiment.hpp"

namespace cgbg::bench {

// Mean and standard error of the mean (sample standard deviation / sqrt(N)).
struct MeanSe {
  double mean = 0;
  double se = 0;
  std::size_t count = 0;
};

inline MeanSe mean_and_se(const std::vector<double>& xs) {
  MeanSe out;
  out.count = xs.size();
  if (xs.empty()) return out;
  double sum = 0;
  for (double x : xs) sum += x;
  out.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    out.se = sd / std::sqrt(static_cast<double>(xs.size()));
  }
  return out;
}

struct PointKey {
  std::size_t n = 0, k = 0, num_actions = 0, num_types = 0;
  auto operator<=>(const PointKey&) const = default;
};

struct SummaryRow {
  PointKey point;
  std::string method;
  std::size_t games = 0;
  std::size_t successes = 0;
  MeanSe value;
  MeanSe normalized_value;
  MeanSe value_delta;
  double mean_runtime_ms = 0;  // over all rows of the group
  bool complete = true;        // false when any row failed

  double success_rate() const { return games ? static_cast<double>(successes) / static_cast<double>(games) : 0.0; }
};

// Groups by key and method, in order of first appearance.
inline std::vector<SummaryRow> summarize_by(const std::vector<ResultRow>& rows,
                                            const std::function<PointKey(const ResultRow&)>& key) {
  struct Acc {
    SummaryRow row;
    std::vector<double> value, normalized, delta;
    double runtime = 0;
  };
  std::vector<Acc> groups;
  std::map<std::pair<PointKey, std::string>, std::size_t> index;
  for (const ResultRow& r : rows) {
    const auto id = std::make_pair(key(r), r.method);
    auto it = index.find(id);
    if (it == index.end()) {
      it = index.emplace(id, groups.size()).first;
      groups.emplace_back();
      groups.back().row.point = id.first;
      groups.back().row.method = r.method;
    }
    Acc& acc = groups[it->second];
    ++acc.row.games;
    acc.runtime += r.runtime_ms;
    if (r.status != RowStatus::kOk || !r.value) {
      acc.row.complete = false;
      continue;
    }
    ++acc.row.successes;
    acc.value.push_back(*r.value);
    if (r.normalized_value) acc.normalized.push_back(*r.normalized_value);
    if (r.value_delta) acc.delta.push_back(*r.value_delta);
  }
  std::vector<SummaryRow> out;
  for (Acc& acc : groups) {
    acc.row.value = mean_and_se(acc.value);
    acc.row.normalized_value = mean_and_se(acc.normalized);
    acc.row.value_delta = mean_and_se(acc.delta);
    acc.row.mean_runtime_ms = acc.runtime / static_cast<double>(acc.row.games);
    out.push_back(std::move(acc.row));
  }
  return out;
}

inline std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
  return summarize_by(rows, [](const ResultRow& r) { return PointKey{r.n, r.k, r.num_actions, r.num_types}; });
}

}  // namespace cgbg::bench
