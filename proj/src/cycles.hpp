// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "abstraction.hpp"
#include "rational.hpp"

namespace petc {

// Node-weighted digraph view: every outgoing edge of u costs weight[u],
// matching the traffic model's weight-equals-source-output convention.
struct WeightedGraph {
  std::vector<int> weight;
  std::vector<std::vector<int>> adj;

  int size() const { return static_cast<int>(weight.size()); }
};

struct CycleResult {
  enum class Polarity { Min, Max };

  std::vector<int> nodes;  // canonical rotation: smallest node index first
  Rational mean;           // exact average node weight around the cycle
  double scaled = 0.0;     // h-scaled value for model-level queries
  Polarity polarity = Polarity::Min;
};

WeightedGraph as_graph(const TrafficModel& model);

// Value and one realizing cycle of the LimAvg automaton, computed by Karp's
// recurrence per strongly connected component.
CycleResult min_mean_cycle(const WeightedGraph& g);
CycleResult max_mean_cycle(const WeightedGraph& g);

// Up to `limit` distinct simple cycles achieving the minimum mean (exact
// rational equality), deterministically ordered.
std::vector<CycleResult> enumerate_min_cycles(const WeightedGraph& g,
                                              std::size_t limit);

CycleResult min_mean_cycle(const TrafficModel& model);
CycleResult max_mean_cycle(const TrafficModel& model);
std::vector<CycleResult> enumerate_min_cycles(const TrafficModel& model,
                                              std::size_t limit);

// Output symbols around a cycle of model states.
std::vector<int> cycle_symbols(const TrafficModel& model,
                               const CycleResult& cycle);

}  // namespace petc
