// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "feasibility.hpp"

namespace petc {

using Symbol = std::uint16_t;
using StateSeq = std::vector<Symbol>;

// The l-complete traffic model: states are the feasible inter-sample
// sequences of length l (sorted lexicographically), edges follow the domino
// rule (k sigma -> sigma k'), the output of a state is its first symbol and
// every edge weighs h * output(source).
struct TrafficModel {
  int l = 0;
  double h = 0.0;
  int kbar = 0;
  std::vector<StateSeq> states;
  std::vector<std::vector<int>> adj;   // successor indices, ascending
  std::vector<bool> assumed;           // Unknown-as-feasible bookkeeping
  std::vector<int> alphabet;           // feasible length-1 symbols
  std::size_t pruned = 0;              // states removed to restore non-blocking

  int output(int state) const {
    return states[static_cast<std::size_t>(state)].front();
  }
  std::size_t edge_count() const;
  bool any_assumed() const;
  // Checks the domino rule, non-blocking property and state sorting;
  // returns an empty string when all invariants hold.
  std::string validate() const;
};

struct BuildBudget {
  std::size_t max_states = 1000000;
  std::size_t max_checks = 50000000;
};

TrafficModel build(const PetcSystem& sys, int l, const FeasibilityOptions& opts,
                   const BuildBudget& budget = {}, int workers = 1);

// Depth l+1 model obtained by extending every state of `model` one symbol.
TrafficModel refine(const TrafficModel& model, const PetcSystem& sys,
                    const FeasibilityOptions& opts,
                    const BuildBudget& budget = {}, int workers = 1);

// Deterministic serialization (docs/model-format.md).
std::string model_to_json(const TrafficModel& model);
TrafficModel model_from_json(const std::string& text);

}  // namespace petc
