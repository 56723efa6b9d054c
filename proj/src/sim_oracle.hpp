// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "petc_model.hpp"

namespace petc {

struct Trajectory {
  Vector initial;            // unit vector (or zero for the origin)
  std::vector<int> symbols;  // discrete inter-sample times
  bool renormalized = true;
};

// Exact sample recurrence x_{i+1} = M(kappa(x_i)) x_i with per-step unit
// renormalization (the triggering map is homogeneous, so symbols are
// unchanged).  The origin yields the constant-kbar trajectory.
Trajectory simulate(const PetcSystem& sys, const Vector& x0, int steps);

// Finite-horizon AIST estimate: minimum over the second half of the run of
// the running averages h * (sum k_i) / (n+1).  An estimate, not a bound.
double empirical_aist(const PetcSystem& sys, const Vector& x0, int steps);
double empirical_aist(const Trajectory& traj, double h);

// Smallest (prefix, period) making the observed tail periodic, prefix-major
// order.  A period is only reported when at least two full repetitions fit
// and the prefix covers at most max_prefix symbols (default: half the
// trace).  max_period defaults to a quarter of the trace.
std::optional<std::pair<int, int>> pattern_detect(const Trajectory& traj,
                                                  int max_period = -1,
                                                  int max_prefix = -1);

// CSV rows: step,symbol,running_average.
std::string trace_csv(const Trajectory& traj, double h);

}  // namespace petc
