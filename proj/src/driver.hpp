// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "abstraction.hpp"
#include "cycles.hpp"
#include "verifier.hpp"

namespace petc {

enum class ReportStatus { Certified, BoundsOnly, Refused };

const char* to_string(ReportStatus s);

struct PerLevelTrace {
  int l = 0;
  std::size_t states = 0;
  Rational lower_mean;  // V(S_l), h-unscaled
  Rational upper_mean;
  std::vector<int> mac;  // one minimum average cycle, as symbols
};

struct MaistReport {
  ReportStatus status = ReportStatus::BoundsOnly;
  std::optional<double> maist;         // h * mean, present iff Certified
  std::optional<Rational> maist_mean;  // exact cycle mean
  double lower_bound = 0.0;            // h * V(S_l) at the final depth
  double upper_bound = 0.0;
  int final_l = 0;
  std::vector<int> cycle;  // certified cycle, or best candidate
  std::optional<Certificate> certificate;
  std::vector<std::string> exactness_caveats;
  std::vector<PerLevelTrace> per_l;
  double wall_time_s = 0.0;
};

struct DriverOptions {
  int l_max = 50;
  int candidate_cycle_limit = 16;
  double time_budget_s = 0.0;  // 0 = unlimited; checked between depths
  double psd_tol = 1e-9;
  double eig_tol = 1e-8;
  FeasibilityOptions feas;
  BuildBudget budget;
  int workers = 1;
};

// The MACE loop: build S_l, take its minimum-average cycles, try to certify
// one as a periodic subspace solution, refine on failure.  Certification
// pins the MAIST exactly; exhaustion of l_max yields the tightest bracket.
MaistReport run(const PetcSystem& sys, const DriverOptions& opts);
MaistReport run(const PlantSpec& spec, const DriverOptions& opts);

// (h * min mean, h * max mean) of S_l.
std::pair<double, double> bounds_at(const PetcSystem& sys, int l,
                                    const DriverOptions& opts);

}  // namespace petc
