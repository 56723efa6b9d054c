// SPDX-License-Identifier: Apache-2.0
#include "driver.hpp"

#include <chrono>

#include "errors.hpp"

namespace petc {

const char* to_string(ReportStatus s) {
  switch (s) {
    case ReportStatus::Certified: return "certified";
    case ReportStatus::BoundsOnly: return "bounds_only";
    case ReportStatus::Refused: return "refused";
  }
  return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

MaistReport run(const PetcSystem& sys, const DriverOptions& opts) {
  if (opts.l_max < 1) throw std::invalid_argument("run: l_max must be >= 1");
  const auto t0 = Clock::now();

  MaistReport report;
  TrafficModel model = build(sys, 1, opts.feas, opts.budget, opts.workers);
  bool assumption1_hit = false;

  for (int l = 1; l <= opts.l_max; ++l) {
    if (l > 1) model = refine(model, sys, opts.feas, opts.budget, opts.workers);

    const CycleResult lo = min_mean_cycle(model);
    const CycleResult hi = max_mean_cycle(model);
    const auto candidates =
        enumerate_min_cycles(model, static_cast<std::size_t>(opts.candidate_cycle_limit));

    PerLevelTrace trace;
    trace.l = l;
    trace.states = model.states.size();
    trace.lower_mean = lo.mean;
    trace.upper_mean = hi.mean;
    trace.mac = cycle_symbols(model, candidates.empty() ? lo : candidates.front());
    report.per_l.push_back(trace);

    report.final_l = l;
    report.lower_bound = sys.h * lo.mean.value();
    report.upper_bound = sys.h * hi.mean.value();
    report.cycle = trace.mac;

    for (const auto& cand : candidates) {
      const auto symbols = cycle_symbols(model, cand);
      const VerifyOutcome outcome =
          verify_cycle(sys, symbols, opts.psd_tol, opts.eig_tol);
      if (outcome.refusal.assumption1) assumption1_hit = true;
      if (!outcome.ok()) continue;
      report.status = ReportStatus::Certified;
      report.maist_mean = cand.mean;
      report.maist = sys.h * cand.mean.value();
      report.cycle = outcome.certificate->cycle;
      report.certificate = outcome.certificate;
      if (model.any_assumed())
        report.exactness_caveats.push_back(
            "certified modulo backend completeness: some states were assumed "
            "feasible on Unknown verdicts");
      report.wall_time_s = seconds_since(t0);
      return report;
    }

    if (opts.time_budget_s > 0.0 && l < opts.l_max &&
        seconds_since(t0) >= opts.time_budget_s) {
      report.exactness_caveats.push_back(
          "time budget exhausted after l=" + std::to_string(l));
      break;
    }
  }

  report.status = ReportStatus::BoundsOnly;
  if (assumption1_hit)
    report.exactness_caveats.push_back(
        "a minimum average cycle had repeated eigenvalues; its certification "
        "was refused");
  if (model.any_assumed())
    report.exactness_caveats.push_back(
        "lower bound computed on an over-approximate model (Unknown verdicts "
        "assumed feasible)");
  if (model.pruned > 0)
    report.exactness_caveats.push_back(
        std::to_string(model.pruned) +
        " blocked states were removed to restore the non-blocking property");
  report.wall_time_s = seconds_since(t0);
  return report;
}

MaistReport run(const PlantSpec& spec, const DriverOptions& opts) {
  return run(build_system(spec), opts);
}

std::pair<double, double> bounds_at(const PetcSystem& sys, int l,
                                    const DriverOptions& opts) {
  if (l < 1) throw std::invalid_argument("bounds_at: l must be >= 1");
  const TrafficModel model = build(sys, l, opts.feas, opts.budget, opts.workers);
  return {sys.h * min_mean_cycle(model).mean.value(),
          sys.h * max_mean_cycle(model).mean.value()};
}

}  // namespace petc
