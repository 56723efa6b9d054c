// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "petc_model.hpp"

namespace petc {

// Conjunction of homogeneous quadratic constraints on nonzero x:
//   x' P x > 0 for P in strict_pos,  x' R x <= 0 for R in nonpos.
// Feasibility is decided on the unit sphere (all constraints are
// homogeneous of degree two).
struct ConeConjunction {
  std::vector<Matrix> strict_pos;
  std::vector<Matrix> nonpos;
  int dim = 0;
};

enum class FeasStatus { Sat, Unsat, Unknown };

struct FeasibilityVerdict {
  FeasStatus status = FeasStatus::Unknown;
  Vector witness;          // unit vector, meaningful iff status == Sat
  std::string backend;
  std::string diagnostic;  // populated for Unknown
};

enum class BackendChoice { Auto, AngleSweep, SphereSampling, SmtLib };

const char* to_string(BackendChoice b);
BackendChoice backend_from_string(const std::string& name);

struct FeasibilityOptions {
  BackendChoice backend = BackendChoice::Auto;
  double margin_tol = 1e-9;
  double angle_tol = 1e-6;        // radians, angle_sweep resolution
  int sample_count = 10000;       // sphere_sampling directions
  int refine_steps = 50;          // sphere_sampling local refinement
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
  std::string solver_command;     // smtlib backend; overridden by PETC_SMT_SOLVER
  double solver_timeout_s = 60.0;
};

// Constraints on x equivalent to: x realizes the inter-sample sequence.
// Position i contributes the region constraints of its symbol pulled back
// through the cumulative product W_i = M(k_{i-1})...M(k_1).
ConeConjunction pullback(const PetcSystem& sys, std::span<const int> sequence);

// True iff x satisfies every constraint: strict ones with normalized margin
// above margin_tol, nonstrict ones up to margin_tol.
bool validate_witness(const ConeConjunction& c, const Vector& x,
                      double margin_tol);

// Decide (or soundly approximate) nonemptiness.  Sat always carries a
// re-validated witness.  Unsat is only returned by complete backends
// (angle_sweep, smtlib); sphere_sampling degrades to Unknown.
FeasibilityVerdict check(const ConeConjunction& c,
                         const FeasibilityOptions& opts);

}  // namespace petc
