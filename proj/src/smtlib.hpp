// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include "feasibility.hpp"

namespace petc::smt {

// Exact SMT-LIB real literal for a finite double (decimal expansion of the
// binary fraction; negatives wrapped as (- ...)).
std::string real_literal(double v);

// QF_NRA script for the conjunction: one declare-const per dimension,
// the quadratic inequalities, the unit-sphere normalization, check-sat.
std::string emit_script(const ConeConjunction& c, bool request_model);

struct SolverRun {
  bool started = false;
  bool timed_out = false;
  int exit_code = -1;
  std::string output;
};

// Run `command script_path` through /bin/sh with a wall-clock timeout.
SolverRun run_solver(const std::string& command, const std::string& script,
                     double timeout_s);

std::optional<FeasStatus> parse_status(const std::string& solver_output);

// Model values for x_1..x_dim if the output contains a parseable
// (define-fun x_i () Real ...) for every coordinate.
std::optional<linalg::Vector> parse_model(const std::string& solver_output,
                                          int dim);

FeasibilityVerdict check_smtlib(const ConeConjunction& c,
                                const FeasibilityOptions& opts);

}  // namespace petc::smt
