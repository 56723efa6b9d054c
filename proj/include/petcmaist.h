/* SPDX-License-Identifier: Apache-2.0 */
/*
 * petcmaist -- minimum average inter-sample time analysis for linear PETC
 * systems.  C interface: opaque problem handles, status codes, and
 * heap-allocated result strings (JSON or CSV) released with
 * petc_string_free().  On any non-OK status, petc_last_error() returns a
 * human-readable message for the calling thread.
 */
#ifndef PETCMAIST_H
#define PETCMAIST_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum petc_status {
  PETC_OK = 0,
  PETC_ERR_INVALID_ARGUMENT = 1, /* bad pointer, range, or call contract */
  PETC_ERR_CONFIG = 2,           /* config text failed schema validation */
  PETC_ERR_DIMENSION = 3,        /* matrix dimensions inconsistent */
  PETC_ERR_NUMERIC = 4,          /* eigensolver or other numeric failure */
  PETC_ERR_BUDGET = 5,           /* state/check budget exhausted */
  PETC_ERR_SOLVER = 6,           /* external SMT solver failure */
  PETC_ERR_INTERNAL = 7
} petc_status;

/* A validated analysis problem: system description plus options. */
typedef struct petc_problem petc_problem;

const char* petc_version(void);

/* Message for the most recent failure on this thread; never NULL. */
const char* petc_last_error(void);

/* Parse and validate a JSON configuration (see docs/config-format.md). */
petc_status petc_problem_from_json(const char* text, petc_problem** out);
petc_status petc_problem_from_file(const char* path, petc_problem** out);
void petc_problem_free(petc_problem* problem);

/* Run the full MACE analysis for every trigger in the configuration.
 * *out receives a JSON report (docs/report.schema.json). */
petc_status petc_analyze(const petc_problem* problem, char** out);

/* Build the depth-l traffic model and serialize it (docs/model-format.md). */
petc_status petc_abstraction(const petc_problem* problem, unsigned depth,
                             char** out);

/* Simulate one trajectory from x0 (length dim, may be the zero vector).
 * *out receives CSV rows: step,symbol,running_average. */
petc_status petc_simulate(const petc_problem* problem, const double* x0,
                          size_t dim, unsigned steps, char** out);

/* Simulate `count` trajectories from deterministic sphere points.
 * *out receives CSV rows: traj,step,symbol,running_average. */
petc_status petc_simulate_batch(const petc_problem* problem, unsigned count,
                                unsigned steps, char** out);

/* Check whether a cycle of discrete inter-sample times is a certified
 * periodic subspace solution.  *out receives a JSON verdict. */
petc_status petc_verify_cycle(const petc_problem* problem,
                              const unsigned* cycle, size_t len, char** out);

void petc_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* PETCMAIST_H */
