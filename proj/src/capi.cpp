// SPDX-License-Identifier: Apache-2.0
#include "petcmaist.h"

#include <cstring>
#include <fstream>
#include <sstream>

#include "analysis.hpp"
#include "errors.hpp"
#include "lowdisc.hpp"
#include "report.hpp"
#include "sim_oracle.hpp"

struct petc_problem {
  petc::Config config;
};

namespace {

thread_local std::string g_last_error = "no error";

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) return nullptr;
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

petc_status fail(petc_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

template <typename F>
petc_status guarded(F&& body) {
  try {
    return body();
  } catch (const petc::ConfigError& e) {
    return fail(PETC_ERR_CONFIG, e.what());
  } catch (const petc::DimensionError& e) {
    return fail(PETC_ERR_DIMENSION, e.what());
  } catch (const petc::BudgetError& e) {
    return fail(PETC_ERR_BUDGET, e.what());
  } catch (const petc::SolverError& e) {
    return fail(PETC_ERR_SOLVER, e.what());
  } catch (const petc::NumericError& e) {
    return fail(PETC_ERR_NUMERIC, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(PETC_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(PETC_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PETC_ERR_INTERNAL, "unknown error");
  }
}

petc_status deliver(const std::string& text, char** out) {
  *out = dup_string(text);
  if (!*out) return fail(PETC_ERR_INTERNAL, "allocation failed");
  return PETC_OK;
}

}  // namespace

extern "C" {

const char* petc_version(void) { return "0.1.0"; }

const char* petc_last_error(void) { return g_last_error.c_str(); }

petc_status petc_problem_from_json(const char* text, petc_problem** out) {
  if (!text || !out)
    return fail(PETC_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto problem = std::make_unique<petc_problem>();
    problem->config = petc::parse_config_text(text);
    *out = problem.release();
    return PETC_OK;
  });
}

petc_status petc_problem_from_file(const char* path, petc_problem** out) {
  if (!path || !out)
    return fail(PETC_ERR_INVALID_ARGUMENT, "null argument");
  std::ifstream in(path);
  if (!in)
    return fail(PETC_ERR_CONFIG,
                std::string("cannot open config file: ") + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return petc_problem_from_json(buf.str().c_str(), out);
}

void petc_problem_free(petc_problem* problem) { delete problem; }

petc_status petc_analyze(const petc_problem* problem, char** out) {
  if (!problem || !out)
    return fail(PETC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    return deliver(petc::run_analysis(problem->config).dump(2), out);
  });
}

petc_status petc_abstraction(const petc_problem* problem, unsigned depth,
                             char** out) {
  if (!problem || !out)
    return fail(PETC_ERR_INVALID_ARGUMENT, "null argument");
  if (depth < 1)
    return fail(PETC_ERR_INVALID_ARGUMENT, "depth must be >= 1");
  return guarded([&] {
    const auto sys = problem->config.single_system();
    const auto& d = problem->config.driver;
    const auto model = petc::build(sys, static_cast<int>(depth), d.feas,
                                   d.budget, d.workers);
    return deliver(petc::model_to_json(model), out);
  });
}

petc_status petc_simulate(const petc_problem* problem, const double* x0,
                          size_t dim, unsigned steps, char** out) {
  if (!problem || !out || (!x0 && dim > 0))
    return fail(PETC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto sys = problem->config.single_system();
    if (dim != static_cast<size_t>(sys.nx))
      return fail(PETC_ERR_DIMENSION, "x0 has wrong dimension");
    petc::Vector v(sys.nx);
    for (int i = 0; i < sys.nx; ++i) v(i) = x0[static_cast<size_t>(i)];
    const auto traj = petc::simulate(sys, v, static_cast<int>(steps));
    return deliver(petc::trace_csv(traj, sys.h), out);
  });
}

petc_status petc_simulate_batch(const petc_problem* problem, unsigned count,
                                unsigned steps, char** out) {
  if (!problem || !out)
    return fail(PETC_ERR_INVALID_ARGUMENT, "null argument");
  if (count < 1)
    return fail(PETC_ERR_INVALID_ARGUMENT, "count must be >= 1");
  return guarded([&] {
    const auto sys = problem->config.single_system();
    const auto points = petc::sphere_points(sys.nx, static_cast<int>(count),
                                            problem->config.sim_seed);
    std::ostringstream os;
    os << "traj,step,symbol,running_average\n";
    for (unsigned t = 0; t < count; ++t) {
      const auto traj = petc::simulate(sys, points[t], static_cast<int>(steps));
      long long sum = 0;
      for (std::size_t i = 0; i < traj.symbols.size(); ++i) {
        sum += traj.symbols[i];
        os << t << ',' << i << ',' << traj.symbols[i] << ','
           << sys.h * static_cast<double>(sum) / static_cast<double>(i + 1)
           << '\n';
      }
    }
    return deliver(os.str(), out);
  });
}

petc_status petc_verify_cycle(const petc_problem* problem,
                              const unsigned* cycle, size_t len, char** out) {
  if (!problem || !out || !cycle)
    return fail(PETC_ERR_INVALID_ARGUMENT, "null argument");
  if (len == 0)
    return fail(PETC_ERR_INVALID_ARGUMENT, "cycle must be non-empty");
  return guarded([&] {
    const auto sys = problem->config.single_system();
    std::vector<int> ks;
    ks.reserve(len);
    for (size_t i = 0; i < len; ++i) {
      if (cycle[i] < 1 || static_cast<int>(cycle[i]) > sys.kbar)
        return fail(PETC_ERR_INVALID_ARGUMENT,
                    "cycle symbol outside 1..kbar");
      ks.push_back(static_cast<int>(cycle[i]));
    }
    const auto& d = problem->config.driver;
    const auto outcome = petc::verify_cycle(sys, ks, d.psd_tol, d.eig_tol);
    return deliver(petc::verify_verdict_json(ks, outcome, sys.h).dump(2), out);
  });
}

void petc_string_free(char* s) { std::free(s); }

}  // extern "C"
