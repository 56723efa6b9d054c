// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end.  All computation goes through the petcmaist C
// API; this translation unit only parses arguments, renders tables and
// moves strings to files.
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "petcmaist.h"

namespace {

using nlohmann::json;

constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

struct ProblemDeleter {
  void operator()(petc_problem* p) const { petc_problem_free(p); }
};
using ProblemPtr = std::unique_ptr<petc_problem, ProblemDeleter>;

struct StringDeleter {
  void operator()(char* s) const { petc_string_free(s); }
};
using ApiString = std::unique_ptr<char, StringDeleter>;

int status_exit(petc_status status) {
  switch (status) {
    case PETC_OK: return 0;
    case PETC_ERR_CONFIG: return kExitConfig;
    case PETC_ERR_SOLVER: return kExitSolver;
    default: return kExitError;
  }
}

int report_failure(const char* what, petc_status status) {
  std::cerr << "error (" << what << "): " << petc_last_error() << "\n";
  return status_exit(status);
}

ProblemPtr load_problem(const std::string& config_path, int* exit_code) {
  petc_problem* raw = nullptr;
  const petc_status status = petc_problem_from_file(config_path.c_str(), &raw);
  if (status != PETC_OK) {
    *exit_code = report_failure("config", status);
    return nullptr;
  }
  *exit_code = 0;
  return ProblemPtr(raw);
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return false;
  }
  out << text;
  return true;
}

std::string config_output_path(const std::string& config_path,
                               const char* key) {
  std::ifstream in(config_path);
  if (!in) return {};
  try {
    json j = json::parse(in);
    return j.value("output", json::object()).value(key, "");
  } catch (...) {
    return {};
  }
}

std::string format_bounds(const json& row) {
  std::ostringstream os;
  os << std::setprecision(6);
  if (row.contains("maist")) {
    os << row["maist"].get<double>();
  } else {
    os << "[" << row["lower_bound"].get<double>() << ", "
       << row["upper_bound"].get<double>() << "]";
  }
  return os.str();
}

void print_table(const json& report) {
  std::printf("%-14s %4s  %-22s %-12s %9s\n", "trigger", "l", "MAIST/bounds",
              "status", "wall[s]");
  for (const auto& row : report.at("results")) {
    std::printf("%-14s %4d  %-22s %-12s %9.2f\n",
                row.at("trigger").get<std::string>().c_str(),
                row.at("final_l").get<int>(), format_bounds(row).c_str(),
                row.at("status").get<std::string>().c_str(),
                row.at("wall_time_s").get<double>());
  }
}

std::vector<double> parse_vector(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (...) {
      throw CLI::ValidationError("--x0", "expected comma-separated numbers");
    }
  }
  return out;
}

std::vector<unsigned> parse_cycle(const std::string& text) {
  std::vector<unsigned> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      const long v = std::stol(item);
      if (v < 1) throw std::out_of_range("cycle");
      out.push_back(static_cast<unsigned>(v));
    } catch (...) {
      throw CLI::ValidationError("--cycle", "expected comma-separated times >= 1");
    }
  }
  return out;
}

// State dimension straight from the config file; needed to build a zero
// initial state without instantiating the system.
int config_dimension(const std::string& config_path) {
  std::ifstream in(config_path);
  if (!in) return -1;
  try {
    json j = json::parse(in);
    if (j.contains("plant")) return static_cast<int>(j["plant"]["A"].size());
    if (j.contains("system"))
      return static_cast<int>(j["system"]["M"].at(0).size());
  } catch (...) {
  }
  return -1;
}

int cmd_analyze(const std::string& config_path, const std::string& out_path) {
  int exit_code = 0;
  const ProblemPtr problem = load_problem(config_path, &exit_code);
  if (!problem) return exit_code;

  char* raw = nullptr;
  const petc_status status = petc_analyze(problem.get(), &raw);
  if (status != PETC_OK) return report_failure("analyze", status);
  const ApiString text(raw);

  json report = json::parse(text.get());
  print_table(report);

  std::string path = out_path;
  if (path.empty()) path = config_output_path(config_path, "report");
  if (!path.empty()) {
    if (!write_file(path, text.get())) return kExitError;
    std::cout << "report written to " << path << "\n";
  }
  return 0;
}

int cmd_abstract(const std::string& config_path, unsigned depth,
                 const std::string& out_path) {
  int exit_code = 0;
  const ProblemPtr problem = load_problem(config_path, &exit_code);
  if (!problem) return exit_code;

  char* raw = nullptr;
  const petc_status status = petc_abstraction(problem.get(), depth, &raw);
  if (status != PETC_OK) return report_failure("abstract", status);
  const ApiString text(raw);

  const json model = json::parse(text.get());
  std::cout << "l=" << model.at("l") << ": " << model.at("states").size()
            << " states, " << model.at("edges").size() << " edges\n";

  std::string path = out_path;
  if (path.empty()) path = config_output_path(config_path, "model_dump");
  if (path.empty()) {
    std::cout << text.get() << "\n";
  } else {
    if (!write_file(path, text.get())) return kExitError;
    std::cout << "model written to " << path << "\n";
  }
  return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& x0_text,
                 bool zero, unsigned random_count, unsigned steps,
                 const std::string& csv_path) {
  int exit_code = 0;
  const ProblemPtr problem = load_problem(config_path, &exit_code);
  if (!problem) return exit_code;

  char* raw = nullptr;
  petc_status status = PETC_OK;
  if (random_count > 0) {
    status = petc_simulate_batch(problem.get(), random_count, steps, &raw);
  } else {
    std::vector<double> x0;
    if (zero) {
      const int dim = config_dimension(config_path);
      if (dim <= 0) {
        std::cerr << "error: cannot infer state dimension from config\n";
        return kExitConfig;
      }
      x0.assign(static_cast<std::size_t>(dim), 0.0);
    } else {
      x0 = parse_vector(x0_text);
    }
    status = petc_simulate(problem.get(), x0.data(), x0.size(), steps, &raw);
  }
  if (status != PETC_OK) return report_failure("simulate", status);
  const ApiString text(raw);

  std::string path = csv_path;
  if (path.empty()) path = config_output_path(config_path, "csv");
  if (path.empty()) {
    std::cout << text.get();
  } else {
    if (!write_file(path, text.get())) return kExitError;
    std::cout << "trace written to " << path << "\n";
  }
  return 0;
}

int cmd_verify_cycle(const std::string& config_path,
                     const std::string& cycle_text) {
  int exit_code = 0;
  const ProblemPtr problem = load_problem(config_path, &exit_code);
  if (!problem) return exit_code;

  const auto cycle = parse_cycle(cycle_text);
  char* raw = nullptr;
  const petc_status status =
      petc_verify_cycle(problem.get(), cycle.data(), cycle.size(), &raw);
  if (status != PETC_OK) return report_failure("verify-cycle", status);
  const ApiString text(raw);

  const json verdict = json::parse(text.get());
  std::cout << "cycle " << cycle_text << ": "
            << verdict.at("status").get<std::string>();
  if (verdict.contains("refusal"))
    std::cout << " (" << verdict["refusal"]["reason"].get<std::string>() << ")";
  std::cout << "\n" << text.get() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minimum average inter-sample time analysis for linear PETC"};
  app.set_version_flag("--version", petc_version());
  app.require_subcommand(1);

  std::string config_path, out_path, x0_text, cycle_text, csv_path;
  unsigned depth = 1, steps = 1000, random_count = 0;
  bool zero = false;

  auto* analyze = app.add_subcommand("analyze", "run the full MACE analysis");
  analyze->add_option("-c,--config", config_path, "config file")->required();
  analyze->add_option("-o,--output", out_path, "report JSON path");

  auto* abstract = app.add_subcommand("abstract", "build and dump a traffic model");
  abstract->add_option("-c,--config", config_path, "config file")->required();
  abstract->add_option("-l,--depth", depth, "sequence length l")->required();
  abstract->add_option("-o,--output", out_path, "model JSON path");

  auto* simulate = app.add_subcommand("simulate", "simulate the sample recurrence");
  simulate->add_option("-c,--config", config_path, "config file")->required();
  auto* x0_opt = simulate->add_option("--x0", x0_text, "initial state, comma-separated");
  auto* zero_opt = simulate->add_flag("--zero", zero, "start from the origin");
  auto* rnd_opt = simulate->add_option("--random", random_count,
                                       "number of seeded random initial states");
  simulate->add_option("--steps", steps, "number of samples (default 1000)");
  simulate->add_option("--csv", csv_path, "CSV output path");
  x0_opt->excludes(zero_opt)->excludes(rnd_opt);
  zero_opt->excludes(rnd_opt);

  auto* verify = app.add_subcommand("verify-cycle", "certify a user-supplied cycle");
  verify->add_option("-c,--config", config_path, "config file")->required();
  verify->add_option("--cycle", cycle_text, "cycle, comma-separated times")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) return cmd_analyze(config_path, out_path);
    if (abstract->parsed()) return cmd_abstract(config_path, depth, out_path);
    if (simulate->parsed()) {
      if (x0_text.empty() && !zero && random_count == 0) {
        std::cerr << "error: one of --x0, --zero, --random is required\n";
        return kExitError;
      }
      return cmd_simulate(config_path, x0_text, zero, random_count, steps,
                          csv_path);
    }
    if (verify->parsed()) return cmd_verify_cycle(config_path, cycle_text);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
