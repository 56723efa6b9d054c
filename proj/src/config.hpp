// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "driver.hpp"

namespace petc {

struct OutputPaths {
  std::string report;
  std::string csv;
  std::string model_dump;
};

// One trigger to analyze: a fully built system plus its display label.
struct AnalysisJob {
  std::string label;
  std::optional<double> sigma;
  PetcSystem system;
};

struct Config {
  std::optional<PlantSpec> plant;  // trigger may be empty when sweeping sigma
  std::vector<double> sigma_list;
  std::optional<PetcSystem> raw_system;
  DriverOptions driver;
  std::uint64_t sim_seed = 1;
  OutputPaths output;

  std::vector<AnalysisJob> jobs() const;
  // The unique system for simulate/abstract/verify-cycle; throws when the
  // config sweeps several triggers.
  PetcSystem single_system() const;
  // Every option explicit, defaults filled in; embedded in reports.
  nlohmann::json resolved() const;
};

// Validates shape, types and ranges; error messages name the failing field.
Config parse_config(const nlohmann::json& j);
Config parse_config_text(const std::string& text);

}  // namespace petc
