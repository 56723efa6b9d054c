// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <nlohmann/json.hpp>

#include "config.hpp"

namespace petc {

// Runs the MACE analysis for every job in the config and assembles the
// full report.
nlohmann::json run_analysis(const Config& cfg);

}  // namespace petc
