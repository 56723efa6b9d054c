// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <nlohmann/json.hpp>

#include "config.hpp"
#include "driver.hpp"
#include "verifier.hpp"

namespace petc {

nlohmann::json matrix_to_json(const Matrix& m);

nlohmann::json report_row(const AnalysisJob& job, const MaistReport& report);

// Full analyze report: schema docs/report.schema.json.
nlohmann::json full_report(const Config& cfg,
                           const std::vector<nlohmann::json>& rows);

nlohmann::json verify_verdict_json(const std::vector<int>& cycle,
                                   const VerifyOutcome& outcome, double h);

}  // namespace petc
