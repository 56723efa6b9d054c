// SPDX-License-Identifier: Apache-2.0
#include "analysis.hpp"

#include "report.hpp"

namespace petc {

nlohmann::json run_analysis(const Config& cfg) {
  std::vector<nlohmann::json> rows;
  for (const auto& job : cfg.jobs())
    rows.push_back(report_row(job, run(job.system, cfg.driver)));
  return full_report(cfg, rows);
}

}  // namespace petc
