// SPDX-License-Identifier: Apache-2.0
#include "report.hpp"

namespace petc {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

json rational_json(const Rational& r) {
  return {{"num", r.num}, {"den", r.den}};
}

json certificate_json(const Certificate& cert) {
  json stages = json::array();
  for (const auto& s : cert.stages) {
    json stage = {{"stage", s.stage}, {"symbol", s.symbol}};
    if (s.symbol != 0) stage["strict_min_eig"] = s.strict_min_eig;
    stage["nonpos_max_eig"] = s.nonpos_max_eig;
    stages.push_back(std::move(stage));
  }
  return {{"cycle", cert.cycle},
          {"basis", matrix_to_json(cert.subspace.basis)},
          {"stage_margins", std::move(stages)}};
}

}  // namespace

json report_row(const AnalysisJob& job, const MaistReport& report) {
  json row;
  row["trigger"] = job.label;
  if (job.sigma) row["sigma"] = *job.sigma;
  row["status"] = to_string(report.status);
  if (report.maist) row["maist"] = *report.maist;
  if (report.maist_mean) row["maist_rational"] = rational_json(*report.maist_mean);
  row["lower_bound"] = report.lower_bound;
  row["upper_bound"] = report.upper_bound;
  row["final_l"] = report.final_l;
  row["cycle"] = report.cycle;
  if (report.certificate)
    row["certificate"] = certificate_json(*report.certificate);
  row["exactness_caveats"] = report.exactness_caveats;
  json per_l = json::array();
  for (const auto& t : report.per_l)
    per_l.push_back({{"l", t.l},
                     {"states", t.states},
                     {"lower_mean", rational_json(t.lower_mean)},
                     {"upper_mean", rational_json(t.upper_mean)},
                     {"mac", t.mac}});
  row["per_l"] = std::move(per_l);
  row["wall_time_s"] = report.wall_time_s;
  return row;
}

json full_report(const Config& cfg, const std::vector<json>& rows) {
  json j;
  j["schema_version"] = 1;
  j["generator"] = "petcmaist";
  j["config"] = cfg.resolved();
  j["results"] = rows;
  return j;
}

json verify_verdict_json(const std::vector<int>& cycle,
                         const VerifyOutcome& outcome, double h) {
  json j;
  j["cycle"] = cycle;
  long long sum = 0;
  for (const int k : cycle) sum += k;
  const Rational mean(sum, static_cast<long long>(cycle.size()));
  j["cycle_mean"] = rational_json(mean);
  j["cycle_value"] = h * mean.value();
  if (outcome.ok()) {
    j["status"] = "certified";
    j["certificate"] = certificate_json(*outcome.certificate);
  } else {
    j["status"] = "refused";
    j["refusal"] = {{"reason", outcome.refusal.reason},
                    {"stage", outcome.refusal.stage},
                    {"boundary", outcome.refusal.boundary},
                    {"assumption1", outcome.refusal.assumption1}};
  }
  return j;
}

}  // namespace petc
