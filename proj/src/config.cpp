// SPDX-License-Identifier: Apache-2.0
#include "config.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "errors.hpp"

namespace petc {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError("config." + field + ": " + what);
}

void expect_keys(const json& j, const std::string& field,
                 const std::set<std::string>& allowed) {
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key))
      fail(field.empty() ? key : field + "." + key, "unknown key");
}

double get_number(const json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(field, "must be finite");
  return v;
}

int get_int(const json& j, const std::string& field) {
  if (!j.is_number_integer()) fail(field, "expected an integer");
  return j.get<int>();
}

Matrix get_matrix(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) fail(field, "expected a non-empty array of rows");
  const auto& first = j.front();
  if (!first.is_array() || first.empty())
    fail(field, "expected rows as non-empty arrays");
  const auto cols = first.size();
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const auto& row = j[r];
    if (!row.is_array())
      fail(field + "[" + std::to_string(r) + "]", "expected an array");
    if (row.size() != cols)
      fail(field + "[" + std::to_string(r) + "]",
           "ragged row: expected " + std::to_string(cols) + " entries, got " +
               std::to_string(row.size()));
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          get_number(row[c], field + "[" + std::to_string(r) + "][" +
                                 std::to_string(c) + "]");
  }
  return m;
}

TriggerSpec get_trigger(const json& j) {
  if (!j.is_object()) fail("plant.trigger", "expected an object");
  expect_keys(j, "plant.trigger", {"sigma", "Q"});
  const bool has_sigma = j.contains("sigma");
  const bool has_q = j.contains("Q");
  if (has_sigma == has_q)
    fail("plant.trigger", "exactly one of 'sigma' and 'Q' must be given");
  if (has_sigma) {
    const double sigma = get_number(j.at("sigma"), "plant.trigger.sigma");
    if (!(sigma > 0.0 && sigma < 1.0))
      fail("plant.trigger.sigma", "must lie in (0, 1)");
    return TriggerSpec::tabuada(sigma);
  }
  return TriggerSpec::raw(get_matrix(j.at("Q"), "plant.trigger.Q"));
}

std::string format_sigma(double sigma) {
  std::ostringstream os;
  os << "sigma=" << sigma;
  return os.str();
}

}  // namespace

std::vector<AnalysisJob> Config::jobs() const {
  std::vector<AnalysisJob> out;
  if (raw_system) {
    out.push_back({"raw_system", std::nullopt, *raw_system});
    return out;
  }
  if (!sigma_list.empty()) {
    for (const double sigma : sigma_list) {
      PlantSpec p = *plant;
      p.trigger = TriggerSpec::tabuada(sigma);
      out.push_back({format_sigma(sigma), sigma, build_system(p)});
    }
    return out;
  }
  const std::string label =
      plant->trigger.sigma ? format_sigma(*plant->trigger.sigma) : "raw_q";
  out.push_back({label, plant->trigger.sigma, build_system(*plant)});
  return out;
}

PetcSystem Config::single_system() const {
  if (raw_system) return *raw_system;
  if (sigma_list.size() > 1)
    throw ConfigError(
        "config.sigma_list: this operation needs a single trigger; use "
        "'analyze' for sweeps");
  return jobs().front().system;
}

nlohmann::json Config::resolved() const {
  json j;
  if (plant) {
    json p;
    auto mat = [](const Matrix& m) {
      json rows = json::array();
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
      }
      return rows;
    };
    p["A"] = mat(plant->a);
    p["B"] = mat(plant->b);
    p["K"] = mat(plant->k);
    if (plant->trigger.sigma)
      p["trigger"] = {{"sigma", *plant->trigger.sigma}};
    else if (plant->trigger.raw_q)
      p["trigger"] = {{"Q", mat(*plant->trigger.raw_q)}};
    p["h"] = plant->h;
    p["kbar"] = plant->kbar;
    j["plant"] = std::move(p);
    if (!sigma_list.empty()) j["sigma_list"] = sigma_list;
  } else {
    j["system"] = {{"h", raw_system->h},
                   {"kbar", raw_system->kbar},
                   {"nx", raw_system->nx}};
  }
  j["l_max"] = driver.l_max;
  j["backend"] = to_string(driver.feas.backend);
  j["solver_command"] = driver.feas.solver_command;
  j["workers"] = driver.workers;
  j["budgets"] = {{"max_states", driver.budget.max_states},
                  {"max_checks", driver.budget.max_checks},
                  {"samples", driver.feas.sample_count},
                  {"refine_steps", driver.feas.refine_steps},
                  {"candidate_cycles", driver.candidate_cycle_limit},
                  {"time_budget_s", driver.time_budget_s},
                  {"solver_timeout_s", driver.feas.solver_timeout_s}};
  j["tolerances"] = {{"psd_tol", driver.psd_tol},
                     {"eig_tol", driver.eig_tol},
                     {"margin_tol", driver.feas.margin_tol},
                     {"angle_tol", driver.feas.angle_tol}};
  j["seeds"] = {{"sphere", driver.feas.seed}, {"sim", sim_seed}};
  j["output"] = {{"report", output.report},
                 {"csv", output.csv},
                 {"model_dump", output.model_dump}};
  return j;
}

Config parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  expect_keys(j, "",
              {"plant", "system", "sigma_list", "l_max", "backend",
               "solver_command", "workers", "budgets", "tolerances", "seeds",
               "output"});

  Config cfg;
  const bool has_plant = j.contains("plant");
  const bool has_system = j.contains("system");
  if (has_plant == has_system)
    throw ConfigError("config: exactly one of 'plant' and 'system' must be given");

  if (has_plant) {
    const json& p = j.at("plant");
    if (!p.is_object()) fail("plant", "expected an object");
    expect_keys(p, "plant", {"A", "B", "K", "trigger", "h", "kbar"});
    PlantSpec spec;
    for (const char* key : {"A", "B", "K", "h", "kbar"})
      if (!p.contains(key)) fail(std::string("plant.") + key, "missing");
    spec.a = get_matrix(p.at("A"), "plant.A");
    spec.b = get_matrix(p.at("B"), "plant.B");
    spec.k = get_matrix(p.at("K"), "plant.K");
    spec.h = get_number(p.at("h"), "plant.h");
    spec.kbar = get_int(p.at("kbar"), "plant.kbar");
    if (!(spec.h > 0)) fail("plant.h", "must be > 0");
    if (spec.kbar < 1) fail("plant.kbar", "must be >= 1");

    if (j.contains("sigma_list")) {
      const json& sl = j.at("sigma_list");
      if (!sl.is_array()) fail("sigma_list", "expected an array");
      for (std::size_t i = 0; i < sl.size(); ++i) {
        const double sigma =
            get_number(sl[i], "sigma_list[" + std::to_string(i) + "]");
        if (!(sigma > 0.0 && sigma < 1.0))
          fail("sigma_list[" + std::to_string(i) + "]", "must lie in (0, 1)");
        cfg.sigma_list.push_back(sigma);
      }
      if (p.contains("trigger") && !cfg.sigma_list.empty())
        fail("sigma_list", "remove plant.trigger when sweeping sigma");
    }
    if (cfg.sigma_list.empty()) {
      if (!p.contains("trigger")) fail("plant.trigger", "missing");
      spec.trigger = get_trigger(p.at("trigger"));
    }
    cfg.plant = std::move(spec);
  } else {
    if (j.contains("sigma_list"))
      fail("sigma_list", "only valid together with 'plant'");
    const json& s = j.at("system");
    if (!s.is_object()) fail("system", "expected an object");
    expect_keys(s, "system", {"M", "N", "h", "kbar"});
    for (const char* key : {"M", "N", "h", "kbar"})
      if (!s.contains(key)) fail(std::string("system.") + key, "missing");
    const double h = get_number(s.at("h"), "system.h");
    const int kbar = get_int(s.at("kbar"), "system.kbar");
    auto list = [&](const char* key) {
      const json& arr = s.at(key);
      if (!arr.is_array()) fail(std::string("system.") + key, "expected an array");
      std::vector<Matrix> ms;
      for (std::size_t i = 0; i < arr.size(); ++i)
        ms.push_back(get_matrix(arr[i], std::string("system.") + key + "[" +
                                            std::to_string(i) + "]"));
      return ms;
    };
    cfg.raw_system = make_system(list("M"), list("N"), h, kbar);
  }

  if (j.contains("l_max")) {
    cfg.driver.l_max = get_int(j.at("l_max"), "l_max");
    if (cfg.driver.l_max < 1) fail("l_max", "must be >= 1");
  }
  if (j.contains("backend"))
    cfg.driver.feas.backend =
        backend_from_string(j.at("backend").get<std::string>());
  if (j.contains("solver_command")) {
    if (!j.at("solver_command").is_string())
      fail("solver_command", "expected a string");
    cfg.driver.feas.solver_command = j.at("solver_command").get<std::string>();
  }
  if (j.contains("workers")) {
    cfg.driver.workers = get_int(j.at("workers"), "workers");
    if (cfg.driver.workers < 1) fail("workers", "must be >= 1");
  }
  if (j.contains("budgets")) {
    const json& b = j.at("budgets");
    if (!b.is_object()) fail("budgets", "expected an object");
    expect_keys(b, "budgets",
                {"max_states", "max_checks", "samples", "refine_steps",
                 "candidate_cycles", "time_budget_s", "solver_timeout_s"});
    if (b.contains("max_states"))
      cfg.driver.budget.max_states =
          static_cast<std::size_t>(get_int(b.at("max_states"), "budgets.max_states"));
    if (b.contains("max_checks"))
      cfg.driver.budget.max_checks =
          static_cast<std::size_t>(get_int(b.at("max_checks"), "budgets.max_checks"));
    if (b.contains("samples"))
      cfg.driver.feas.sample_count = get_int(b.at("samples"), "budgets.samples");
    if (b.contains("refine_steps"))
      cfg.driver.feas.refine_steps =
          get_int(b.at("refine_steps"), "budgets.refine_steps");
    if (b.contains("candidate_cycles"))
      cfg.driver.candidate_cycle_limit =
          get_int(b.at("candidate_cycles"), "budgets.candidate_cycles");
    if (b.contains("time_budget_s"))
      cfg.driver.time_budget_s =
          get_number(b.at("time_budget_s"), "budgets.time_budget_s");
    if (b.contains("solver_timeout_s"))
      cfg.driver.feas.solver_timeout_s =
          get_number(b.at("solver_timeout_s"), "budgets.solver_timeout_s");
    if (cfg.driver.feas.sample_count < 1) fail("budgets.samples", "must be >= 1");
    if (cfg.driver.candidate_cycle_limit < 1)
      fail("budgets.candidate_cycles", "must be >= 1");
  }
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    if (!t.is_object()) fail("tolerances", "expected an object");
    expect_keys(t, "tolerances",
                {"psd_tol", "eig_tol", "margin_tol", "angle_tol"});
    auto tol = [&](const char* key, double* into) {
      if (!t.contains(key)) return;
      *into = get_number(t.at(key), std::string("tolerances.") + key);
      if (!(*into > 0)) fail(std::string("tolerances.") + key, "must be > 0");
    };
    tol("psd_tol", &cfg.driver.psd_tol);
    tol("eig_tol", &cfg.driver.eig_tol);
    tol("margin_tol", &cfg.driver.feas.margin_tol);
    tol("angle_tol", &cfg.driver.feas.angle_tol);
  }
  if (j.contains("seeds")) {
    const json& s = j.at("seeds");
    if (!s.is_object()) fail("seeds", "expected an object");
    expect_keys(s, "seeds", {"sphere", "sim"});
    if (s.contains("sphere"))
      cfg.driver.feas.seed =
          static_cast<std::uint64_t>(get_int(s.at("sphere"), "seeds.sphere"));
    if (s.contains("sim"))
      cfg.sim_seed = static_cast<std::uint64_t>(get_int(s.at("sim"), "seeds.sim"));
  }
  if (j.contains("output")) {
    const json& o = j.at("output");
    if (!o.is_object()) fail("output", "expected an object");
    expect_keys(o, "output", {"report", "csv", "model_dump"});
    auto path = [&](const char* key, std::string* into) {
      if (!o.contains(key)) return;
      if (!o.at(key).is_string())
        fail(std::string("output.") + key, "expected a string");
      *into = o.at(key).get<std::string>();
    };
    path("report", &cfg.output.report);
    path("csv", &cfg.output.csv);
    path("model_dump", &cfg.output.model_dump);
  }
  return cfg;
}

Config parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

}  // namespace petc
