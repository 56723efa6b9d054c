// SPDX-License-Identifier: Apache-2.0
#include "abstraction.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <thread>

#include <nlohmann/json.hpp>

#include "errors.hpp"

namespace petc {

namespace {

using nlohmann::json;

template <typename F>
void parallel_for(std::size_t n, int workers, F&& body) {
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int count = std::min<int>(workers, static_cast<int>(n));
  pool.reserve(static_cast<std::size_t>(count));
  for (int t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::vector<int> to_ints(const StateSeq& s) {
  return std::vector<int>(s.begin(), s.end());
}

// Domino successors of each state: the contiguous block of states whose
// (l-1)-prefix equals the state's (l-1)-suffix.  At l = 1 the suffix is
// empty and the graph is complete.
void connect(TrafficModel& m) {
  const std::size_t n = m.states.size();
  m.adj.assign(n, {});
  const std::size_t pl = static_cast<std::size_t>(m.l) - 1;
  for (std::size_t i = 0; i < n; ++i) {
    const StateSeq& s = m.states[i];
    const auto lo = std::lower_bound(
        m.states.begin(), m.states.end(), s,
        [pl](const StateSeq& st, const StateSeq& key) {
          return std::lexicographical_compare(st.begin(), st.begin() + pl,
                                              key.begin() + 1, key.end());
        });
    auto it = lo;
    for (; it != m.states.end(); ++it) {
      if (!std::equal(it->begin(), it->begin() + pl, s.begin() + 1)) break;
      m.adj[i].push_back(static_cast<int>(it - m.states.begin()));
    }
  }
}

// Iteratively remove blocked states (possible only under approximate
// feasibility verdicts); the weighted-automaton view needs every state to
// have a successor.
void prune_blocking(TrafficModel& m) {
  const std::size_t n = m.states.size();
  std::vector<int> outdeg(n);
  std::vector<std::vector<int>> radj(n);
  for (std::size_t u = 0; u < n; ++u) {
    outdeg[u] = static_cast<int>(m.adj[u].size());
    for (const int v : m.adj[u]) radj[static_cast<std::size_t>(v)].push_back(static_cast<int>(u));
  }
  std::deque<int> queue;
  std::vector<bool> removed(n, false);
  for (std::size_t u = 0; u < n; ++u)
    if (outdeg[u] == 0) queue.push_back(static_cast<int>(u));
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    if (removed[static_cast<std::size_t>(v)]) continue;
    removed[static_cast<std::size_t>(v)] = true;
    for (const int u : radj[static_cast<std::size_t>(v)])
      if (!removed[static_cast<std::size_t>(u)] && --outdeg[static_cast<std::size_t>(u)] == 0)
        queue.push_back(u);
  }
  const std::size_t gone =
      static_cast<std::size_t>(std::count(removed.begin(), removed.end(), true));
  if (gone == 0) return;
  m.pruned += gone;
  TrafficModel kept;
  kept.l = m.l;
  kept.h = m.h;
  kept.kbar = m.kbar;
  kept.alphabet = m.alphabet;
  kept.pruned = m.pruned;
  for (std::size_t u = 0; u < n; ++u) {
    if (removed[u]) continue;
    kept.states.push_back(m.states[u]);
    kept.assumed.push_back(m.assumed[u]);
  }
  if (kept.states.empty())
    throw NumericError(
        "traffic model became empty while restoring the non-blocking "
        "property");
  connect(kept);
  m = std::move(kept);
}

TrafficModel assemble(const PetcSystem& sys, int l,
                      std::vector<StateSeq> states, std::vector<bool> assumed,
                      std::vector<int> alphabet, std::size_t pruned) {
  TrafficModel m;
  m.l = l;
  m.h = sys.h;
  m.kbar = sys.kbar;
  m.states = std::move(states);
  m.assumed = std::move(assumed);
  m.alphabet = std::move(alphabet);
  m.pruned = pruned;
  connect(m);
  prune_blocking(m);
  return m;
}

// Extend every state by every feasible singleton and keep the satisfiable
// sequences.  Unknown verdicts count as feasible (over-approximation).
TrafficModel extend(const PetcSystem& sys, const std::vector<StateSeq>& base,
                    int base_l, const std::vector<int>& alphabet,
                    std::size_t pruned_so_far, const FeasibilityOptions& opts,
                    const BuildBudget& budget, int workers) {
  std::vector<StateSeq> candidates;
  candidates.reserve(base.size() * alphabet.size());
  for (const auto& s : base)
    for (const int k : alphabet) {
      StateSeq cand = s;
      cand.push_back(static_cast<Symbol>(k));
      candidates.push_back(std::move(cand));
    }
  if (candidates.size() > budget.max_checks)
    throw BudgetError("abstraction: feasibility check budget exhausted at l=" +
                      std::to_string(base_l + 1));

  std::vector<char> feasible(candidates.size(), 0);
  std::vector<char> assumed(candidates.size(), 0);
  parallel_for(candidates.size(), workers, [&](std::size_t i) {
    const auto seq = to_ints(candidates[i]);
    const auto verdict = check(pullback(sys, seq), opts);
    if (verdict.status == FeasStatus::Sat) feasible[i] = 1;
    if (verdict.status == FeasStatus::Unknown) feasible[i] = assumed[i] = 1;
  });

  std::vector<StateSeq> states;
  std::vector<bool> assumed_states;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!feasible[i]) continue;
    states.push_back(std::move(candidates[i]));
    assumed_states.push_back(assumed[i] != 0);
  }
  if (states.size() > budget.max_states)
    throw BudgetError("abstraction: state budget exhausted at l=" +
                      std::to_string(base_l + 1) + " (" +
                      std::to_string(states.size()) + " states)");
  return assemble(sys, base_l + 1, std::move(states), std::move(assumed_states),
                  alphabet, pruned_so_far);
}

}  // namespace

std::size_t TrafficModel::edge_count() const {
  std::size_t n = 0;
  for (const auto& a : adj) n += a.size();
  return n;
}

bool TrafficModel::any_assumed() const {
  return std::find(assumed.begin(), assumed.end(), true) != assumed.end();
}

std::string TrafficModel::validate() const {
  if (states.empty()) return "model has no states";
  if (!std::is_sorted(states.begin(), states.end()))
    return "states not sorted";
  if (adj.size() != states.size() || assumed.size() != states.size())
    return "ragged model arrays";
  const std::size_t pl = static_cast<std::size_t>(l) - 1;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].size() != static_cast<std::size_t>(l))
      return "state of wrong length";
    if (adj[i].empty()) return "blocked state " + std::to_string(i);
    std::size_t hits = 0;
    for (std::size_t j = 0; j < states.size(); ++j) {
      const bool domino = std::equal(states[j].begin(), states[j].begin() + pl,
                                     states[i].begin() + 1);
      const bool edge = std::binary_search(adj[i].begin(), adj[i].end(),
                                           static_cast<int>(j));
      if (domino != edge) return "domino rule violated at state " + std::to_string(i);
      if (edge) ++hits;
    }
    if (hits != adj[i].size()) return "adjacency mismatch";
  }
  return {};
}

TrafficModel build(const PetcSystem& sys, int l, const FeasibilityOptions& opts,
                   const BuildBudget& budget, int workers) {
  if (l < 1) throw std::invalid_argument("build: l must be >= 1");

  std::vector<int> alphabet;
  std::vector<bool> assumed_single;
  for (int k = 1; k <= sys.kbar; ++k) {
    const int seq[] = {k};
    const auto verdict = check(pullback(sys, seq), opts);
    if (verdict.status == FeasStatus::Unsat) continue;
    alphabet.push_back(k);
    assumed_single.push_back(verdict.status == FeasStatus::Unknown);
  }
  if (alphabet.empty())
    throw NumericError("no feasible inter-sample time: malformed system");

  std::vector<StateSeq> states;
  states.reserve(alphabet.size());
  for (const int k : alphabet) states.push_back({static_cast<Symbol>(k)});
  TrafficModel m = assemble(sys, 1, std::move(states),
                            std::move(assumed_single), alphabet, 0);
  for (int depth = 2; depth <= l; ++depth)
    m = extend(sys, m.states, m.l, m.alphabet, m.pruned, opts, budget, workers);
  return m;
}

TrafficModel refine(const TrafficModel& model, const PetcSystem& sys,
                    const FeasibilityOptions& opts, const BuildBudget& budget,
                    int workers) {
  if (model.states.empty()) throw std::invalid_argument("refine: empty model");
  return extend(sys, model.states, model.l, model.alphabet, model.pruned, opts,
                budget, workers);
}

std::string model_to_json(const TrafficModel& model) {
  json j;
  j["format"] = "petcmaist-traffic-model";
  j["version"] = 1;
  j["l"] = model.l;
  j["h"] = model.h;
  j["kbar"] = model.kbar;
  j["alphabet"] = model.alphabet;
  j["pruned_states"] = model.pruned;
  json states = json::array();
  for (std::size_t i = 0; i < model.states.size(); ++i) {
    states.push_back({{"seq", to_ints(model.states[i])},
                      {"output", model.output(static_cast<int>(i))},
                      {"assumed", static_cast<bool>(model.assumed[i])}});
  }
  j["states"] = std::move(states);
  json edges = json::array();
  for (std::size_t u = 0; u < model.adj.size(); ++u)
    for (const int v : model.adj[u])
      edges.push_back({static_cast<int>(u), v});
  j["edges"] = std::move(edges);
  return j.dump(2);
}

TrafficModel model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("model: invalid JSON: ") + e.what());
  }
  if (j.value("format", "") != "petcmaist-traffic-model")
    throw ConfigError("model: unrecognized format tag");
  TrafficModel m;
  m.l = j.at("l").get<int>();
  m.h = j.at("h").get<double>();
  m.kbar = j.at("kbar").get<int>();
  m.alphabet = j.at("alphabet").get<std::vector<int>>();
  m.pruned = j.value("pruned_states", 0u);
  for (const auto& s : j.at("states")) {
    const auto seq = s.at("seq").get<std::vector<int>>();
    StateSeq state;
    for (const int k : seq) state.push_back(static_cast<Symbol>(k));
    if (state.size() != static_cast<std::size_t>(m.l))
      throw ConfigError("model: state of wrong length");
    m.states.push_back(std::move(state));
    m.assumed.push_back(s.value("assumed", false));
  }
  if (!std::is_sorted(m.states.begin(), m.states.end()))
    throw ConfigError("model: states must be sorted");
  m.adj.assign(m.states.size(), {});
  for (const auto& e : j.at("edges")) {
    const int u = e.at(0).get<int>();
    const int v = e.at(1).get<int>();
    if (u < 0 || v < 0 || u >= static_cast<int>(m.states.size()) ||
        v >= static_cast<int>(m.states.size()))
      throw ConfigError("model: edge index out of range");
    m.adj[static_cast<std::size_t>(u)].push_back(v);
  }
  for (auto& a : m.adj) std::sort(a.begin(), a.end());
  const std::string problem = m.validate();
  if (!problem.empty()) throw ConfigError("model: " + problem);
  return m;
}

}  // namespace petc
