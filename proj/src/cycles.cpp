// SPDX-License-Identifier: Apache-2.0
#include "cycles.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <optional>

#include "errors.hpp"

namespace petc {

namespace {

constexpr long long kInf = std::numeric_limits<long long>::max() / 4;

// Full D/parent tables are kept for components up to this size, where the
// back-pointer cycle recovery runs; larger components fall back to the
// reduced-cost recovery below.
constexpr int kBackpointerLimit = 1024;

std::vector<int> tarjan_scc(const WeightedGraph& g, int* count_out) {
  const int n = g.size();
  std::vector<int> comp(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n)),
      num(static_cast<std::size_t>(n), -1);
  std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
  std::vector<int> stack;
  std::vector<std::pair<int, std::size_t>> call;
  int counter = 0, comp_count = 0;
  for (int root = 0; root < n; ++root) {
    if (num[static_cast<std::size_t>(root)] != -1) continue;
    call.emplace_back(root, 0);
    while (!call.empty()) {
      auto& [v, pi] = call.back();
      if (pi == 0) {
        num[static_cast<std::size_t>(v)] = low[static_cast<std::size_t>(v)] = counter++;
        stack.push_back(v);
        on_stack[static_cast<std::size_t>(v)] = true;
      }
      if (pi < g.adj[static_cast<std::size_t>(v)].size()) {
        const int u = g.adj[static_cast<std::size_t>(v)][pi++];
        if (num[static_cast<std::size_t>(u)] == -1) {
          call.emplace_back(u, 0);
        } else if (on_stack[static_cast<std::size_t>(u)]) {
          low[static_cast<std::size_t>(v)] =
              std::min(low[static_cast<std::size_t>(v)], num[static_cast<std::size_t>(u)]);
        }
      } else {
        if (low[static_cast<std::size_t>(v)] == num[static_cast<std::size_t>(v)]) {
          for (;;) {
            const int u = stack.back();
            stack.pop_back();
            on_stack[static_cast<std::size_t>(u)] = false;
            comp[static_cast<std::size_t>(u)] = comp_count;
            if (u == v) break;
          }
          ++comp_count;
        }
        const int child = v;
        call.pop_back();
        if (!call.empty()) {
          const int parent = call.back().first;
          low[static_cast<std::size_t>(parent)] =
              std::min(low[static_cast<std::size_t>(parent)], low[static_cast<std::size_t>(child)]);
        }
      }
    }
  }
  *count_out = comp_count;
  return comp;
}

// a/b < c/d on nonnegative denominators.
bool ratio_less(long long a, long long b, long long c, long long d) {
  return static_cast<__int128>(a) * d < static_cast<__int128>(c) * b;
}

struct SccKarp {
  Rational mu;
  std::vector<int> members;           // global node ids, local index order
  std::vector<std::vector<int>> radj; // local predecessor lists
  int argmin_local = -1;              // vertex attaining the min-max
  std::vector<long long> dist_flat;   // (n+1) x n table, kept when small
  std::vector<int> parent_flat;
  bool tables_kept = false;

  long long& dist(int k, int v) { return dist_flat[static_cast<std::size_t>(k) * members.size() + static_cast<std::size_t>(v)]; }
  int& parent(int k, int v) { return parent_flat[static_cast<std::size_t>(k) * members.size() + static_cast<std::size_t>(v)]; }
};

// Karp's recurrence on one strongly connected component: D_k(v) = least
// weight of a walk of exactly k edges from the source, with the min-mean
// value min_v max_k (D_n(v) - D_k(v)) / (n - k).
std::optional<SccKarp> karp_scc(const WeightedGraph& g,
                                const std::vector<int>& comp, int c) {
  SccKarp out;
  const int n_all = g.size();
  std::vector<int> local(static_cast<std::size_t>(n_all), -1);
  for (int v = 0; v < n_all; ++v)
    if (comp[static_cast<std::size_t>(v)] == c) {
      local[static_cast<std::size_t>(v)] = static_cast<int>(out.members.size());
      out.members.push_back(v);
    }
  const int n = static_cast<int>(out.members.size());
  bool has_edge = false;
  out.radj.assign(static_cast<std::size_t>(n), {});
  for (int lu = 0; lu < n; ++lu)
    for (const int v : g.adj[static_cast<std::size_t>(out.members[static_cast<std::size_t>(lu)])])
      if (comp[static_cast<std::size_t>(v)] == c) {
        out.radj[static_cast<std::size_t>(local[static_cast<std::size_t>(v)])].push_back(lu);
        has_edge = true;
      }
  if (!has_edge) return std::nullopt;  // single vertex without self-loop

  out.tables_kept = n <= kBackpointerLimit;
  std::vector<long long> prev(static_cast<std::size_t>(n), kInf), cur(static_cast<std::size_t>(n));
  prev[0] = 0;  // source = first member
  if (out.tables_kept) {
    out.dist_flat.assign(static_cast<std::size_t>(n + 1) * static_cast<std::size_t>(n), kInf);
    out.parent_flat.assign(static_cast<std::size_t>(n + 1) * static_cast<std::size_t>(n), -1);
    out.dist(0, 0) = 0;
  }
  // max_k table needs all D_k; when tables are dropped, track the running
  // max ratio per vertex instead, which needs D_n last -- so store rows in
  // a rolling pair plus per-vertex max snapshots of D_k.
  std::vector<std::vector<long long>> rows;
  if (!out.tables_kept) rows.reserve(static_cast<std::size_t>(n) + 1);
  if (!out.tables_kept) rows.push_back(prev);

  for (int k = 1; k <= n; ++k) {
    for (int v = 0; v < n; ++v) {
      long long best = kInf;
      int arg = -1;
      for (const int u : out.radj[static_cast<std::size_t>(v)]) {
        if (prev[static_cast<std::size_t>(u)] >= kInf) continue;
        const long long cand =
            prev[static_cast<std::size_t>(u)] +
            g.weight[static_cast<std::size_t>(out.members[static_cast<std::size_t>(u)])];
        if (cand < best) {
          best = cand;
          arg = u;
        }
      }
      cur[static_cast<std::size_t>(v)] = best;
      if (out.tables_kept) {
        out.dist(k, v) = best;
        out.parent(k, v) = arg;
      }
    }
    prev = cur;
    if (!out.tables_kept) rows.push_back(prev);
  }

  bool found = false;
  long long best_num = 0, best_den = 1;
  for (int v = 0; v < n; ++v) {
    const long long dn = out.tables_kept ? out.dist(n, v) : rows[static_cast<std::size_t>(n)][static_cast<std::size_t>(v)];
    if (dn >= kInf) continue;
    bool any = false;
    long long num = 0, den = 1;
    for (int k = 0; k < n; ++k) {
      const long long dk = out.tables_kept ? out.dist(k, v) : rows[static_cast<std::size_t>(k)][static_cast<std::size_t>(v)];
      if (dk >= kInf) continue;
      const long long cn = dn - dk, cd = n - k;
      if (!any || ratio_less(num, den, cn, cd)) {
        num = cn;
        den = cd;
        any = true;
      }
    }
    if (!any) continue;
    if (!found || ratio_less(num, den, best_num, best_den)) {
      best_num = num;
      best_den = den;
      out.argmin_local = v;
      found = true;
    }
  }
  if (!found) return std::nullopt;
  out.mu = Rational(best_num, best_den);
  return out;
}

Rational cycle_mean(const WeightedGraph& g, const std::vector<int>& nodes) {
  long long sum = 0;
  for (const int v : nodes) sum += g.weight[static_cast<std::size_t>(v)];
  return Rational(sum, static_cast<long long>(nodes.size()));
}

// Walk back the parent pointers from the argmin vertex and splice out
// cycles one at a time; exact mean comparison selects the minimum one (the
// original rule of taking any cycle on this walk is wrong in general).
std::optional<std::vector<int>> backpointer_cycle(const WeightedGraph& g,
                                                  SccKarp& scc) {
  const int n = static_cast<int>(scc.members.size());
  std::vector<int> walk(static_cast<std::size_t>(n) + 1, -1);
  int v = scc.argmin_local;
  for (int k = n; k >= 0; --k) {
    walk[static_cast<std::size_t>(k)] = v;
    if (k > 0) v = scc.parent(k, v);
  }
  std::vector<int> stack;
  std::vector<int> pos(static_cast<std::size_t>(n), -1);
  for (const int node : walk) {
    if (pos[static_cast<std::size_t>(node)] >= 0) {
      const int at = pos[static_cast<std::size_t>(node)];
      std::vector<int> cyc(stack.begin() + at, stack.end());
      std::vector<int> global;
      global.reserve(cyc.size());
      for (const int lv : cyc)
        global.push_back(scc.members[static_cast<std::size_t>(lv)]);
      if (cycle_mean(g, global) == scc.mu) return global;
      while (static_cast<int>(stack.size()) > at + 1) {
        pos[static_cast<std::size_t>(stack.back())] = -1;
        stack.pop_back();
      }
      continue;  // node stays on the stack at position `at`
    }
    pos[static_cast<std::size_t>(node)] = static_cast<int>(stack.size());
    stack.push_back(node);
  }
  return std::nullopt;
}

// Shortest-path potentials for weights W(u->v) = den*w(u) - num.  With
// num/den the global minimum mean, every cycle has nonnegative W, reduced
// costs d(u)+W-d(v) are nonnegative everywhere, and the cycles built from
// zero-reduced-cost edges are exactly the minimum-mean cycles.
std::vector<long long> zero_potentials(const WeightedGraph& g,
                                       const Rational& mu) {
  const int n = g.size();
  std::vector<long long> d(static_cast<std::size_t>(n), 0);
  std::deque<int> queue;
  std::vector<bool> queued(static_cast<std::size_t>(n), true);
  for (int v = 0; v < n; ++v) queue.push_back(v);
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    queued[static_cast<std::size_t>(u)] = false;
    const long long wu =
        mu.den * static_cast<long long>(g.weight[static_cast<std::size_t>(u)]) - mu.num;
    for (const int v : g.adj[static_cast<std::size_t>(u)]) {
      if (d[static_cast<std::size_t>(u)] + wu < d[static_cast<std::size_t>(v)]) {
        d[static_cast<std::size_t>(v)] = d[static_cast<std::size_t>(u)] + wu;
        if (!queued[static_cast<std::size_t>(v)]) {
          queued[static_cast<std::size_t>(v)] = true;
          queue.push_back(v);
        }
      }
    }
  }
  return d;
}

WeightedGraph zero_subgraph(const WeightedGraph& g, const Rational& mu) {
  const auto d = zero_potentials(g, mu);
  WeightedGraph z;
  z.weight = g.weight;
  z.adj.assign(static_cast<std::size_t>(g.size()), {});
  for (int u = 0; u < g.size(); ++u) {
    const long long wu =
        mu.den * static_cast<long long>(g.weight[static_cast<std::size_t>(u)]) - mu.num;
    for (const int v : g.adj[static_cast<std::size_t>(u)])
      if (d[static_cast<std::size_t>(u)] + wu == d[static_cast<std::size_t>(v)])
        z.adj[static_cast<std::size_t>(u)].push_back(v);
  }
  return z;
}

std::optional<std::vector<int>> any_cycle(const WeightedGraph& g) {
  const int n = g.size();
  std::vector<int> color(static_cast<std::size_t>(n), 0);  // 0 white 1 gray 2 black
  std::vector<int> stack_nodes;
  std::vector<std::pair<int, std::size_t>> call;
  for (int root = 0; root < n; ++root) {
    if (color[static_cast<std::size_t>(root)] != 0) continue;
    call.emplace_back(root, 0);
    while (!call.empty()) {
      auto& [v, pi] = call.back();
      if (pi == 0) {
        color[static_cast<std::size_t>(v)] = 1;
        stack_nodes.push_back(v);
      }
      if (pi < g.adj[static_cast<std::size_t>(v)].size()) {
        const int u = g.adj[static_cast<std::size_t>(v)][pi++];
        if (color[static_cast<std::size_t>(u)] == 0) {
          call.emplace_back(u, 0);
        } else if (color[static_cast<std::size_t>(u)] == 1) {
          const auto it =
              std::find(stack_nodes.begin(), stack_nodes.end(), u);
          return std::vector<int>(it, stack_nodes.end());
        }
      } else {
        color[static_cast<std::size_t>(v)] = 2;
        stack_nodes.pop_back();
        call.pop_back();
      }
    }
  }
  return std::nullopt;
}

std::vector<int> canonical_rotation(std::vector<int> nodes) {
  const auto it = std::min_element(nodes.begin(), nodes.end());
  std::rotate(nodes.begin(), it, nodes.end());
  return nodes;
}

CycleResult solve(const WeightedGraph& g, bool maximize) {
  if (g.size() == 0) throw std::invalid_argument("cycle search: empty graph");
  WeightedGraph work = g;
  if (maximize)
    for (auto& w : work.weight) w = -w;

  int comp_count = 0;
  const auto comp = tarjan_scc(work, &comp_count);
  std::optional<SccKarp> best;
  for (int c = 0; c < comp_count; ++c) {
    auto r = karp_scc(work, comp, c);
    if (!r) continue;
    if (!best || r->mu < best->mu) best = std::move(r);
  }
  if (!best)
    throw std::invalid_argument("cycle search: graph has no cycle");

  std::optional<std::vector<int>> cyc;
  if (best->tables_kept) cyc = backpointer_cycle(work, *best);
  if (!cyc) cyc = any_cycle(zero_subgraph(work, best->mu));
  if (!cyc) throw NumericError("cycle recovery failed");

  CycleResult out;
  out.nodes = canonical_rotation(*cyc);
  out.mean = maximize ? -best->mu : best->mu;
  out.scaled = out.mean.value();
  out.polarity = maximize ? CycleResult::Polarity::Max : CycleResult::Polarity::Min;
  return out;
}

// Johnson-style simple cycle enumeration, restricted to the zero-subgraph
// so every reported cycle attains the minimum mean.
void johnson_cycles(const WeightedGraph& z, std::size_t limit,
                    std::vector<std::vector<int>>* out) {
  const int n = z.size();
  std::vector<bool> blocked(static_cast<std::size_t>(n), false);
  std::vector<std::vector<int>> block_map(static_cast<std::size_t>(n));
  std::vector<int> path;

  std::function<bool(int, int)> circuit = [&](int v, int start) -> bool {
    bool found = false;
    path.push_back(v);
    blocked[static_cast<std::size_t>(v)] = true;
    for (const int w : z.adj[static_cast<std::size_t>(v)]) {
      if (w < start) continue;  // canonical start: smallest node in cycle
      if (out->size() >= limit) break;
      if (w == start) {
        out->push_back(path);
        found = true;
      } else if (!blocked[static_cast<std::size_t>(w)]) {
        if (circuit(w, start)) found = true;
      }
    }
    if (found) {
      // unblock
      std::vector<int> stack{v};
      while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        if (!blocked[static_cast<std::size_t>(u)]) continue;
        blocked[static_cast<std::size_t>(u)] = false;
        for (const int w : block_map[static_cast<std::size_t>(u)]) stack.push_back(w);
        block_map[static_cast<std::size_t>(u)].clear();
      }
    } else {
      for (const int w : z.adj[static_cast<std::size_t>(v)]) {
        if (w < start) continue;
        auto& lst = block_map[static_cast<std::size_t>(w)];
        if (std::find(lst.begin(), lst.end(), v) == lst.end()) lst.push_back(v);
      }
    }
    path.pop_back();
    return found;
  };

  for (int s = 0; s < n && out->size() < limit; ++s) {
    std::fill(blocked.begin(), blocked.end(), false);
    for (auto& lst : block_map) lst.clear();
    circuit(s, s);
  }
}

}  // namespace

WeightedGraph as_graph(const TrafficModel& model) {
  WeightedGraph g;
  g.weight.reserve(model.states.size());
  for (std::size_t i = 0; i < model.states.size(); ++i)
    g.weight.push_back(model.output(static_cast<int>(i)));
  g.adj = model.adj;
  return g;
}

CycleResult min_mean_cycle(const WeightedGraph& g) { return solve(g, false); }
CycleResult max_mean_cycle(const WeightedGraph& g) { return solve(g, true); }

std::vector<CycleResult> enumerate_min_cycles(const WeightedGraph& g,
                                              std::size_t limit) {
  if (limit == 0)
    throw std::invalid_argument("enumerate_min_cycles: zero limit");
  const CycleResult base = min_mean_cycle(g);
  const WeightedGraph z = zero_subgraph(g, base.mean);
  std::vector<std::vector<int>> raw;
  johnson_cycles(z, limit, &raw);
  std::vector<CycleResult> out;
  for (auto& nodes : raw) {
    CycleResult r;
    r.nodes = canonical_rotation(std::move(nodes));
    r.mean = cycle_mean(g, r.nodes);
    r.scaled = r.mean.value();
    r.polarity = CycleResult::Polarity::Min;
    out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(), [](const CycleResult& a, const CycleResult& b) {
    if (a.nodes.size() != b.nodes.size()) return a.nodes.size() < b.nodes.size();
    return a.nodes < b.nodes;
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const CycleResult& a, const CycleResult& b) {
                          return a.nodes == b.nodes;
                        }),
            out.end());
  return out;
}

namespace {

CycleResult with_scale(CycleResult r, double h) {
  r.scaled = h * r.mean.value();
  return r;
}

}  // namespace

CycleResult min_mean_cycle(const TrafficModel& model) {
  return with_scale(min_mean_cycle(as_graph(model)), model.h);
}

CycleResult max_mean_cycle(const TrafficModel& model) {
  return with_scale(max_mean_cycle(as_graph(model)), model.h);
}

std::vector<CycleResult> enumerate_min_cycles(const TrafficModel& model,
                                              std::size_t limit) {
  auto all = enumerate_min_cycles(as_graph(model), limit);
  for (auto& r : all) r = with_scale(std::move(r), model.h);
  return all;
}

std::vector<int> cycle_symbols(const TrafficModel& model,
                               const CycleResult& cycle) {
  std::vector<int> out;
  out.reserve(cycle.nodes.size());
  for (const int v : cycle.nodes) out.push_back(model.output(v));
  return out;
}

}  // namespace petc
