// SPDX-License-Identifier: Apache-2.0
#include "sim_oracle.hpp"

#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace petc {

Trajectory simulate(const PetcSystem& sys, const Vector& x0, int steps) {
  if (x0.size() != sys.nx)
    throw DimensionError("simulate: x0 has wrong dimension");
  if (!x0.allFinite()) throw NumericError("simulate: non-finite x0");
  if (steps < 0) throw std::invalid_argument("simulate: negative step count");

  Trajectory traj;
  traj.symbols.reserve(static_cast<std::size_t>(steps));
  const double n0 = x0.norm();
  if (n0 == 0.0) {
    traj.initial = x0;
    traj.symbols.assign(static_cast<std::size_t>(steps), sys.kbar);
    return traj;
  }
  Vector x = x0 / n0;
  traj.initial = x;
  for (int i = 0; i < steps; ++i) {
    const int k = kappa(sys, x);
    traj.symbols.push_back(k);
    x = sys.M(k) * x;
    const double n = x.norm();
    if (n == 0.0) {
      // mapped exactly onto the origin; it stays there and triggers at kbar
      traj.symbols.insert(traj.symbols.end(),
                          static_cast<std::size_t>(steps - i - 1), sys.kbar);
      break;
    }
    x /= n;
  }
  return traj;
}

double empirical_aist(const Trajectory& traj, double h) {
  const auto steps = traj.symbols.size();
  if (steps == 0) throw std::invalid_argument("empirical_aist: empty trajectory");
  long long sum = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < steps; ++n) {
    sum += traj.symbols[n];
    if (n + 1 <= steps / 2) continue;
    best = std::min(best, h * static_cast<double>(sum) /
                              static_cast<double>(n + 1));
  }
  return best;
}

double empirical_aist(const PetcSystem& sys, const Vector& x0, int steps) {
  if (steps < 1) throw std::invalid_argument("empirical_aist: steps must be >= 1");
  return empirical_aist(simulate(sys, x0, steps), sys.h);
}

std::optional<std::pair<int, int>> pattern_detect(const Trajectory& traj,
                                                  int max_period,
                                                  int max_prefix) {
  const int len = static_cast<int>(traj.symbols.size());
  if (len < 4)
    throw std::invalid_argument("pattern_detect: trajectory too short");
  if (max_period < 0) max_period = len / 4;
  if (max_prefix < 0) max_prefix = len / 2;

  std::optional<std::pair<int, int>> best;
  for (int p = 1; p <= max_period; ++p) {
    int d = 0;  // minimal prefix after which the tail is p-periodic
    for (int i = len - p - 1; i >= 0; --i) {
      if (traj.symbols[static_cast<std::size_t>(i)] !=
          traj.symbols[static_cast<std::size_t>(i + p)]) {
        d = i + 1;
        break;
      }
    }
    if (d > max_prefix) continue;
    if (d + 2 * p > len) continue;  // need two full repetitions in view
    if (!best || std::pair(d, p) < *best) best = std::pair(d, p);
  }
  return best;
}

std::string trace_csv(const Trajectory& traj, double h) {
  std::ostringstream os;
  os << "step,symbol,running_average\n";
  long long sum = 0;
  for (std::size_t i = 0; i < traj.symbols.size(); ++i) {
    sum += traj.symbols[i];
    os << i << ',' << traj.symbols[i] << ','
       << h * static_cast<double>(sum) / static_cast<double>(i + 1) << '\n';
  }
  return os.str();
}

}  // namespace petc
