// SPDX-License-Identifier: Apache-2.0
#include "feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "errors.hpp"
#include "lowdisc.hpp"
#include "smtlib.hpp"

namespace petc {

const char* to_string(BackendChoice b) {
  switch (b) {
    case BackendChoice::Auto: return "auto";
    case BackendChoice::AngleSweep: return "angle_sweep";
    case BackendChoice::SphereSampling: return "sphere_sampling";
    case BackendChoice::SmtLib: return "smtlib";
  }
  return "?";
}

BackendChoice backend_from_string(const std::string& name) {
  if (name == "auto") return BackendChoice::Auto;
  if (name == "angle_sweep") return BackendChoice::AngleSweep;
  if (name == "sphere_sampling") return BackendChoice::SphereSampling;
  if (name == "smtlib") return BackendChoice::SmtLib;
  throw ConfigError("backend: unknown value '" + name + "'");
}

ConeConjunction pullback(const PetcSystem& sys, std::span<const int> sequence) {
  if (sequence.empty())
    throw std::invalid_argument("pullback: empty sequence");
  ConeConjunction c;
  c.dim = sys.nx;
  Matrix w = Matrix::Identity(sys.nx, sys.nx);
  for (const int k : sequence) {
    if (k < 1 || k > sys.kbar)
      throw std::invalid_argument("pullback: symbol " + std::to_string(k) +
                                  " outside 1..kbar");
    if (k < sys.kbar) {
      Matrix p = w.transpose() * sys.N(k) * w;
      c.strict_pos.push_back(0.5 * (p + p.transpose()));
    }
    for (int j = 1; j < k; ++j) {
      Matrix p = w.transpose() * sys.N(j) * w;
      c.nonpos.push_back(0.5 * (p + p.transpose()));
    }
    w = sys.M(k) * w;
  }
  return c;
}

namespace {

double norm_scale(const Matrix& p) { return std::max(1.0, p.norm()); }

// Worst shifted score over all constraints; feasible-with-margin iff > 0.
double min_score(const ConeConjunction& c, const Vector& x, double margin_tol) {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& p : c.strict_pos)
    worst = std::min(worst, x.dot(p * x) / norm_scale(p) - margin_tol);
  for (const auto& p : c.nonpos)
    worst = std::min(worst, margin_tol - x.dot(p * x) / norm_scale(p));
  return worst;
}

bool satisfied_at(const ConeConjunction& c, const Vector& x, double margin_tol,
                  double* strict_margin_out) {
  double strict_margin = std::numeric_limits<double>::infinity();
  for (const auto& p : c.strict_pos) {
    const double q = x.dot(p * x) / norm_scale(p);
    if (!(q > 0.0)) return false;
    strict_margin = std::min(strict_margin, q);
  }
  for (const auto& p : c.nonpos) {
    const double q = x.dot(p * x) / norm_scale(p);
    if (q > margin_tol) return false;
  }
  if (strict_margin_out) *strict_margin_out = strict_margin;
  return true;
}

constexpr double kPi = std::numbers::pi;

// One trigonometric quadratic q(theta) = a0 + r cos(2 theta - psi) per
// constraint; sign changes on [0, pi) are exactly the arc endpoints below.
struct TrigQuadratic {
  double a0, r, psi;
};

TrigQuadratic trig_form(const Matrix& p) {
  const double a0 = 0.5 * (p(0, 0) + p(1, 1));
  const double b = 0.5 * (p(0, 0) - p(1, 1));
  const double cc = 0.5 * (p(0, 1) + p(1, 0));
  return {a0, std::hypot(b, cc), std::atan2(cc, b)};
}

FeasibilityVerdict angle_sweep(const ConeConjunction& c,
                               const FeasibilityOptions& opts) {
  FeasibilityVerdict v;
  v.backend = "angle_sweep";
  std::vector<double> boundaries;
  for (int pass = 0; pass < 2; ++pass) {
    const auto& list = pass == 0 ? c.strict_pos : c.nonpos;
    const bool strict = pass == 0;
    for (const auto& p : list) {
      const TrigQuadratic t = trig_form(p);
      if (t.r < 1e-300) {
        const bool full = strict ? (t.a0 > 0.0) : (t.a0 <= 0.0);
        if (!full) {
          v.status = FeasStatus::Unsat;
          return v;
        }
        continue;
      }
      const double cosv = -t.a0 / t.r;
      if (strict ? (cosv >= 1.0) : (cosv < -1.0)) {
        v.status = FeasStatus::Unsat;  // constraint holds nowhere
        return v;
      }
      if (strict ? (cosv <= -1.0) : (cosv >= 1.0)) continue;  // everywhere
      const double alpha = std::acos(std::clamp(cosv, -1.0, 1.0));
      double t1 = std::fmod((t.psi - alpha) / 2.0, kPi);
      double t2 = std::fmod((t.psi + alpha) / 2.0, kPi);
      if (t1 < 0) t1 += kPi;
      if (t2 < 0) t2 += kPi;
      boundaries.push_back(t1);
      boundaries.push_back(t2);
    }
  }

  std::vector<double> candidates;
  if (boundaries.empty()) {
    candidates.push_back(0.0);
  } else {
    std::sort(boundaries.begin(), boundaries.end());
    boundaries.erase(std::unique(boundaries.begin(), boundaries.end()),
                     boundaries.end());
    for (std::size_t i = 0; i < boundaries.size(); ++i) {
      const double lo = boundaries[i];
      const double hi = i + 1 < boundaries.size() ? boundaries[i + 1]
                                                  : boundaries.front() + kPi;
      if (hi - lo >= opts.angle_tol) candidates.push_back(0.5 * (lo + hi));
      candidates.push_back(lo);  // closed-constraint boundaries may be all
    }
  }

  double best_margin = -std::numeric_limits<double>::infinity();
  Vector best;
  for (const double theta : candidates) {
    Vector x(2);
    x << std::cos(theta), std::sin(theta);
    double strict_margin = 0.0;
    if (!satisfied_at(c, x, opts.margin_tol, &strict_margin)) continue;
    if (strict_margin > best_margin) {
      best_margin = strict_margin;
      best = x;
    }
  }
  if (best.size() == 0) {
    v.status = FeasStatus::Unsat;
    return v;
  }
  if (!c.strict_pos.empty() && best_margin <= opts.margin_tol) {
    v.status = FeasStatus::Unknown;
    v.diagnostic = "feasible region thinner than margin_tol";
    return v;
  }
  v.status = FeasStatus::Sat;
  v.witness = best;
  return v;
}

FeasibilityVerdict sphere_sampling(const ConeConjunction& c,
                                   const FeasibilityOptions& opts) {
  FeasibilityVerdict v;
  v.backend = "sphere_sampling";
  const auto pts = sphere_points(c.dim, opts.sample_count, opts.seed);
  Vector best = pts.empty() ? Vector::Unit(c.dim, 0) : pts.front();
  double best_score = min_score(c, best, opts.margin_tol);
  for (const auto& x : pts) {
    const double s = min_score(c, x, opts.margin_tol);
    if (s > best_score) {
      best_score = s;
      best = x;
    }
  }
  // Local margin-maximizing refinement around the best sample.
  const auto dirs = sphere_points(c.dim, 2 * c.dim + 4, opts.seed + 1);
  double step = 0.5;
  for (int it = 0; it < opts.refine_steps; ++it) {
    bool improved = false;
    for (const auto& d : dirs) {
      for (const double sgn : {1.0, -1.0}) {
        Vector y = (best + sgn * step * d).normalized();
        const double s = min_score(c, y, opts.margin_tol);
        if (s > best_score) {
          best_score = s;
          best = y;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
    if (step < 1e-12) break;
  }
  if (best_score > 0.0 && validate_witness(c, best, opts.margin_tol)) {
    v.status = FeasStatus::Sat;
    v.witness = best;
    return v;
  }
  v.status = FeasStatus::Unknown;
  v.diagnostic = "no feasible direction found (best score " +
                 std::to_string(best_score) + ")";
  return v;
}

}  // namespace

bool validate_witness(const ConeConjunction& c, const Vector& x,
                      double margin_tol) {
  if (x.size() != c.dim) return false;
  const double n = x.norm();
  if (!(n > 0.0) || !x.allFinite()) return false;
  const Vector u = x / n;
  for (const auto& p : c.strict_pos)
    if (!(u.dot(p * u) / norm_scale(p) > margin_tol)) return false;
  for (const auto& p : c.nonpos)
    if (u.dot(p * u) / norm_scale(p) > margin_tol) return false;
  return true;
}

FeasibilityVerdict check(const ConeConjunction& c,
                         const FeasibilityOptions& opts) {
  for (const auto& p : c.strict_pos) linalg::ensure_finite(p, "conjunction");
  for (const auto& p : c.nonpos) linalg::ensure_finite(p, "conjunction");
  BackendChoice backend = opts.backend;
  if (backend == BackendChoice::Auto)
    backend = c.dim == 2 ? BackendChoice::AngleSweep
                         : BackendChoice::SphereSampling;
  switch (backend) {
    case BackendChoice::AngleSweep:
      if (c.dim != 2)
        throw ConfigError("angle_sweep backend requires a planar system");
      return angle_sweep(c, opts);
    case BackendChoice::SphereSampling:
      return sphere_sampling(c, opts);
    case BackendChoice::SmtLib:
      return smt::check_smtlib(c, opts);
    case BackendChoice::Auto: break;
  }
  throw ConfigError("check: unresolved backend");
}

}  // namespace petc
