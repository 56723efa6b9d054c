// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "linalg.hpp"

namespace petc {

using linalg::Matrix;
using linalg::Vector;

// Quadratic triggering condition: either an explicit symmetric matrix Q on
// [current state; last sample], or the relative-error condition
// |x - xhat| > sigma |x| expanded to that form.
struct TriggerSpec {
  std::optional<Matrix> raw_q;
  std::optional<double> sigma;

  static TriggerSpec tabuada(double sigma) { return {std::nullopt, sigma}; }
  static TriggerSpec raw(Matrix q) { return {std::move(q), std::nullopt}; }
};

struct PlantSpec {
  Matrix a;  // n x n continuous dynamics
  Matrix b;  // n x m input matrix
  Matrix k;  // m x n state feedback
  TriggerSpec trigger;
  double h = 0.0;  // checking period, seconds
  int kbar = 0;    // maximum discrete inter-event time
};

// Derived discrete data: M(k) closed-loop transitions and N(k) triggering
// forms for k = 1..kbar.  Immutable after construction.
struct PetcSystem {
  std::vector<Matrix> m;  // m[k-1] = M(k)
  std::vector<Matrix> n;  // n[k-1] = N(k), symmetric
  double h = 0.0;
  int kbar = 0;
  int nx = 0;

  const Matrix& M(int k) const { return m[static_cast<std::size_t>(k - 1)]; }
  const Matrix& N(int k) const { return n[static_cast<std::size_t>(k - 1)]; }
};

// Expand a trigger to its 2n x 2n quadratic form.
Matrix trigger_matrix(const TriggerSpec& trigger, int nx);

PetcSystem build_system(const PlantSpec& spec);

// Direct construction from M(k), N(k) matrices (N may omit the never-read
// N(kbar) entry).
PetcSystem make_system(std::vector<Matrix> m, std::vector<Matrix> n, double h,
                       int kbar);

// Discrete triggering-time map: smallest k with x' N(k) x > 0, else kbar.
int kappa(const PetcSystem& sys, const Vector& x);

// Constraint-set view of { x : kappa(x) = k }.
struct RegionDescriptor {
  int k = 0;
  std::optional<Matrix> strict_pos;  // x' N(k) x > 0; absent when k = kbar
  std::vector<Matrix> nonpos;        // x' N(j) x <= 0 for j < k

  bool contains(const Vector& x) const;
};

RegionDescriptor region(const PetcSystem& sys, int k);

}  // namespace petc
