// SPDX-License-Identifier: Apache-2.0
#include "lowdisc.hpp"

#include <cmath>
#include <numbers>

namespace petc {

namespace {

double splitmix_unit(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

// Generalized golden ratios of Roberts' R_d sequence.
std::vector<double> kronecker_alphas(int d) {
  double phi = 1.0;
  for (int it = 0; it < 64; ++it) phi = std::pow(1.0 + phi, 1.0 / (d + 1));
  std::vector<double> a(static_cast<std::size_t>(d));
  double p = 1.0 / phi;
  for (auto& ai : a) {
    ai = p;
    p /= phi;
  }
  return a;
}

}  // namespace

std::vector<linalg::Vector> sphere_points(int dim, int count,
                                          std::uint64_t seed) {
  std::vector<linalg::Vector> out;
  out.reserve(static_cast<std::size_t>(count));
  std::uint64_t st = seed;
  if (dim == 1) {
    for (int i = 0; i < count; ++i) {
      linalg::Vector v(1);
      v(0) = (i % 2 == 0) ? 1.0 : -1.0;
      out.push_back(v);
    }
    return out;
  }
  if (dim == 2) {
    const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
    const double offset = splitmix_unit(st);
    for (int i = 0; i < count; ++i) {
      const double theta =
          2.0 * std::numbers::pi * std::fmod(offset + i * golden, 1.0);
      linalg::Vector v(2);
      v << std::cos(theta), std::sin(theta);
      out.push_back(v);
    }
    return out;
  }
  // Pairs of Kronecker coordinates -> Box-Muller normals -> normalize.
  const int pairs = (dim + 1) / 2;
  const auto alphas = kronecker_alphas(2 * pairs);
  std::vector<double> offsets(alphas.size());
  for (auto& o : offsets) o = splitmix_unit(st);
  for (int i = 0; i < count; ++i) {
    linalg::Vector v(dim);
    for (int p = 0; p < pairs; ++p) {
      double u1 = std::fmod(offsets[2 * p] + (i + 1) * alphas[2 * p], 1.0);
      double u2 =
          std::fmod(offsets[2 * p + 1] + (i + 1) * alphas[2 * p + 1], 1.0);
      u1 = std::max(u1, 1e-12);
      const double r = std::sqrt(-2.0 * std::log(u1));
      const double a = 2.0 * std::numbers::pi * u2;
      if (2 * p < dim) v(2 * p) = r * std::cos(a);
      if (2 * p + 1 < dim) v(2 * p + 1) = r * std::sin(a);
    }
    const double n = v.norm();
    if (n < 1e-12) {
      v.setZero();
      v(0) = 1.0;
    } else {
      v /= n;
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace petc
