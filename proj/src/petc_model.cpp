// SPDX-License-Identifier: Apache-2.0
#include "petc_model.hpp"

#include "errors.hpp"

namespace petc {

Matrix trigger_matrix(const TriggerSpec& trigger, int nx) {
  if (trigger.raw_q.has_value() == trigger.sigma.has_value())
    throw ConfigError("trigger: exactly one of Q and sigma must be given");
  if (trigger.raw_q) {
    const Matrix& q = *trigger.raw_q;
    if (q.rows() != 2 * nx || q.cols() != 2 * nx)
      throw DimensionError("trigger.Q: must be 2n x 2n");
    if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-10)
      throw ConfigError("trigger.Q: not symmetric within 1e-10");
    return 0.5 * (q + q.transpose());
  }
  const double sigma = *trigger.sigma;
  if (!(sigma > 0.0 && sigma < 1.0))
    throw ConfigError("trigger.sigma: must lie in (0, 1)");
  // |x - xhat|^2 - sigma^2 |x|^2 as a form on [x; xhat]
  Matrix q = Matrix::Zero(2 * nx, 2 * nx);
  q.topLeftCorner(nx, nx) = (1.0 - sigma * sigma) * Matrix::Identity(nx, nx);
  q.topRightCorner(nx, nx) = -Matrix::Identity(nx, nx);
  q.bottomLeftCorner(nx, nx) = -Matrix::Identity(nx, nx);
  q.bottomRightCorner(nx, nx) = Matrix::Identity(nx, nx);
  return q;
}

PetcSystem build_system(const PlantSpec& spec) {
  const auto n = spec.a.rows();
  if (spec.a.cols() != n) throw DimensionError("plant.A: must be square");
  if (spec.b.rows() != n) throw DimensionError("plant.B: row count must match A");
  if (spec.k.cols() != n || spec.k.rows() != spec.b.cols())
    throw DimensionError("plant.K: must be m x n with m = cols(B)");
  if (!(spec.h > 0.0)) throw ConfigError("plant.h: must be > 0");
  if (spec.kbar < 1) throw ConfigError("plant.kbar: must be >= 1");
  linalg::ensure_finite(spec.a, "plant.A");
  linalg::ensure_finite(spec.b, "plant.B");
  linalg::ensure_finite(spec.k, "plant.K");

  const int nx = static_cast<int>(n);
  const Matrix q = trigger_matrix(spec.trigger, nx);

  PetcSystem sys;
  sys.h = spec.h;
  sys.kbar = spec.kbar;
  sys.nx = nx;
  sys.m.reserve(static_cast<std::size_t>(spec.kbar));
  sys.n.reserve(static_cast<std::size_t>(spec.kbar));
  Matrix stacked(2 * nx, nx);
  stacked.bottomRows(nx) = Matrix::Identity(nx, nx);
  for (int k = 1; k <= spec.kbar; ++k) {
    Matrix mk = linalg::discretize(spec.a, spec.b, spec.k, spec.h, k);
    stacked.topRows(nx) = mk;
    Matrix nk = stacked.transpose() * q * stacked;
    nk = 0.5 * (nk + nk.transpose());
    sys.m.push_back(std::move(mk));
    sys.n.push_back(std::move(nk));
  }
  return sys;
}

PetcSystem make_system(std::vector<Matrix> m, std::vector<Matrix> n, double h,
                       int kbar) {
  if (!(h > 0.0)) throw ConfigError("system.h: must be > 0");
  if (kbar < 1) throw ConfigError("system.kbar: must be >= 1");
  if (m.size() != static_cast<std::size_t>(kbar))
    throw ConfigError("system.M: need exactly kbar matrices");
  if (n.size() + 1 != static_cast<std::size_t>(kbar) &&
      n.size() != static_cast<std::size_t>(kbar))
    throw ConfigError("system.N: need kbar or kbar-1 matrices");
  const auto nx = m.front().rows();
  for (const auto& mk : m) {
    if (mk.rows() != nx || mk.cols() != nx)
      throw DimensionError("system.M: matrices must all be n x n");
    linalg::ensure_finite(mk, "system.M");
  }
  for (auto& nk : n) {
    if (nk.rows() != nx || nk.cols() != nx)
      throw DimensionError("system.N: matrices must all be n x n");
    linalg::ensure_finite(nk, "system.N");
    if ((nk - nk.transpose()).cwiseAbs().maxCoeff() > 1e-10)
      throw ConfigError("system.N: not symmetric within 1e-10");
    nk = 0.5 * (nk + nk.transpose());
  }
  if (n.size() + 1 == static_cast<std::size_t>(kbar))
    n.push_back(Matrix::Zero(nx, nx));  // N(kbar) is never consulted

  PetcSystem sys;
  sys.m = std::move(m);
  sys.n = std::move(n);
  sys.h = h;
  sys.kbar = kbar;
  sys.nx = static_cast<int>(nx);
  return sys;
}

int kappa(const PetcSystem& sys, const Vector& x) {
  for (int k = 1; k < sys.kbar; ++k)
    if (x.dot(sys.N(k) * x) > 0.0) return k;
  return sys.kbar;
}

bool RegionDescriptor::contains(const Vector& x) const {
  if (strict_pos && !(x.dot(*strict_pos * x) > 0.0)) return false;
  for (const auto& nj : nonpos)
    if (x.dot(nj * x) > 0.0) return false;
  return true;
}

RegionDescriptor region(const PetcSystem& sys, int k) {
  if (k < 1 || k > sys.kbar)
    throw std::invalid_argument("region: k out of range");
  RegionDescriptor d;
  d.k = k;
  if (k < sys.kbar) d.strict_pos = sys.N(k);
  for (int j = 1; j < k; ++j) d.nonpos.push_back(sys.N(j));
  return d;
}

}  // namespace petc
