// SPDX-License-Identifier: Apache-2.0
#include "linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace petc::linalg {

void ensure_finite(const Matrix& m, const char* name) {
  if (!m.allFinite())
    throw NumericError(std::string(name) + ": non-finite entries");
}

Matrix expm(const Matrix& a, double t) {
  if (a.rows() != a.cols())
    throw DimensionError("expm: matrix must be square");
  ensure_finite(a, "expm");
  if (!(t >= 0.0)) throw std::invalid_argument("expm: t must be >= 0");
  if (t == 0.0) return Matrix::Identity(a.rows(), a.cols());
  return (a * t).exp();
}

Matrix discretize(const Matrix& a, const Matrix& b, const Matrix& k, double h,
                  int steps) {
  const auto n = a.rows();
  if (a.cols() != n) throw DimensionError("discretize: A must be square");
  if (b.rows() != n)
    throw DimensionError("discretize: B row count must match A");
  if (k.cols() != n || k.rows() != b.cols())
    throw DimensionError("discretize: K must be m x n with m = cols(B)");
  if (steps < 1) throw std::invalid_argument("discretize: k must be >= 1");
  ensure_finite(a, "discretize.A");
  ensure_finite(b, "discretize.B");
  ensure_finite(k, "discretize.K");

  // exp([[A, I], [0, 0]] t) = [[e^{At}, integral_0^t e^{A tau} dtau], [0, I]]
  Matrix aug = Matrix::Zero(2 * n, 2 * n);
  aug.topLeftCorner(n, n) = a;
  aug.topRightCorner(n, n) = Matrix::Identity(n, n);
  const Matrix e = expm(aug, h * steps);
  return e.topLeftCorner(n, n) + e.topRightCorner(n, n) * b * k;
}

const char* to_string(Definiteness d) {
  switch (d) {
    case Definiteness::PosDef: return "posdef";
    case Definiteness::PosSemiDef: return "possemidef";
    case Definiteness::NegSemiDef: return "negsemidef";
    case Definiteness::NegDef: return "negdef";
    case Definiteness::Indefinite: return "indefinite";
  }
  return "?";
}

Definiteness definiteness(const Matrix& s, double tol) {
  if (s.rows() != s.cols())
    throw DimensionError("definiteness: matrix must be square");
  ensure_finite(s, "definiteness");
  const Matrix sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericError("definiteness: eigensolver failed");
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (lo > tol) return Definiteness::PosDef;
  if (hi < -tol) return Definiteness::NegDef;
  if (lo > -tol) return Definiteness::PosSemiDef;
  if (hi < tol) return Definiteness::NegSemiDef;
  return Definiteness::Indefinite;
}

namespace {

Matrix orthonormalize(const Matrix& v) {
  Eigen::HouseholderQR<Matrix> qr(v);
  Matrix q = qr.householderQ() * Matrix::Identity(v.rows(), v.cols());
  return q;
}

}  // namespace

EigenStructure eigen_structure(const Matrix& m, double eig_tol) {
  if (m.rows() != m.cols())
    throw DimensionError("eigen_structure: matrix must be square");
  ensure_finite(m, "eigen_structure");

  Eigen::EigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success)
    throw NumericError("eigen_structure: eigensolver did not converge");

  EigenStructure out;
  const auto& vals = es.eigenvalues();
  const auto& vecs = es.eigenvectors();
  const auto n = vals.size();
  for (Eigen::Index i = 0; i < n; ++i) out.eigenvalues.push_back(vals(i));

  double rho = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) rho = std::max(rho, std::abs(vals(i)));
  const double scale = std::max(1.0, rho);

  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (used[static_cast<std::size_t>(i)]) continue;
    const std::complex<double> lam = vals(i);
    if (std::abs(lam.imag()) <= eig_tol * scale) {
      used[static_cast<std::size_t>(i)] = true;
      Matrix v = vecs.col(i).real();
      if (v.norm() < 1e-14) v = vecs.col(i).imag();  // purely imaginary phase
      out.primitives.push_back({orthonormalize(v), {lam.real(), 0.0}});
      continue;
    }
    // Complex eigenvalue: pair with its conjugate.
    Eigen::Index partner = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      const double d = std::abs(vals(j) - std::conj(lam));
      if (d < best) {
        best = d;
        partner = j;
      }
    }
    if (partner < 0 || best > 1e-6 * scale)
      throw NumericError("eigen_structure: unpaired complex eigenvalue");
    used[static_cast<std::size_t>(i)] = true;
    used[static_cast<std::size_t>(partner)] = true;
    Matrix plane(m.rows(), 2);
    plane.col(0) = vecs.col(i).real();
    plane.col(1) = vecs.col(i).imag();
    const std::complex<double> rep =
        lam.imag() > 0 ? lam : std::conj(lam);
    out.primitives.push_back({orthonormalize(plane), rep});
  }

  for (Eigen::Index i = 0; i < n && !out.repeated; ++i)
    for (Eigen::Index j = i + 1; j < n && !out.repeated; ++j)
      if (std::abs(vals(i) - vals(j)) <= eig_tol * scale) out.repeated = true;

  return out;
}

}  // namespace petc::linalg
