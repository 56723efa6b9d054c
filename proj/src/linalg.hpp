// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace petc::linalg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Throws NumericError if any entry is NaN or infinite.
void ensure_finite(const Matrix& m, const char* name);

// e^{A t} for square A, t >= 0.
Matrix expm(const Matrix& a, double t);

// Closed-loop transition over k checking periods:
//   M(k) = e^{A h k} + (integral_0^{hk} e^{A tau} dtau) B K,
// computed through the augmented block exponential so that singular A needs
// no special casing.
Matrix discretize(const Matrix& a, const Matrix& b, const Matrix& k, double h,
                  int steps);

enum class Definiteness { PosDef, PosSemiDef, NegSemiDef, NegDef, Indefinite };

const char* to_string(Definiteness d);

// Classification of the symmetrized input by eigenvalue signs with
// threshold tol.
Definiteness definiteness(const Matrix& s, double tol);

// A primitive real invariant subspace: the span of one real eigenvector
// (one column) or of the real/imaginary parts of a complex-conjugate
// eigenvector pair (two columns).  Columns are orthonormalized.
struct PrimitiveSubspace {
  Matrix basis;
  std::complex<double> eigenvalue;  // representative (positive imaginary part)
};

struct EigenStructure {
  std::vector<std::complex<double>> eigenvalues;
  std::vector<PrimitiveSubspace> primitives;
  bool repeated = false;  // two eigenvalues coincide within eig_tol * scale
};

EigenStructure eigen_structure(const Matrix& m, double eig_tol = 1e-8);

}  // namespace petc::linalg
