// SPDX-License-Identifier: Apache-2.0
#include "verifier.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "errors.hpp"

namespace petc {

Matrix cycle_matrix(const PetcSystem& sys, std::span<const int> cycle) {
  if (cycle.empty()) throw std::invalid_argument("cycle_matrix: empty cycle");
  Matrix p = Matrix::Identity(sys.nx, sys.nx);
  for (const int k : cycle) {
    if (k < 1 || k > sys.kbar)
      throw std::invalid_argument("cycle_matrix: symbol " + std::to_string(k) +
                                  " outside 1..kbar");
    p = sys.M(k) * p;
  }
  return p;
}

std::vector<SubspaceCandidate> candidate_subspaces(
    const linalg::EigenStructure& es) {
  if (es.repeated)
    throw std::invalid_argument(
        "candidate_subspaces: repeated eigenvalues; the invariant subspaces "
        "are not spanned by eigenvector subsets");
  const int p = static_cast<int>(es.primitives.size());
  if (p == 0) return {};
  const auto rows = es.primitives.front().basis.rows();

  std::vector<SubspaceCandidate> out;
  for (unsigned mask = 1; mask < (1u << p); ++mask) {
    Eigen::Index cols = 0;
    for (int i = 0; i < p; ++i)
      if (mask & (1u << i)) cols += es.primitives[static_cast<std::size_t>(i)].basis.cols();
    SubspaceCandidate cand;
    cand.basis.resize(rows, cols);
    Eigen::Index at = 0;
    for (int i = 0; i < p; ++i) {
      if (!(mask & (1u << i))) continue;
      const auto& b = es.primitives[static_cast<std::size_t>(i)].basis;
      cand.basis.middleCols(at, b.cols()) = b;
      at += b.cols();
      cand.sources.push_back(i);
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(cand.basis);
    qr.setThreshold(1e-10);
    if (qr.rank() < cand.basis.cols()) continue;  // numerically degenerate union
    out.push_back(std::move(cand));
  }

  auto magnitude = [&es](const SubspaceCandidate& c) {
    double m = 0.0;
    for (const int i : c.sources)
      m = std::max(m, std::abs(es.primitives[static_cast<std::size_t>(i)].eigenvalue));
    return m;
  };
  std::stable_sort(out.begin(), out.end(),
                   [&](const SubspaceCandidate& a, const SubspaceCandidate& b) {
                     if (a.basis.cols() != b.basis.cols())
                       return a.basis.cols() < b.basis.cols();
                     return magnitude(a) > magnitude(b);
                   });
  return out;
}

namespace {

std::pair<double, double> sym_eig_range(const Matrix& s) {
  const Matrix sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericError("verify: eigensolver failed on a stage form");
  return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

}  // namespace

VerifyOutcome verify(const PetcSystem& sys, std::span<const int> cycle,
                     const SubspaceCandidate& cand, double psd_tol) {
  VerifyOutcome out;
  const Matrix p = cycle_matrix(sys, cycle);

  // The candidate must span an invariant subspace of the cycle matrix.
  const Matrix pv = p * cand.basis;
  const Matrix coeffs = cand.basis.colPivHouseholderQr().solve(pv);
  const double residual = (pv - cand.basis * coeffs).norm();
  if (residual > 1e-8 * std::max(1.0, p.norm())) {
    out.refusal = {"candidate does not span an invariant subspace (residual " +
                       std::to_string(residual) + ")",
                   -1, false, false};
    return out;
  }

  Matrix w = Matrix::Identity(sys.nx, sys.nx);
  std::vector<StageCheck> stages;
  for (std::size_t j = 0; j < cycle.size(); ++j) {
    const int k = cycle[j];
    const int stage = static_cast<int>(j) + 1;
    const Matrix vj = w * cand.basis;
    Eigen::ColPivHouseholderQR<Matrix> qr(vj);
    qr.setThreshold(1e-10);
    if (qr.rank() < vj.cols()) {
      out.refusal = {"subspace collapses at stage " + std::to_string(stage),
                     stage, false, false};
      return out;
    }
    StageCheck check{stage, k, 0.0, -std::numeric_limits<double>::infinity()};
    if (k < sys.kbar) {
      const auto [lo, hi] = sym_eig_range(vj.transpose() * sys.N(k) * vj);
      (void)hi;
      check.strict_min_eig = lo;
      if (!(lo > psd_tol)) {
        const bool boundary = lo > -psd_tol;
        out.refusal = {"stage " + std::to_string(stage) + ": form for N(" +
                           std::to_string(k) + ") is not positive definite" +
                           (boundary ? " (boundary case)" : ""),
                       stage, boundary, false};
        return out;
      }
    }
    for (int i = 1; i < k; ++i) {
      const auto [lo, hi] = sym_eig_range(vj.transpose() * sys.N(i) * vj);
      (void)lo;
      check.nonpos_max_eig = std::max(check.nonpos_max_eig, hi);
      if (!(hi < psd_tol)) {
        out.refusal = {"stage " + std::to_string(stage) + ": form for N(" +
                           std::to_string(i) + ") escapes the nonpositive cone",
                       stage, false, false};
        return out;
      }
    }
    stages.push_back(check);
    w = sys.M(k) * w;
  }

  out.certificate = Certificate{{cycle.begin(), cycle.end()}, cand, std::move(stages)};
  return out;
}

VerifyOutcome verify_cycle(const PetcSystem& sys, std::span<const int> cycle,
                           double psd_tol, double eig_tol) {
  if (cycle.empty()) throw std::invalid_argument("verify_cycle: empty cycle");
  VerifyOutcome last;
  last.refusal = {"no candidate subspace certified the cycle", -1, false, false};

  std::set<std::vector<int>> seen;
  std::vector<int> rotated(cycle.begin(), cycle.end());
  for (std::size_t r = 0; r < cycle.size(); ++r) {
    if (r > 0) std::rotate(rotated.begin(), rotated.begin() + 1, rotated.end());
    if (!seen.insert(rotated).second) continue;

    const Matrix p = cycle_matrix(sys, rotated);
    const auto es = linalg::eigen_structure(p, eig_tol);
    if (es.repeated) {
      // Rotations of the product are similar matrices; the spectrum cannot
      // change, so certification is refused outright.
      last.refusal = {"cycle matrix has repeated eigenvalues within tolerance; "
                      "certification unavailable for this cycle",
                      -1, false, true};
      return last;
    }
    for (const auto& cand : candidate_subspaces(es)) {
      VerifyOutcome attempt = verify(sys, rotated, cand, psd_tol);
      if (attempt.ok()) return attempt;
      if (attempt.refusal.boundary) last.refusal.boundary = true;
    }
  }
  return last;
}

}  // namespace petc
