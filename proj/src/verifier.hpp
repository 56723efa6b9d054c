// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "petc_model.hpp"

namespace petc {

struct SubspaceCandidate {
  Matrix basis;              // n x m, full column rank
  std::vector<int> sources;  // indices of the primitive subspaces spanned
};

struct StageCheck {
  int stage = 0;   // 1-based position in the cycle
  int symbol = 0;  // inter-sample time at this stage
  double strict_min_eig = 0.0;   // lambda_min of V_j' N(k_j) V_j (k_j < kbar)
  double nonpos_max_eig = 0.0;   // worst lambda_max over the j < k_j checks
};

struct Certificate {
  std::vector<int> cycle;  // rotation that passed
  SubspaceCandidate subspace;
  std::vector<StageCheck> stages;
};

struct Refusal {
  std::string reason;
  int stage = -1;
  bool boundary = false;     // failed only by semidefiniteness on a strict stage
  bool assumption1 = false;  // repeated eigenvalues of the cycle matrix
};

struct VerifyOutcome {
  std::optional<Certificate> certificate;
  Refusal refusal;  // meaningful when !certificate

  bool ok() const { return certificate.has_value(); }
};

// Ordered product M(k_J)...M(k_2)M(k_1): position 1 applies first.
Matrix cycle_matrix(const PetcSystem& sys, std::span<const int> cycle);

// All nonempty unions of primitive invariant subspaces, cheapest (lowest
// dimension) first, ties by eigenvalue magnitude descending.  Throws if the
// eigenstructure has repeated eigenvalues.
std::vector<SubspaceCandidate> candidate_subspaces(
    const linalg::EigenStructure& es);

// Prop. of the subspace method: V certifies the cycle when every stage image
// W_j V lies strictly inside its symbol's triggering region (definite forms
// on the pushed-forward basis).
VerifyOutcome verify(const PetcSystem& sys, std::span<const int> cycle,
                     const SubspaceCandidate& cand, double psd_tol);

// Full certification attempt: every distinct rotation of the cycle, every
// candidate subspace of that rotation's cycle matrix.
VerifyOutcome verify_cycle(const PetcSystem& sys, std::span<const int> cycle,
                           double psd_tol, double eig_tol);

}  // namespace petc
