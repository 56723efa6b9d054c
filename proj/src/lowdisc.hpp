// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "linalg.hpp"

namespace petc {

// Deterministic quasi-uniform unit-sphere points.  In the plane this is the
// golden-angle rotation; in higher dimensions a Kronecker sequence pushed
// through Box-Muller.  The seed only shifts the sequence, so identical
// (dim, count, seed) triples always reproduce the same points.
std::vector<linalg::Vector> sphere_points(int dim, int count,
                                          std::uint64_t seed);

}  // namespace petc
