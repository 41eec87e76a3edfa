// Copyright (c) prgc contributors.
// SPDX-License-Identifier: Apache-2.0
#ifndef PRGC_LINEAR_HPP
#define PRGC_LINEAR_HPP

#include "prgc/rational.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace prgc {

using RatVec = std::vector<Rat>;
using RatMatrix = std::vector<RatVec>;

/// Exact two-phase simplex over the rationals for problems in standard form
///   min c.x  subject to  A x = b, x >= 0.
/// Bland's rule (lowest index wins every tie) guarantees termination.
struct LpResult {
    bool feasible = false;
    bool bounded = true;
    Rat value;
    RatVec solution;
};

LpResult lp_solve(const RatMatrix& A, const RatVec& b, const RatVec& c);

/// Feasibility of { x >= 0 : A x = b } alone (phase 1 only).
bool lp_feasible(const RatMatrix& A, const RatVec& b);

/// All basic feasible solutions (vertices) of { x >= 0 : A x = b },
/// enumerated combinatorially; throws an explosion error past `cap` basis
/// candidates. Intended for the small lifted systems used by polytope
/// intersection, not for large programs.
std::vector<RatVec> enumerate_basic_points(const RatMatrix& A, const RatVec& b, std::size_t cap);

} // namespace prgc

#endif
