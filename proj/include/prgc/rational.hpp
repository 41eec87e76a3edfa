// Copyright (c) prgc contributors.
// SPDX-License-Identifier: Apache-2.0
#ifndef PRGC_RATIONAL_HPP
#define PRGC_RATIONAL_HPP

#include <gmpxx.h>

#include <string>

namespace prgc {

/// Exact rational scalar. Every probability, weight and constraint bound in
/// the toolkit is a Rat; no floating point enters any verdict.
using Rat = mpq_class;

/// mpq_class(num, den) does not canonicalize; this does.
inline Rat make_rat(long num, long den = 1) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

/// Parses "3/4", "2", "0.25" or "-1/3" into an exact rational.
Rat rat_from_string(const std::string& text);

/// Canonical exact rendering: "3/4", integers without denominator.
std::string rat_to_string(const Rat& q);

/// Advisory decimal rendering, 6 places, round half away from zero.
std::string rat_to_decimal(const Rat& q);

/// q must lie in [0,1]; throws a domain error otherwise.
void require_probability(const Rat& q, const std::string& what);

} // namespace prgc

#endif
