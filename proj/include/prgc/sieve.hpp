// Copyright (c) prgc contributors.
// SPDX-License-Identifier: Apache-2.0
#ifndef PRGC_SIEVE_HPP
#define PRGC_SIEVE_HPP

#include "prgc/rg.hpp"

#include <utility>
#include <vector>

namespace prgc {

/// Faulty concurrent sieve over {2..n}: thread i runs the chain of atoms
/// u_{i,j} (j = 2..n/i), each removing the product i*j with probability p.
/// States are bitmasks over the composites still present; primes and the
/// thread indices themselves never change, so this quotient is exact and
/// shrinks the space from 2^(n-1) to 2^(#composites).
struct SieveModel {
    int n = 0;
    Rat p;
    std::vector<int> composites; // ascending; bit k of a state = composites[k] present
    std::vector<int> primes;
    StateSpacePtr space;
    int s0 = 0; // all composites present
    std::vector<int> thread_ids; // i = 2..floor(sqrt(n))
    std::vector<IpBes> threads;
    IpBes system = IpBes::zero(make_space(1)); // parallel composition of the threads
    ConvexProgram rely_base =
        ConvexProgram::skip(make_space(1)); // subset-decreasing environment
    std::optional<RelyCondition> rely;      // rely_base packaged once (transitivity cached)
    /// Per thread, the specification chain Q_{i,2} ... Q_{i,n/i} in halfspace
    /// form: remove i*j with probability at least p, never add elements.
    std::vector<std::vector<ConvexProgram>> q_chains;
    std::vector<std::vector<bool>> o_threads; // O_i: all multiples of i removed
    std::vector<bool> target;                 // intersection of the O_i
};

int sieve_isqrt(int n);
std::vector<int> sieve_composites(int n);

/// Exponents of g(p,n) per thread: fresh multiples of i not removed by any
/// smaller thread, via inclusion-exclusion over lcm multiples.
std::vector<long> sieve_g_exponents(int n);
/// The same exponents by exhaustive counting (cross-check path).
std::vector<long> sieve_g_exponents_direct(int n);

/// The two rule-derived lower bounds:
///   f(p,n) = sum_i p^(n/i - 1) - (floor(sqrt n) - 2)
///   g(p,n) = prod_i p^(fresh multiples of i)
std::pair<Rat, Rat> sieve_bounds(int n, const Rat& p);

/// Exact probability that every composite is removed under the trivial
/// environment: each composite survives k_c independent removal attempts
/// with probability (1-p)^k_c.
Rat sieve_exact(int n, const Rat& p);

SieveModel sieve_generate(int n, const Rat& p, int max_composites = 12);

/// Full-semantics cross-check: the scheduler semantics of the parallel system
/// collapses to a single distribution (all extremal policies agree because
/// the removals commute; verified, not assumed) and its mass on the target
/// equals the independence product.
Rat sieve_exact_semantics(const SieveModel& m, const SemanticsLimits& lim = {});

/// Strengthened guarantee: no atom touches a prime (structural in the
/// quotient) and every atom is subset-decreasing.
bool sieve_prime_preserving(const SieveModel& m);

/// {delta_s0, r} thd_i {r*, Q_i} for thread index ti.
Quintuple sieve_thread_quintuple(const SieveModel& m, std::size_t ti);

/// Premise of the probability-bound rule for thread ti: target O_i with
/// lower bound p^(n/i - 1).
BoundPremise sieve_thread_premise(const SieveModel& m, std::size_t ti);

} // namespace prgc

#endif
