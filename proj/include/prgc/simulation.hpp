// Copyright (c) prgc contributors.
// SPDX-License-Identifier: Apache-2.0
#ifndef PRGC_SIMULATION_HPP
#define PRGC_SIMULATION_HPP

#include "prgc/scheduler.hpp"

#include <optional>
#include <string>
#include <vector>

namespace prgc {

/// A t-simulation witness: the image trace (node of b's trace set) for every
/// trace of a. Total by construction.
struct TSimulation {
    std::vector<int> image;
};

/// The trace is maximal or can be completed to a maximal one using only
/// events whose labels can stutter (skip refines them).
bool is_weakly_maximal(const IpBes& es, const TraceSet& ts, int node);

/// Exhaustive deterministic search for a t-simulation from a to b: stuttering
/// collapse is tried first, then candidate events in canonical index order.
/// NONE is certified by exhaustion of all candidates.
std::optional<TSimulation> find_t_simulation(const IpBes& a, const IpBes& b,
                                             std::size_t cap = 1u << 20);

/// Clause-by-clause re-check of a witness; an independent code path from the
/// search.
bool verify_t_simulation(const IpBes& a, const IpBes& b, const TSimulation& sim);

/// Witness composition: mostly g(f(.)), patched on maximal traces whose naive
/// composite would collapse (the composite then targets a weakly maximal
/// extension instead). Returns NONE only if patching fails.
std::optional<TSimulation> compose_t_simulations(const IpBes& a, const IpBes& b, const IpBes& c,
                                                 const TSimulation& f, const TSimulation& g);

/// Random-instance suite for the structural laws of the regular operations:
/// commutativity/associativity of parallel up to renaming, star unfold at
/// matching depths, and monotonicity of +, . and || with respect to the
/// simulation preorder.
struct LawReport {
    int samples = 0;
    int simulations_found = 0;
    int monotonicity_checks = 0;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};
LawReport check_law_suite(std::uint64_t seed, int samples);

/// Bounded-depth instances of the interleaving laws for iterated relies:
///   (15) r*||r*        below r*
///   (16) r*||r'        below r*(r'.r*)
///   (17) r*||(b.E+c.F) below r*(b.(r*||E)+c.(r*||F))
///   (18) r*||(r'.E)    below r*(r'.(r*||E))
/// Each side is realized by star_unfold at a depth large enough to hold the
/// left side's behaviours; the simulation and its sequential consequence are
/// both checked.
struct RelyLawReport {
    struct Entry {
        std::string law;
        bool simulation_found = false;
        bool witness_verified = false;
        bool refines = false;
    };
    std::vector<Entry> entries;
    bool ok() const {
        for (const auto& e : entries)
            if (!e.simulation_found || !e.witness_verified || !e.refines) return false;
        return !entries.empty();
    }
};
RelyLawReport check_rely_laws(const ConvexProgram& r, const ConvexProgram& r2, const IpBes& e,
                              int depth);

/// Feasible random structures for the law/homomorphism suites: atoms, sums,
/// sequences, parallel products and if/else patterns with exhaustive guards.
IpBes random_structure(Rng& rng, const StateSpacePtr& space, int max_events);

} // namespace prgc

#endif
