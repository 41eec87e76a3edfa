// Copyright (c) prgc contributors.
// SPDX-License-Identifier: Apache-2.0
#ifndef PRGC_SCHEDULER_HPP
#define PRGC_SCHEDULER_HPP

#include "prgc/event_structure.hpp"
#include "prgc/rng.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace prgc {

/// An extremal scheduler: at every (trace, state) it puts weight 1 on one
/// enabled event and picks one vertex of that event's label. Extremal
/// policies generate the hull of all scheduler outcomes because the sequential
/// behaviour is affine in each local weight and distribution choice.
class SchedulerPolicy {
  public:
    struct Decision {
        int event = -1;
        Distribution vertex;
    };

    void set(int trace_node, int state, Decision d) {
        decide_.insert_or_assign({trace_node, state}, std::move(d));
    }
    const Decision& decision(int trace_node, int state) const;
    bool has(int trace_node, int state) const { return decide_.count({trace_node, state}) > 0; }
    std::size_t size() const { return decide_.size(); }

  private:
    std::map<std::pair<int, int>, Decision> decide_;
};

/// The complete run of a policy from one initial state: the per-trace
/// subdistributions, the mass on the frontier at each depth (each must be
/// exactly 1) and the outcome summed over maximal traces.
struct RunResult {
    std::vector<SubDistribution> values;
    std::vector<Rat> frontier_mass;
    SubDistribution outcome;
};

RunResult run_policy(const IpBes& es, const TraceSet& ts, const SchedulerPolicy& pol, int s0);

struct SemanticsLimits {
    std::size_t trace_cap = 1u << 20;
    std::size_t candidate_cap = 1u << 20;
};

/// The exact convex set of scheduler outcomes from s0, computed by backward
/// induction over (executed-event set, state) configurations with hull
/// reduction at every node. History-dependent choices make subtrees
/// independent, so the hull combines through a Minkowski product over the
/// successor states.
ConvexSet semantics(const IpBes& es, int s0, const SemanticsLimits& lim = {});

/// semantics tabulated over every initial state.
ConvexProgram semantics_program(const IpBes& es, const SemanticsLimits& lim = {});

/// Sequential refinement of event structures through their semantics.
bool refines_seq(const IpBes& a, const IpBes& b, const SemanticsLimits& lim = {});

/// Every extremal policy of a trace set (product over (trace, state) slots of
/// the enabled event x label vertex options); explosion error past cap.
std::vector<SchedulerPolicy> enumerate_extremal_policies(const IpBes& es, const TraceSet& ts,
                                                         std::size_t cap);

/// Exact outcome of the uniformly randomizing scheduler (uniform over allowed
/// events, uniform over label vertices) from s0.
Distribution uniform_policy_outcome(const IpBes& es, int s0);

/// Stochastic cross-check of the semantics: empirical final-state counts of
/// the uniform random policy. Deterministic for a fixed seed; never feeds a
/// verification verdict.
struct MonteCarloResult {
    std::vector<std::uint64_t> counts; // per state
    std::uint64_t trials = 0;
};
MonteCarloResult monte_carlo_oracle(const IpBes& es, int s0, std::uint64_t trials,
                                    std::uint64_t seed, int step_cap = 1 << 16);

} // namespace prgc

#endif
