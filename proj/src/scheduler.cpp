// Copyright (c) prgc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "prgc/scheduler.hpp"

#include <algorithm>

namespace prgc {

const SchedulerPolicy::Decision& SchedulerPolicy::decision(int trace_node, int state) const {
    auto it = decide_.find({trace_node, state});
    if (it == decide_.end())
        fail("policy", "policy has no decision for trace node " + std::to_string(trace_node) +
                           " at state index " + std::to_string(state));
    return it->second;
}

RunResult run_policy(const IpBes& es, const TraceSet& ts, const SchedulerPolicy& pol, int s0) {
    int nstates = es.space()->size();
    if (s0 < 0 || s0 >= nstates) fail("state-space", "initial state outside the space");

    // Validate the policy against the scheduler contract: one enabled event
    // with a non-empty label and a vertex of that label per (trace, state).
    for (int i = 0; i < ts.size(); ++i) {
        if (ts.node(i).maximal) continue;
        for (int s = 0; s < nstates; ++s) {
            const auto& d = pol.decision(i, s);
            int child = ts.extend(i, d.event);
            if (child < 0) fail("policy", "policy schedules a non-enabled event");
            const ConvexProgram& label = es.event(d.event).label;
            if (label.is_empty_at(s))
                fail("policy", "policy schedules an event whose label is EMPTY at " +
                                   es.space()->name(s));
            if (!label.at(s).contains(d.vertex))
                fail("policy", "policy distribution is not in the scheduled label");
        }
    }

    RunResult out{std::vector<SubDistribution>(), {}, SubDistribution::zero(es.space())};
    out.values.assign(static_cast<std::size_t>(ts.size()), SubDistribution::zero(es.space()));
    out.values[0] = SubDistribution(Distribution::point(es.space(), s0));

    for (int i = 1; i < ts.size(); ++i) {
        const auto& node = ts.node(i);
        const auto& parent_phi = out.values[static_cast<std::size_t>(node.parent)];
        // phi(alpha e)(s) = sum_t sigma(alpha)(e,t)(s) phi(alpha)(t); for an
        // extremal policy sigma(alpha)(e,t) is the chosen vertex when the
        // policy picks e at (alpha,t) and zero otherwise.
        SubDistribution phi = SubDistribution::zero(es.space());
        for (const auto& [t, w] : parent_phi.entries()) {
            const auto& d = pol.decision(node.parent, t);
            if (d.event != node.via) continue;
            phi.add_scaled(d.vertex, w);
        }
        out.values[static_cast<std::size_t>(i)] = std::move(phi);
    }

    // Frontier identity: traces of length n plus already-finished maximal
    // traces carry total mass exactly 1 at every depth.
    int depth = ts.max_depth();
    out.frontier_mass.assign(static_cast<std::size_t>(depth) + 1, Rat(0));
    for (int i = 0; i < ts.size(); ++i) {
        const auto& node = ts.node(i);
        Rat mass = out.values[static_cast<std::size_t>(i)].total_mass();
        out.frontier_mass[static_cast<std::size_t>(node.depth)] += mass;
        if (node.maximal)
            for (int n = node.depth + 1; n <= depth; ++n)
                out.frontier_mass[static_cast<std::size_t>(n)] += mass;
    }
    for (int i : ts.maximal_nodes()) out.outcome.add(out.values[static_cast<std::size_t>(i)]);
    return out;
}

namespace {

struct SemanticsDp {
    const IpBes& es;
    const SemanticsLimits& lim;
    std::map<std::pair<std::uint64_t, int>, ConvexSet> memo;
    std::map<std::uint64_t, std::vector<int>> enabled_memo;
    std::size_t nodes = 0;

    const std::vector<int>& enabled(std::uint64_t mask) {
        auto it = enabled_memo.find(mask);
        if (it != enabled_memo.end()) return it->second;
        return enabled_memo.emplace(mask, enabled_after(es, mask)).first->second;
    }

    const ConvexSet& outcomes(std::uint64_t mask, int s) {
        auto key = std::make_pair(mask, s);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        if (++nodes > lim.trace_cap)
            fail("explosion", "semantics configuration count exceeded cap");
        const auto& exts = enabled(mask);
        ConvexSet result = ConvexSet::point_simplex(es.space(), {s});
        if (!exts.empty()) {
            std::vector<Distribution> cands;
            for (int e : exts) {
                const ConvexProgram& label = es.event(e).label;
                if (label.is_empty_at(s)) continue;
                std::uint64_t next = mask | (1ull << e);
                label.at(s).for_each_vertex([&](const Distribution& v) {
                    // Minkowski product over the support: subtree policies are
                    // chosen independently per successor state.
                    std::vector<SubDistribution> partial{SubDistribution::zero(es.space())};
                    for (const auto& [t, w] : v.entries()) {
                        const ConvexSet& sub = outcomes(next, t);
                        std::vector<SubDistribution> grown;
                        sub.for_each_vertex([&](const Distribution& u) {
                            for (const auto& acc : partial) {
                                SubDistribution ext = acc;
                                ext.add_scaled(u, w);
                                grown.push_back(std::move(ext));
                            }
                        });
                        if (grown.size() > lim.candidate_cap)
                            fail("explosion", "semantics candidate set exceeded cap");
                        partial = std::move(grown);
                    }
                    for (const auto& acc : partial) cands.push_back(acc.to_distribution());
                });
                if (cands.size() > lim.candidate_cap)
                    fail("explosion", "semantics candidate set exceeded cap");
            }
            if (cands.empty())
                fail("feasibility", "no enabled event has a non-empty label at state " +
                                        es.space()->name(s));
            result = hull_reduce(es.space(), std::move(cands));
        }
        return memo.emplace(std::move(key), std::move(result)).first->second;
    }
};

} // namespace

ConvexSet semantics(const IpBes& es, int s0, const SemanticsLimits& lim) {
    if (es.event_count() > 64) fail("explosion", "semantics is limited to 64 events");
    if (es.event_count() == 0)
        fail("feasibility", "semantics of the empty structure is undefined");
    SemanticsDp dp{es, lim, {}, {}, 0};
    return dp.outcomes(0, s0);
}

ConvexProgram semantics_program(const IpBes& es, const SemanticsLimits& lim) {
    if (es.event_count() > 64) fail("explosion", "semantics is limited to 64 events");
    if (es.event_count() == 0)
        fail("feasibility", "semantics of the empty structure is undefined");
    SemanticsDp dp{es, lim, {}, {}, 0};
    std::vector<ConvexSet> body;
    for (int s = 0; s < es.space()->size(); ++s) body.push_back(dp.outcomes(0, s));
    return ConvexProgram::program(es.space(), std::move(body));
}

bool refines_seq(const IpBes& a, const IpBes& b, const SemanticsLimits& lim) {
    require_same_space(a.space(), b.space(), "refines_seq");
    return refines_H(semantics_program(a, lim), semantics_program(b, lim));
}

std::vector<SchedulerPolicy> enumerate_extremal_policies(const IpBes& es, const TraceSet& ts,
                                                         std::size_t cap) {
    int nstates = es.space()->size();
    struct Slot {
        int node;
        int state;
        std::vector<SchedulerPolicy::Decision> options;
    };
    std::vector<Slot> slots;
    for (int i = 0; i < ts.size(); ++i) {
        if (ts.node(i).maximal) continue;
        for (int s = 0; s < nstates; ++s) {
            Slot slot{i, s, {}};
            for (int c : ts.node(i).children) {
                int e = ts.node(c).via;
                const ConvexProgram& label = es.event(e).label;
                if (label.is_empty_at(s)) continue;
                label.at(s).for_each_vertex([&](const Distribution& v) {
                    slot.options.push_back(SchedulerPolicy::Decision{e, v});
                });
            }
            if (slot.options.empty())
                fail("feasibility",
                     "no schedulable event at a non-maximal trace (infeasible structure)");
            slots.push_back(std::move(slot));
        }
    }
    std::size_t total = 1;
    for (const auto& slot : slots) {
        total *= slot.options.size();
        if (total > cap) fail("explosion", "extremal policy enumeration exceeded cap");
    }
    std::vector<SchedulerPolicy> out;
    std::vector<std::size_t> idx(slots.size(), 0);
    for (std::size_t k = 0; k < total; ++k) {
        SchedulerPolicy pol;
        for (std::size_t j = 0; j < slots.size(); ++j)
            pol.set(slots[j].node, slots[j].state, slots[j].options[idx[j]]);
        out.push_back(std::move(pol));
        for (std::size_t j = 0; j < slots.size(); ++j) {
            if (++idx[j] < slots[j].options.size()) break;
            idx[j] = 0;
        }
    }
    return out;
}

namespace {

struct UniformDp {
    const IpBes& es;
    std::map<std::pair<std::uint64_t, int>, Distribution> memo;

    Distribution outcome(std::uint64_t mask, int s) {
        auto key = std::make_pair(mask, s);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        auto exts = enabled_after(es, mask);
        if (exts.empty()) {
            Distribution d = Distribution::point(es.space(), s);
            memo.emplace(key, d);
            return d;
        }
        std::vector<std::pair<int, const ConvexSet*>> allowed;
        for (int e : exts) {
            const ConvexProgram& label = es.event(e).label;
            if (!label.is_empty_at(s)) allowed.emplace_back(e, &label.at(s));
        }
        if (allowed.empty())
            fail("feasibility", "no schedulable event at state " + es.space()->name(s));
        SubDistribution acc = SubDistribution::zero(es.space());
        Rat event_w = make_rat(1, static_cast<long>(allowed.size()));
        for (const auto& [e, set] : allowed) {
            Rat vertex_w = event_w * make_rat(1, static_cast<long>(set->vertex_count()));
            set->for_each_vertex([&](const Distribution& v) {
                for (const auto& [t, w] : v.entries())
                    acc.add_scaled(outcome(mask | (1ull << e), t), vertex_w * w);
            });
        }
        Distribution d = acc.to_distribution();
        memo.emplace(key, d);
        return d;
    }
};

// One 64-bit draw picks the first prefix sum exceeding r / 2^64; the
// comparison is done exactly with integers.
int sample_rational(Rng& rng, const std::vector<Rat>& weights) {
    std::uint64_t r = rng.next();
    mpz_class rz = static_cast<unsigned long>(r >> 32);
    rz <<= 32;
    rz += static_cast<unsigned long>(r & 0xffffffffull);
    mpz_class two64(1);
    two64 <<= 64;
    Rat cum(0);
    for (std::size_t i = 0; i < weights.size(); ++i) {
        cum += weights[i];
        if (cum.get_num() * two64 > rz * cum.get_den()) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
}

} // namespace

Distribution uniform_policy_outcome(const IpBes& es, int s0) {
    if (es.event_count() > 64) fail("explosion", "limited to 64 events");
    UniformDp dp{es, {}};
    return dp.outcome(0, s0);
}

MonteCarloResult monte_carlo_oracle(const IpBes& es, int s0, std::uint64_t trials,
                                    std::uint64_t seed, int step_cap) {
    if (es.event_count() > 64) fail("explosion", "limited to 64 events");
    Rng rng(seed);
    MonteCarloResult res;
    res.counts.assign(static_cast<std::size_t>(es.space()->size()), 0);
    res.trials = trials;
    for (std::uint64_t k = 0; k < trials; ++k) {
        std::uint64_t mask = 0;
        int s = s0;
        int steps = 0;
        for (;;) {
            auto exts = enabled_after(es, mask);
            if (exts.empty()) break;
            if (++steps > step_cap) fail("explosion", "sampled run exceeded step cap");
            std::vector<std::pair<int, const ConvexSet*>> allowed;
            for (int e : exts) {
                const ConvexProgram& label = es.event(e).label;
                if (!label.is_empty_at(s)) allowed.emplace_back(e, &label.at(s));
            }
            if (allowed.empty())
                fail("feasibility", "no schedulable event at state " + es.space()->name(s));
            int pick = rng.uniform_int(0, static_cast<int>(allowed.size()) - 1);
            auto [e, set] = allowed[static_cast<std::size_t>(pick)];
            auto verts = set->vertex_list();
            const Distribution& v =
                verts[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(verts.size()) - 1))];
            std::vector<Rat> ws;
            std::vector<int> targets;
            for (const auto& [t, w] : v.entries()) {
                targets.push_back(t);
                ws.push_back(w);
            }
            s = targets[static_cast<std::size_t>(sample_rational(rng, ws))];
            mask |= 1ull << e;
        }
        res.counts[static_cast<std::size_t>(s)]++;
    }
    return res;
}

} // namespace prgc
