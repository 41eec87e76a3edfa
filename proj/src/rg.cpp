// Copyright (c) prgc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "prgc/rg.hpp"

#include <algorithm>

namespace prgc {

RelyCondition RelyCondition::from_atomic(ConvexProgram base) {
    if (base.kind() != ProgramKind::Program)
        fail("kind", "rely conditions are built from Program-kind atomic programs");
    bool tr = is_transitive(base);
    return RelyCondition(std::move(base), tr);
}

ConvexProgram RelyCondition::star_program(const StarOptions& opt) const {
    if (transitive_) return ndet_choice(ConvexProgram::skip(base_.space()), base_);
    StarOptions o = opt;
    o.allow_transitive_shortcut = false;
    return kleene_star(base_, ConvexProgram::skip(base_.space()), o);
}

IpBes RelyCondition::realize(int depth) const {
    return star_unfold(IpBes::atomic(base_, "r"), IpBes::unit(base_.space()), depth);
}

bool RelyCondition::validate_rely_law(int depth, bool include_semantics) const {
    IpBes lhs = par(realize(depth), realize(depth));
    IpBes rhs = realize(2 * depth);
    auto sim = find_t_simulation(lhs, rhs);
    if (!sim || !verify_t_simulation(lhs, rhs, *sim)) return false;
    if (include_semantics && !refines_seq(lhs, rhs)) return false;
    return true;
}

namespace {

using CostVec = std::vector<std::optional<Rat>>;

std::optional<Rat> factor_min(const ConvexProgram& factor, int s, const CostVec& cost) {
    if (factor.is_empty_at(s)) return std::nullopt;
    const ConvexSet& set = factor.at(s);
    if (set.vertex_like()) {
        std::optional<Rat> best;
        set.for_each_vertex([&](const Distribution& v) {
            Rat val = 0;
            for (const auto& [t, w] : v.entries()) {
                const auto& c = cost[static_cast<std::size_t>(t)];
                if (!c)
                    fail("composition-undefined",
                         "bound evaluation reached a vacuous continuation");
                val += w * *c;
            }
            if (!best || val < *best) best = val;
        });
        return best;
    }
    RatVec coeff;
    coeff.reserve(cost.size());
    for (const auto& c : cost) {
        if (!c) fail("composition-undefined",
                     "halfspace factor over a vacuous continuation");
        coeff.push_back(*c);
    }
    return set.minimize(coeff);
}

CostVec evaluate_cost(const BoundExpr& expr, CostVec terminal);

CostVec step_cost(const BoundStep& step, const CostVec& after) {
    std::size_t n = after.size();
    CostVec out(n);
    if (step.is_factor()) {
        for (std::size_t s = 0; s < n; ++s)
            out[s] = factor_min(*step.factor, static_cast<int>(s), after);
        return out;
    }
    std::vector<CostVec> branch_costs;
    branch_costs.reserve(step.branches.size());
    for (const auto& br : step.branches) branch_costs.push_back(evaluate_cost(*br.body, after));
    for (std::size_t s = 0; s < n; ++s) {
        std::optional<Rat> best;
        for (std::size_t b = 0; b < step.branches.size(); ++b) {
            if (step.branches[b].guard.is_empty_at(static_cast<int>(s))) continue;
            const auto& v = branch_costs[b][s];
            if (!v) continue;
            if (!best || *v < *best) best = *v;
        }
        out[s] = best;
    }
    return out;
}

CostVec evaluate_cost(const BoundExpr& expr, CostVec terminal) {
    CostVec cost = std::move(terminal);
    for (auto it = expr.steps.rbegin(); it != expr.steps.rend(); ++it) cost = step_cost(*it, cost);
    return cost;
}

} // namespace

std::optional<Rat> bound_minimize(const BoundExpr& expr, const RatVec& coeff, int s) {
    CostVec terminal;
    terminal.reserve(coeff.size());
    for (const auto& c : coeff) terminal.emplace_back(c);
    CostVec cost = evaluate_cost(expr, std::move(terminal));
    return cost[static_cast<std::size_t>(s)];
}

namespace {

struct BoundBuilder {
    ConvexProgram star;
    StateSpacePtr space;

    // (guard, body) decomposition when the operand starts with a test event.
    struct GuardSplit {
        ConvexProgram guard;
        std::optional<IpBes> body;
    };
    std::optional<GuardSplit> leading_guard(const IpBes& es) const {
        const auto& prov = es.provenance();
        if (!prov) return std::nullopt;
        if (prov->op == Provenance::Op::Atomic && es.event_count() == 1 &&
            es.event(0).label.kind() == ProgramKind::Test)
            return GuardSplit{es.event(0).label, std::nullopt};
        if (prov->op == Provenance::Op::Seq && prov->children.size() == 2) {
            const IpBes& head = prov->children[0];
            const auto& hp = head.provenance();
            if (hp && hp->op == Provenance::Op::Atomic && head.event_count() == 1 &&
                head.event(0).label.kind() == ProgramKind::Test)
                return GuardSplit{head.event(0).label, prov->children[1]};
        }
        return std::nullopt;
    }

    BoundExpr bound_of(const IpBes& es) const {
        BoundExpr out;
        emit(es, out);
        out.steps.push_back(BoundStep{star, {}});
        return out;
    }

    void emit(const IpBes& es, BoundExpr& out) const {
        const auto& prov = es.provenance();
        if (!prov)
            fail("rule-applicability",
                 "component lacks the construction history needed for rely interleaving");
        switch (prov->op) {
        case Provenance::Op::Zero:
            fail("rule-applicability", "abortive component under a rely");
        case Provenance::Op::Unit:
        case Provenance::Op::Atomic: {
            const ConvexProgram& label = es.event(0).label;
            out.steps.push_back(BoundStep{star, {}});
            if (label.kind() == ProgramKind::Test) {
                // A lone guard is a one-branch conditional; exhaustiveness is
                // checked below like any other branch step.
                BoundStep step;
                auto body = std::make_shared<BoundExpr>();
                body->steps.push_back(BoundStep{star, {}});
                step.branches.push_back(BoundBranch{label, body});
                check_exhaustive(step);
                out.steps.push_back(std::move(step));
            } else {
                out.steps.push_back(BoundStep{label, {}});
            }
            return;
        }
        case Provenance::Op::Seq:
            emit(prov->children[0], out);
            emit(prov->children[1], out);
            return;
        case Provenance::Op::Sum: {
            out.steps.push_back(BoundStep{star, {}});
            BoundStep step;
            for (const IpBes& child : prov->children) {
                auto split = leading_guard(child);
                if (split) {
                    auto body = std::make_shared<BoundExpr>();
                    if (split->body)
                        *body = bound_of(*split->body);
                    else
                        body->steps.push_back(BoundStep{star, {}});
                    step.branches.push_back(BoundBranch{split->guard, std::move(body)});
                } else {
                    auto body = std::make_shared<BoundExpr>(bound_of(child));
                    step.branches.push_back(
                        BoundBranch{ConvexProgram::test(space, std::vector<bool>(
                                                                   static_cast<std::size_t>(
                                                                       space->size()),
                                                                   true)),
                                    std::move(body)});
                }
            }
            check_exhaustive(step);
            out.steps.push_back(std::move(step));
            return;
        }
        case Provenance::Op::Par:
            fail("rule-applicability",
                 "parallel composition inside the component: compose quintuples instead");
        }
    }

    void check_exhaustive(const BoundStep& step) const {
        for (int s = 0; s < space->size(); ++s) {
            bool covered = false;
            for (const auto& br : step.branches)
                if (!br.guard.is_empty_at(s)) {
                    covered = true;
                    break;
                }
            if (!covered)
                fail("feasibility", "guarded branches do not cover state " + space->name(s));
        }
    }
};

ConvexProgram materialize_expr(const BoundExpr& expr, ConvexProgram cont, const ComposeLimits& lim) {
    ConvexProgram cur = std::move(cont);
    for (auto it = expr.steps.rbegin(); it != expr.steps.rend(); ++it) {
        if (it->is_factor()) {
            for (int s = 0; s < cur.space()->size(); ++s)
                if (!it->factor->is_empty_at(s) && !it->factor->at(s).vertex_like())
                    fail("kind", "cannot materialize a halfspace chain factor");
            cur = seq_compose(*it->factor, cur, lim);
        } else {
            ConvexProgram acc = ConvexProgram::bottom(cur.space());
            for (const auto& br : it->branches)
                acc = ndet_choice(acc, guard_then(br.guard, materialize_expr(*br.body, cur, lim)));
            cur = acc;
        }
    }
    return cur;
}

} // namespace

BoundExpr interleave_rely_expr(const RelyCondition& rely, const IpBes& es,
                               const StarOptions& star_opt) {
    require_same_space(rely.base().space(), es.space(), "interleave_rely");
    BoundBuilder builder{rely.star_program(star_opt), es.space()};
    return builder.bound_of(es);
}

ConvexProgram interleave_rely(const RelyCondition& rely, const IpBes& es, const ComposeLimits& lim,
                              const StarOptions& star_opt) {
    BoundExpr expr = interleave_rely_expr(rely, es, star_opt);
    ConvexProgram prog = materialize_expr(expr, ConvexProgram::skip(es.space()), lim);
    return prog;
}

namespace {

// Possible-support analysis: which states can carry positive mass after the
// bound runs from each start state. Decides support constraints (mu(X) = 1,
// point-simplex membership, EMPTY targets) without any numeric minimization.
using Bits = std::vector<std::uint64_t>;

Bits bits_make(int n) { return Bits(static_cast<std::size_t>((n + 63) / 64), 0); }
void bits_set(Bits& b, int i) { b[static_cast<std::size_t>(i / 64)] |= 1ull << (i % 64); }
void bits_or(Bits& a, const Bits& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] |= b[i];
}
bool bits_subset(const Bits& a, const Bits& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] & ~b[i]) return false;
    return true;
}
bool bits_empty(const Bits& a) {
    for (auto w : a)
        if (w) return false;
    return true;
}

std::vector<Bits> evaluate_reach(const BoundExpr& expr, std::vector<Bits> terminal, int n) {
    std::vector<Bits> reach = std::move(terminal);
    for (auto it = expr.steps.rbegin(); it != expr.steps.rend(); ++it) {
        std::vector<Bits> next(static_cast<std::size_t>(n), bits_make(n));
        if (it->is_factor()) {
            for (int s = 0; s < n; ++s) {
                if (it->factor->is_empty_at(s)) continue; // vacuous: no behaviour
                for (int t : it->factor->at(s).positive_mass_states())
                    bits_or(next[static_cast<std::size_t>(s)], reach[static_cast<std::size_t>(t)]);
            }
        } else {
            for (const auto& br : it->branches) {
                std::vector<Bits> body = evaluate_reach(*br.body, reach, n);
                for (int s = 0; s < n; ++s)
                    if (!br.guard.is_empty_at(s))
                        bits_or(next[static_cast<std::size_t>(s)], body[static_cast<std::size_t>(s)]);
            }
        }
        reach = std::move(next);
    }
    return reach;
}

bool all_zero_one(const RatVec& coeff) {
    for (const auto& a : coeff)
        if (a != 0 && a != 1) return false;
    return true;
}

} // namespace

RefinementOutcome bound_refines(const BoundExpr& expr, const ConvexProgram& target,
                                const ConvexProgram* restrict_to) {
    const auto& space = target.space();
    int n = space->size();
    RefinementOutcome out;

    // Support constraints go through the reach analysis; numeric constraints
    // are grouped by their coefficient vector so that each distinct objective
    // costs exactly one backward pass over the chain.
    struct MinCheck {
        int s;
        Rat rhs;
    };
    std::map<RatVec, std::vector<MinCheck>> groups;
    std::vector<std::pair<int, Bits>> support_checks; // (state, allowed support)

    for (int s = 0; s < n; ++s) {
        if (restrict_to && restrict_to->is_empty_at(s)) continue;
        if (target.is_empty_at(s)) {
            support_checks.emplace_back(s, bits_make(n)); // nothing is allowed
            continue;
        }
        const ConvexSet& q = target.at(s);
        switch (q.form()) {
        case ConvexSet::Form::PointSimplex: {
            Bits allowed = bits_make(n);
            for (int t : q.support()) bits_set(allowed, t);
            support_checks.emplace_back(s, std::move(allowed));
            break;
        }
        case ConvexSet::Form::Halfspaces: {
            if (q.is_empty()) {
                out.holds = false;
                out.witness = "state " + space->name(s) + ": target constraint set is empty";
                return out;
            }
            for (const auto& c : q.constraints()) {
                if (c.equality && c.rhs == 1 && all_zero_one(c.coeff)) {
                    Bits allowed = bits_make(n);
                    for (int t = 0; t < n; ++t)
                        if (c.coeff[static_cast<std::size_t>(t)] == 1) bits_set(allowed, t);
                    support_checks.emplace_back(s, std::move(allowed));
                    continue;
                }
                groups[c.coeff].push_back(MinCheck{s, c.rhs});
                if (c.equality) {
                    RatVec neg;
                    neg.reserve(c.coeff.size());
                    for (const auto& a : c.coeff) neg.push_back(-a);
                    groups[std::move(neg)].push_back(MinCheck{s, -c.rhs});
                }
            }
            break;
        }
        case ConvexSet::Form::Vertices:
            fail("kind", "bound_refines needs halfspace or point-simplex targets; materialize "
                         "the bound for general vertex targets");
        }
    }

    if (!support_checks.empty()) {
        std::vector<Bits> terminal;
        terminal.reserve(static_cast<std::size_t>(n));
        for (int s = 0; s < n; ++s) {
            Bits b = bits_make(n);
            bits_set(b, s);
            terminal.push_back(std::move(b));
        }
        std::vector<Bits> reach = evaluate_reach(expr, std::move(terminal), n);
        for (const auto& [s, allowed] : support_checks) {
            const Bits& r = reach[static_cast<std::size_t>(s)];
            if (bits_empty(allowed) ? !bits_empty(r) : !bits_subset(r, allowed)) {
                out.holds = false;
                out.witness = "state " + space->name(s) + ": reachable support escapes the target";
                return out;
            }
        }
    }

    for (const auto& [coeff, checks] : groups) {
        CostVec terminal;
        terminal.reserve(coeff.size());
        for (const auto& c : coeff) terminal.emplace_back(c);
        CostVec cost = evaluate_cost(expr, std::move(terminal));
        for (const auto& chk : checks) {
            const auto& v = cost[static_cast<std::size_t>(chk.s)];
            if (!v) continue; // vacuous from this state
            if (*v < chk.rhs) {
                out.holds = false;
                out.witness = "state " + space->name(chk.s) + ": constraint attains " +
                              rat_to_string(*v) + " below " + rat_to_string(chk.rhs);
                return out;
            }
        }
    }
    return out;
}

ConvexProgram guarantee_of(const IpBes& es) {
    if (es.event_count() == 0) fail("zero-guarantee", "empty structure has no guarantee");
    std::optional<ConvexProgram> acc;
    for (const auto& e : es.events()) {
        if (e.label.kind() != ProgramKind::Program) continue; // stutter events ride on skip
        acc = acc ? ndet_choice(*acc, e.label) : e.label;
    }
    if (!acc) return ConvexProgram::skip(es.space());
    return *acc;
}

bool check_guarantee(const IpBes& es, const ConvexProgram& g) {
    for (const auto& e : es.events()) {
        if (e.label.is_subidentity()) continue;
        if (!refines_H(e.label, g)) return false;
    }
    return true;
}

ConvexProgram rely_intersection(const ConvexProgram& r1, const ConvexProgram& r2, std::size_t cap) {
    require_same_space(r1.space(), r2.space(), "rely_intersection");
    if (r1.kind() != ProgramKind::Program || r2.kind() != ProgramKind::Program)
        fail("kind", "rely_intersection needs Program-kind operands");
    std::vector<std::optional<ConvexSet>> body;
    bool any = false;
    for (int s = 0; s < r1.space()->size(); ++s) {
        auto inter = intersect(r1.at(s), r2.at(s), cap);
        if (inter) any = true;
        body.push_back(std::move(inter));
    }
    if (!any) fail("empty-program", "rely intersection is empty at every state");
    ConvexProgram out = ConvexProgram::partial(r1.space(), std::move(body));
    return out.is_total() ? out.require_program() : out;
}

namespace {

std::optional<std::vector<ConvexProgram>> flatten_atom_chain(const IpBes& es) {
    const auto& prov = es.provenance();
    if (!prov) return std::nullopt;
    if ((prov->op == Provenance::Op::Atomic || prov->op == Provenance::Op::Unit) &&
        es.event_count() == 1)
        return std::vector<ConvexProgram>{es.event(0).label};
    if (prov->op == Provenance::Op::Seq && prov->children.size() == 2) {
        auto left = flatten_atom_chain(prov->children[0]);
        auto right = flatten_atom_chain(prov->children[1]);
        if (!left || !right) return std::nullopt;
        left->insert(left->end(), right->begin(), right->end());
        return left;
    }
    return std::nullopt;
}

} // namespace

Verdict check_quintuple(const Quintuple& q, const CheckOptions& opt) {
    Verdict v;
    require_same_space(q.pre.space(), q.component.space(), "check_quintuple");
    if (q.post.chain.empty()) fail("domain", "postcondition chain is empty");

    v.guarantee_ok = check_guarantee(q.component, q.guar.base());
    if (!v.guarantee_ok) v.detail += "guarantee: some label is neither a stutter nor below g; ";

    v.rely_ok = opt.rely_law_depth <= 0 ||
                q.rely.validate_rely_law(opt.rely_law_depth, opt.rely_law_semantics);
    if (!v.rely_ok) v.detail += "rely: bounded instance of R||R below R failed; ";

    const ConvexProgram* restrict_to = nullptr;
    std::optional<BoundExpr> expr;
    ConvexProgram star = q.rely.star_program(opt.star);
    {
        BoundExpr base = interleave_rely_expr(q.rely, q.component, opt.star);
        if (q.pre.kind() == ProgramKind::Test) {
            restrict_to = &q.pre;
            expr = std::move(base);
        } else if (q.pre == ConvexProgram::skip(q.pre.space())) {
            expr = std::move(base);
        } else {
            BoundExpr with_pre;
            with_pre.steps.push_back(BoundStep{q.pre, {}});
            for (auto& s : base.steps) with_pre.steps.push_back(std::move(s));
            expr = std::move(with_pre);
        }
    }

    if (q.post.chain.size() == 1) {
        const ConvexProgram& target = q.post.chain.front();
        bool needs_materialize = false;
        for (int s = 0; s < target.space()->size(); ++s)
            if (!target.is_empty_at(s) && target.at(s).form() == ConvexSet::Form::Vertices)
                needs_materialize = true;
        if (!needs_materialize) {
            RefinementOutcome r = bound_refines(*expr, target, restrict_to);
            v.refinement_ok = r.holds;
            if (!r.holds) v.detail += "refinement: " + r.witness + "; ";
        } else {
            ConvexProgram bound =
                materialize_expr(*expr, ConvexProgram::skip(q.pre.space()), opt.compose);
            bool ok = true;
            for (int s = 0; s < target.space()->size() && ok; ++s) {
                if (restrict_to && restrict_to->is_empty_at(s)) continue;
                if (bound.is_empty_at(s)) continue;
                if (target.is_empty_at(s) || !bound.at(s).subset_of(target.at(s))) {
                    ok = false;
                    v.detail += "refinement: bound escapes the target at state " +
                                target.space()->name(s) + "; ";
                }
            }
            v.refinement_ok = ok;
        }
    } else {
        // Chain postcondition Q1...Qm against a sequential chain of atoms:
        // per-step refinement u_k below Q_k plus both absorption lemmas
        // Q_k.(star) and (star).Q_k below Q_k reproduce the fused derivation.
        auto atoms = flatten_atom_chain(q.component);
        if (!atoms)
            fail("rule-applicability",
                 "chain postconditions need a purely sequential component");
        if (atoms->size() != q.post.chain.size())
            fail("rule-applicability", "postcondition chain length differs from the atom count");
        bool ok = true;
        for (std::size_t k = 0; k < atoms->size() && ok; ++k) {
            const ConvexProgram& u = (*atoms)[k];
            const ConvexProgram& qk = q.post.chain[k];
            for (int s = 0; s < u.space()->size() && ok; ++s) {
                if (u.is_empty_at(s)) continue;
                if (qk.is_empty_at(s) || !u.at(s).subset_of(qk.at(s))) {
                    ok = false;
                    v.detail += "refinement: step " + std::to_string(k) +
                                " escapes its specification at state " + u.space()->name(s) + "; ";
                }
            }
            if (!ok) break;
            BoundExpr left;
            left.steps.push_back(BoundStep{star, {}});
            left.steps.push_back(BoundStep{qk, {}});
            RefinementOutcome labs = bound_refines(left, qk, nullptr);
            BoundExpr right;
            right.steps.push_back(BoundStep{qk, {}});
            right.steps.push_back(BoundStep{star, {}});
            RefinementOutcome rabs = bound_refines(right, qk, nullptr);
            if (!labs.holds || !rabs.holds) {
                ok = false;
                v.detail += "refinement: absorption lemma failed for step " + std::to_string(k) +
                            (labs.holds ? "" : " [left: " + labs.witness + "]") +
                            (rabs.holds ? "" : " [right: " + rabs.witness + "]") + "; ";
            }
        }
        v.refinement_ok = ok;
    }

    v.valid = v.refinement_ok && v.guarantee_ok && v.rely_ok;
    if (v.valid) v.detail = "valid";
    return v;
}

ComposeResult compose_concurrent(const Quintuple& q1, const Quintuple& q2, bool post_from_second,
                                 std::size_t intersect_cap) {
    ComposeResult out;
    if (!(q1.pre == q2.pre)) {
        out.rejection = "preconditions differ";
        return out;
    }
    if (!refines_H(q1.guar.base(), q2.rely.base())) {
        out.rejection = "side condition g1 below r2 fails";
        return out;
    }
    if (!refines_H(q2.guar.base(), q1.rely.base())) {
        out.rejection = "side condition g2 below r1 fails";
        return out;
    }
    ConvexProgram meet = rely_intersection(q1.rely.base(), q2.rely.base(), intersect_cap);
    if (!meet.is_total()) {
        out.rejection = "rely intersection is empty at some state";
        return out;
    }
    Quintuple composed{q1.pre, RelyCondition::from_atomic(meet.require_program()),
                       par(q1.component, q2.component),
                       RelyCondition::from_atomic(ndet_choice(q1.guar.base(), q2.guar.base())),
                       post_from_second ? q2.post : q1.post};
    out.quintuple = std::move(composed);
    return out;
}

ProbabilityBound probability_bound(const BoundPremise& b1, const BoundPremise& b2,
                                   const CheckOptions& opt) {
    auto certify = [&](const BoundPremise& b, const char* which) {
        const auto& space = b.rely.base().space();
        RatVec coeff(static_cast<std::size_t>(space->size()), Rat(0));
        for (int s = 0; s < space->size(); ++s)
            if (b.target[static_cast<std::size_t>(s)]) coeff[static_cast<std::size_t>(s)] = 1;
        ConvexSet post = ConvexSet::halfspaces(space, {HalfspaceConstraint{coeff, b.p, false}});
        std::vector<bool> pre(static_cast<std::size_t>(space->size()), false);
        pre[static_cast<std::size_t>(b.s0)] = true;
        Quintuple q{ConvexProgram::test(space, pre), b.rely, b.component,
                    RelyCondition::from_atomic(b.guar_base),
                    PostCondition{{ConvexProgram::program(
                        space, std::vector<ConvexSet>(static_cast<std::size_t>(space->size()),
                                                      post))}}};
        Verdict v = check_quintuple(q, opt);
        if (!v.valid)
            fail("premise", std::string("premise ") + which + " not certified: " + v.detail);
    };
    certify(b1, "1");
    certify(b2, "2");
    // Cross side conditions: each guarantee base refines the other rely base.
    if (!refines_H(b1.guar_base, b2.rely.base()))
        fail("premise", "side condition g1 below r2 fails");
    if (!refines_H(b2.guar_base, b1.rely.base()))
        fail("premise", "side condition g2 below r1 fails");

    ProbabilityBound out{b1.p + b2.p - 1, {}};
    out.target.reserve(b1.target.size());
    for (std::size_t i = 0; i < b1.target.size(); ++i)
        out.target.push_back(b1.target[i] && b2.target[i]);
    return out;
}

} // namespace prgc
