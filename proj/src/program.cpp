// Copyright (c) prgc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "prgc/program.hpp"

#include "prgc/rng.hpp"

#include <algorithm>

namespace prgc {

ConvexProgram ConvexProgram::program(StateSpacePtr space, std::vector<ConvexSet> body) {
    if (static_cast<int>(body.size()) != space->size())
        fail("state-space", "program body arity mismatch");
    std::vector<std::optional<ConvexSet>> entries;
    entries.reserve(body.size());
    for (auto& c : body) {
        require_same_space(c.space(), space, "program");
        if (c.is_empty()) fail("empty-set", "program entry must be a non-empty set");
        entries.emplace_back(std::move(c));
    }
    return ConvexProgram(std::move(space), ProgramKind::Program, std::move(entries));
}

ConvexProgram ConvexProgram::test(StateSpacePtr space, const std::vector<bool>& holds) {
    if (static_cast<int>(holds.size()) != space->size())
        fail("state-space", "test predicate arity mismatch");
    std::vector<std::optional<ConvexSet>> entries;
    for (int s = 0; s < space->size(); ++s) {
        if (holds[static_cast<std::size_t>(s)])
            entries.emplace_back(ConvexSet::point_simplex(space, {s}));
        else
            entries.emplace_back(std::nullopt);
    }
    return ConvexProgram(std::move(space), ProgramKind::Test, std::move(entries));
}

ConvexProgram ConvexProgram::skip(StateSpacePtr space) {
    std::vector<ConvexSet> body;
    for (int s = 0; s < space->size(); ++s) body.push_back(ConvexSet::point_simplex(space, {s}));
    return program(std::move(space), std::move(body));
}

ConvexProgram ConvexProgram::bottom(StateSpacePtr space) {
    std::vector<bool> holds(static_cast<std::size_t>(space->size()), false);
    return test(std::move(space), holds);
}

ConvexProgram ConvexProgram::partial(StateSpacePtr space,
                                     std::vector<std::optional<ConvexSet>> body) {
    if (static_cast<int>(body.size()) != space->size())
        fail("state-space", "partial table arity mismatch");
    for (const auto& c : body)
        if (c && c->is_empty()) fail("empty-set", "partial entry must be a non-empty set");
    return ConvexProgram(std::move(space), ProgramKind::Partial, std::move(body));
}

ConvexProgram ConvexProgram::deterministic(StateSpacePtr space, const std::vector<int>& successor) {
    std::vector<ConvexSet> body;
    for (int s = 0; s < space->size(); ++s)
        body.push_back(ConvexSet::point_simplex(space, {successor[static_cast<std::size_t>(s)]}));
    return program(std::move(space), std::move(body));
}

const ConvexSet& ConvexProgram::at(int s) const {
    const auto& e = body_[static_cast<std::size_t>(s)];
    if (!e) fail("empty-set", "program entry is EMPTY at state " + space_->name(s));
    return *e;
}

bool ConvexProgram::is_total() const {
    return std::all_of(body_.begin(), body_.end(), [](const auto& e) { return e.has_value(); });
}

bool ConvexProgram::is_subidentity() const {
    for (int s = 0; s < space_->size(); ++s) {
        const auto& e = body_[static_cast<std::size_t>(s)];
        if (!e) continue;
        if (e->form() != ConvexSet::Form::PointSimplex) return false;
        if (e->support() != std::vector<int>{s}) return false;
    }
    return true;
}

ConvexProgram ConvexProgram::negated() const {
    if (kind_ != ProgramKind::Test) fail("kind", "negation is only defined on tests");
    std::vector<bool> holds;
    for (int s = 0; s < space_->size(); ++s) holds.push_back(is_empty_at(s));
    return test(space_, holds);
}

ConvexProgram ConvexProgram::require_program() const {
    if (!is_total())
        fail("feasibility", "guarded branches do not cover the state space");
    std::vector<ConvexSet> body;
    for (int s = 0; s < space_->size(); ++s) body.push_back(at(s));
    return program(space_, std::move(body));
}

bool ConvexProgram::operator==(const ConvexProgram& o) const {
    if (!same_space(space_, o.space_)) return false;
    for (int s = 0; s < space_->size(); ++s) {
        const auto& a = body_[static_cast<std::size_t>(s)];
        const auto& b = o.body_[static_cast<std::size_t>(s)];
        if (a.has_value() != b.has_value()) return false;
        if (a && *a != *b) return false;
    }
    return true;
}

Distribution DeterministicSelection::apply(const Distribution& mu) const {
    SubDistribution acc = SubDistribution::zero(mu.space());
    for (const auto& [t, w] : mu.entries()) acc.add_scaled(choice[static_cast<std::size_t>(t)], w);
    return acc.to_distribution();
}

ConvexProgram prob_choice(const ConvexProgram& r, const ConvexProgram& r2, const Rat& p) {
    require_same_space(r.space(), r2.space(), "prob_choice");
    require_probability(p, "probabilistic choice parameter");
    if (r.kind() != ProgramKind::Program || r2.kind() != ProgramKind::Program)
        fail("kind", "prob_choice requires Program-kind operands");
    std::vector<ConvexSet> body;
    for (int s = 0; s < r.space()->size(); ++s) {
        std::vector<Distribution> pts;
        r.at(s).for_each_vertex([&](const Distribution& mu) {
            r2.at(s).for_each_vertex(
                [&](const Distribution& nu) { pts.push_back(mix(mu, nu, p)); });
        });
        body.push_back(hull_reduce(r.space(), std::move(pts)));
    }
    return ConvexProgram::program(r.space(), std::move(body));
}

ConvexProgram ndet_choice(const ConvexProgram& r, const ConvexProgram& r2) {
    require_same_space(r.space(), r2.space(), "ndet_choice");
    std::vector<std::optional<ConvexSet>> body;
    bool total = true;
    for (int s = 0; s < r.space()->size(); ++s) {
        const auto& a = r.entry(s);
        const auto& b = r2.entry(s);
        if (!a && !b) {
            body.emplace_back(std::nullopt);
            total = false;
            continue;
        }
        if (!a) {
            body.emplace_back(*b);
            continue;
        }
        if (!b) {
            body.emplace_back(*a);
            continue;
        }
        if (a->form() == ConvexSet::Form::PointSimplex && b->form() == ConvexSet::Form::PointSimplex) {
            std::vector<int> support = a->support();
            support.insert(support.end(), b->support().begin(), b->support().end());
            body.emplace_back(ConvexSet::point_simplex(r.space(), std::move(support)));
            continue;
        }
        std::vector<Distribution> pts = a->vertex_list();
        auto more = b->vertex_list();
        pts.insert(pts.end(), more.begin(), more.end());
        body.emplace_back(hull_reduce(r.space(), std::move(pts)));
    }
    ProgramKind kind;
    if (r.kind() == ProgramKind::Test && r2.kind() == ProgramKind::Test)
        kind = ProgramKind::Test;
    else
        kind = total ? ProgramKind::Program : ProgramKind::Partial;
    if (kind == ProgramKind::Program) {
        std::vector<ConvexSet> sets;
        for (auto& e : body) sets.push_back(std::move(*e));
        return ConvexProgram::program(r.space(), std::move(sets));
    }
    if (kind == ProgramKind::Test) {
        std::vector<bool> holds;
        for (const auto& e : body) holds.push_back(e.has_value());
        return ConvexProgram::test(r.space(), holds);
    }
    return ConvexProgram::partial(r.space(), std::move(body));
}

namespace {

bool is_bottom(const ConvexProgram& p) {
    for (int s = 0; s < p.space()->size(); ++s)
        if (!p.is_empty_at(s)) return false;
    return true;
}

} // namespace

ConvexProgram seq_compose(const ConvexProgram& r, const ConvexProgram& r2,
                          const ComposeLimits& lim) {
    require_same_space(r.space(), r2.space(), "seq_compose");
    // bottom annihilates on both sides.
    if (is_bottom(r) || is_bottom(r2)) return ConvexProgram::bottom(r.space());
    if (r.kind() == ProgramKind::Test)
        fail("kind", "left test in a sequential composition: use guard_then");
    if (r2.kind() == ProgramKind::Test)
        fail("kind", "right test in a sequential composition: use guard_then");
    auto space = r.space();
    std::vector<std::optional<ConvexSet>> body;
    bool total = true;
    for (int s = 0; s < space->size(); ++s) {
        if (r.is_empty_at(s)) {
            body.emplace_back(std::nullopt);
            total = false;
            continue;
        }
        std::vector<Distribution> candidates;
        r.at(s).for_each_vertex([&](const Distribution& mu) {
            // Expand the vertex selections of r2 over the support of mu; the
            // hull over vertex selections equals the hull over all selections
            // because f star mu is affine in each f(t).
            const auto& sup = mu.entries();
            for (const auto& [t, w] : sup) {
                (void)w;
                if (r2.is_empty_at(t))
                    fail("composition-undefined",
                         "right operand is EMPTY at state " + space->name(t) +
                             " reachable from " + space->name(s));
            }
            std::vector<SubDistribution> partial{SubDistribution::zero(space)};
            for (const auto& [t, w] : sup) {
                std::vector<SubDistribution> next;
                r2.at(t).for_each_vertex([&](const Distribution& v) {
                    for (const auto& acc : partial) {
                        SubDistribution ext = acc;
                        ext.add_scaled(v, w);
                        next.push_back(std::move(ext));
                    }
                });
                if (next.size() > lim.candidate_cap)
                    fail("explosion", "sequential composition candidate set exceeded cap");
                partial = std::move(next);
            }
            for (const auto& acc : partial) candidates.push_back(acc.to_distribution());
            if (candidates.size() > lim.candidate_cap)
                fail("explosion", "sequential composition candidate set exceeded cap");
        });
        body.emplace_back(hull_reduce(space, std::move(candidates)));
    }
    if (total) {
        std::vector<ConvexSet> sets;
        for (auto& e : body) sets.push_back(std::move(*e));
        return ConvexProgram::program(space, std::move(sets));
    }
    return ConvexProgram::partial(space, std::move(body));
}

ConvexProgram guard_then(const ConvexProgram& test, const ConvexProgram& r) {
    require_same_space(test.space(), r.space(), "guard_then");
    if (test.kind() != ProgramKind::Test) fail("kind", "guard_then needs a test as guard");
    std::vector<std::optional<ConvexSet>> body;
    for (int s = 0; s < test.space()->size(); ++s) {
        if (test.is_empty_at(s) || r.is_empty_at(s))
            body.emplace_back(std::nullopt);
        else
            body.emplace_back(r.at(s));
    }
    return ConvexProgram::partial(test.space(), std::move(body));
}

StarIteration kleene_star_by_iteration(const ConvexProgram& r, const ConvexProgram& r2,
                                       int max_iterations) {
    StarIteration out{false, 0, ConvexProgram::bottom(r.space())};
    ConvexProgram current = ConvexProgram::bottom(r.space());
    for (int i = 0; i < max_iterations; ++i) {
        ConvexProgram next = ndet_choice(r2, seq_compose(r, current));
        out.iterations = i + 1;
        if (next == current) {
            out.stabilized = true;
            out.last = std::move(next);
            return out;
        }
        current = std::move(next);
    }
    out.last = std::move(current);
    return out;
}

ConvexProgram kleene_star(const ConvexProgram& r, const ConvexProgram& r2,
                          const StarOptions& opt) {
    require_same_space(r.space(), r2.space(), "kleene_star");
    if (opt.allow_transitive_shortcut && r2 == ConvexProgram::skip(r.space()) &&
        r.kind() == ProgramKind::Program && is_transitive(r))
        return ndet_choice(ConvexProgram::skip(r.space()), r);
    StarIteration it = kleene_star_by_iteration(r, r2, opt.max_iterations);
    if (!it.stabilized)
        fail("non-termination", "Kleene iteration did not stabilize within " +
                                    std::to_string(opt.max_iterations) + " steps");
    return it.last;
}

bool refines_H(const ConvexProgram& r, const ConvexProgram& r2) {
    require_same_space(r.space(), r2.space(), "refines_H");
    for (int s = 0; s < r.space()->size(); ++s) {
        if (r.is_empty_at(s)) continue;
        if (r2.is_empty_at(s)) return false;
        if (!r.at(s).subset_of(r2.at(s))) return false;
    }
    return true;
}

bool is_transitive(const ConvexProgram& r) {
    if (r.kind() != ProgramKind::Program) fail("kind", "is_transitive needs a Program operand");
    ConvexProgram step = ndet_choice(r, ConvexProgram::skip(r.space()));
    return refines_H(seq_compose(r, step), r);
}

RelationProgram program_from_relation(const StateSpacePtr& space,
                                      const std::vector<std::pair<int, int>>& rho) {
    RelationClosure rc = relation_convex_closure(space, rho);
    RelationProgram out{ConvexProgram::partial(space, std::move(rc.sets)), std::move(rc.dead_states)};
    if (out.dead_states.empty()) out.prog = out.prog.require_program();
    return out;
}

Distribution random_distribution(Rng& rng, const StateSpacePtr& space, int max_den) {
    int den = rng.uniform_int(1, max_den);
    // Drop den unit chunks onto random states.
    WeightEntries entries;
    std::vector<int> count(static_cast<std::size_t>(space->size()), 0);
    for (int k = 0; k < den; ++k) ++count[static_cast<std::size_t>(rng.uniform_int(0, space->size() - 1))];
    for (int s = 0; s < space->size(); ++s)
        if (count[static_cast<std::size_t>(s)] > 0)
            entries.emplace_back(s, make_rat(count[static_cast<std::size_t>(s)], den));
    return Distribution(space, std::move(entries));
}

ConvexProgram random_program(Rng& rng, const StateSpacePtr& space, int max_vertices, int max_den) {
    std::vector<ConvexSet> body;
    for (int s = 0; s < space->size(); ++s) {
        int nv = rng.uniform_int(1, max_vertices);
        std::vector<Distribution> pts;
        for (int i = 0; i < nv; ++i) pts.push_back(random_distribution(rng, space, max_den));
        body.push_back(hull_reduce(space, std::move(pts)));
    }
    return ConvexProgram::program(space, std::move(body));
}

namespace {

ConvexProgram random_relation_program(Rng& rng, const StateSpacePtr& space) {
    std::vector<std::pair<int, int>> rho;
    for (int s = 0; s < space->size(); ++s) {
        int deg = rng.uniform_int(1, space->size());
        for (int k = 0; k < deg; ++k) rho.emplace_back(s, rng.uniform_int(0, space->size() - 1));
    }
    return program_from_relation(space, rho).prog.require_program();
}

} // namespace

AxiomReport axiom_suite(std::uint64_t seed, int samples, int max_states, int max_vertices) {
    Rng rng(seed);
    AxiomReport rep;
    auto record = [&](bool ok, int sample, const std::string& law) {
        if (!ok) rep.failures.push_back("sample " + std::to_string(sample) + ": " + law);
    };
    for (int i = 0; i < samples; ++i) {
        auto space = make_space(rng.uniform_int(2, max_states));
        ConvexProgram x = random_program(rng, space, max_vertices);
        ConvexProgram y = random_program(rng, space, max_vertices);
        ConvexProgram z = random_program(rng, space, max_vertices);
        ConvexProgram one = ConvexProgram::skip(space);
        ConvexProgram bot = ConvexProgram::bottom(space);
        rep.samples++;

        record(ndet_choice(x, x) == x, i, "x + x = x");
        record(ndet_choice(x, y) == ndet_choice(y, x), i, "x + y = y + x");
        record(ndet_choice(x, ndet_choice(y, z)) == ndet_choice(ndet_choice(x, y), z), i,
               "+ associativity");
        record(ndet_choice(x, bot) == x, i, "x + 0 = x");
        record(seq_compose(x, one) == x, i, "x . 1 = x");
        record(seq_compose(one, x) == x, i, "1 . x = x");
        record(seq_compose(x, seq_compose(y, z)) == seq_compose(seq_compose(x, y), z), i,
               ". associativity");
        record(seq_compose(bot, x) == bot, i, "0 . x = 0");
        record(seq_compose(x, bot) == bot, i, "x . 0 = 0");
        record(seq_compose(ndet_choice(x, y), z) ==
                   ndet_choice(seq_compose(x, z), seq_compose(y, z)),
               i, "(x+y).z = x.z + y.z");
        ConvexProgram lhs = ndet_choice(seq_compose(x, y), seq_compose(x, z));
        ConvexProgram rhs = seq_compose(x, ndet_choice(y, z));
        record(refines_H(lhs, rhs), i, "x.y + x.z refines x.(y+z)");
        if (lhs != rhs) rep.strict_subdistributivity_witnesses++;

        // Star unfold on a closure-of-relation left operand, whose iteration
        // stabilizes because every iterate draws vertices from a fixed pool.
        ConvexProgram rel = random_relation_program(rng, space);
        StarIteration si = kleene_star_by_iteration(rel, y, 64);
        if (si.stabilized) {
            rep.star_samples++;
            record(si.last == ndet_choice(y, seq_compose(rel, si.last)), i,
                   "star unfold x*y = y + x.(x*y)");
        }
    }
    // Deterministic strictness witness: a fair coin whose two continuations
    // disagree per state, so resolving after the flip beats resolving before.
    {
        auto space = make_space(3);
        ConvexProgram coin = ConvexProgram::program(
            space, {ConvexSet::singleton(Distribution(space, {{0, Rat(1, 2)}, {1, Rat(1, 2)}})),
                    ConvexSet::singleton(Distribution(space, {{0, Rat(1, 2)}, {1, Rat(1, 2)}})),
                    ConvexSet::singleton(Distribution::point(space, 2))});
        ConvexProgram y = ConvexProgram::deterministic(space, {0, 2, 2});
        ConvexProgram z = ConvexProgram::deterministic(space, {2, 0, 2});
        ConvexProgram lhs = ndet_choice(seq_compose(coin, y), seq_compose(coin, z));
        ConvexProgram rhs = seq_compose(coin, ndet_choice(y, z));
        rep.samples++;
        if (!refines_H(lhs, rhs))
            rep.failures.push_back("witness sample: x.y + x.z refines x.(y+z)");
        if (lhs != rhs) rep.strict_subdistributivity_witnesses++;
        if (lhs == rhs)
            rep.failures.push_back("witness sample: expected strict sub-distributivity");
    }
    return rep;
}

} // namespace prgc
