// Copyright (c) prgc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "prgc/convex.hpp"

#include <algorithm>
#include <set>

namespace prgc {
namespace {

// Standard-form system for { mu in simplex : constraints }, variables are the
// |Omega| weights followed by one slack per inequality.
void build_halfspace_system(const StateSpacePtr& space,
                            const std::vector<HalfspaceConstraint>& cs, RatMatrix& A, RatVec& b) {
    int n = space->size();
    int slacks = 0;
    for (const auto& c : cs)
        if (!c.equality) ++slacks;
    int cols = n + slacks;
    A.clear();
    b.clear();
    RatVec ones(static_cast<std::size_t>(cols), Rat(0));
    for (int s = 0; s < n; ++s) ones[static_cast<std::size_t>(s)] = 1;
    A.push_back(ones);
    b.push_back(Rat(1));
    int slack = n;
    for (const auto& c : cs) {
        if (static_cast<int>(c.coeff.size()) != n) fail("state-space", "constraint arity mismatch");
        RatVec row(static_cast<std::size_t>(cols), Rat(0));
        for (int s = 0; s < n; ++s) row[static_cast<std::size_t>(s)] = c.coeff[static_cast<std::size_t>(s)];
        if (!c.equality) row[static_cast<std::size_t>(slack++)] = -1;
        A.push_back(std::move(row));
        b.push_back(c.rhs);
    }
}

// mu = sum lambda_i v_i with lambda a distribution over the given points.
bool in_hull_lp(const Distribution& mu, const std::vector<Distribution>& points) {
    int n = mu.space()->size();
    int k = static_cast<int>(points.size());
    RatMatrix A(static_cast<std::size_t>(n + 1), RatVec(static_cast<std::size_t>(k), Rat(0)));
    RatVec b(static_cast<std::size_t>(n + 1), Rat(0));
    for (int j = 0; j < k; ++j)
        for (const auto& [s, w] : points[static_cast<std::size_t>(j)].entries())
            A[static_cast<std::size_t>(s)][static_cast<std::size_t>(j)] = w;
    for (const auto& [s, w] : mu.entries()) b[static_cast<std::size_t>(s)] = w;
    for (int j = 0; j < k; ++j) A[static_cast<std::size_t>(n)][static_cast<std::size_t>(j)] = 1;
    b[static_cast<std::size_t>(n)] = 1;
    return lp_feasible(A, b);
}

} // namespace

ConvexSet ConvexSet::hull(StateSpacePtr space, std::vector<Distribution> points) {
    return hull_reduce(std::move(space), std::move(points));
}

ConvexSet ConvexSet::point_simplex(StateSpacePtr space, std::vector<int> support) {
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    if (support.empty()) fail("empty-set", "point simplex needs at least one state");
    for (int t : support)
        if (t < 0 || t >= space->size()) fail("state-space", "point simplex support outside the space");
    ConvexSet c;
    c.form_ = Form::PointSimplex;
    c.space_ = std::move(space);
    c.support_ = std::move(support);
    return c;
}

ConvexSet ConvexSet::singleton(Distribution d) {
    auto space = d.space();
    return hull_reduce(space, {std::move(d)});
}

namespace {

// "Simplex over a support S, plus at most one 0/1 lower bound mu(O) >= p":
// every constraint has 0/1 coefficients; at most one equality (rhs 1) fixes
// S, at most one inequality fixes (O, p).
std::optional<ConvexSet::SupportPattern> detect_pattern(
    const StateSpacePtr& space, const std::vector<HalfspaceConstraint>& cs) {
    ConvexSet::SupportPattern pat;
    bool have_support = false;
    for (const auto& c : cs) {
        for (const auto& a : c.coeff)
            if (a != 0 && a != 1) return std::nullopt;
        if (c.equality) {
            if (have_support || c.rhs != 1) return std::nullopt;
            have_support = true;
            for (int s = 0; s < space->size(); ++s)
                if (c.coeff[static_cast<std::size_t>(s)] == 1) pat.support.push_back(s);
        } else {
            if (pat.has_lower) return std::nullopt;
            pat.has_lower = true;
            pat.lower_bound = c.rhs;
            pat.lower_set.assign(static_cast<std::size_t>(space->size()), false);
            for (int s = 0; s < space->size(); ++s)
                pat.lower_set[static_cast<std::size_t>(s)] =
                    c.coeff[static_cast<std::size_t>(s)] == 1;
        }
    }
    if (!have_support) {
        for (int s = 0; s < space->size(); ++s) pat.support.push_back(s);
    }
    return pat;
}

} // namespace

ConvexSet ConvexSet::halfspaces(StateSpacePtr space, std::vector<HalfspaceConstraint> constraints) {
    ConvexSet c;
    c.form_ = Form::Halfspaces;
    c.space_ = std::move(space);
    c.constraints_ = std::move(constraints);
    c.pattern_ = detect_pattern(c.space_, c.constraints_);
    if (c.pattern_) {
        const auto& pat = *c.pattern_;
        if (pat.support.empty()) {
            c.empty_ = true;
        } else if (pat.has_lower && pat.lower_bound > 0) {
            bool some_in_lower = false;
            for (int t : pat.support)
                if (pat.lower_set[static_cast<std::size_t>(t)]) some_in_lower = true;
            c.empty_ = !some_in_lower || pat.lower_bound > 1;
        } else {
            c.empty_ = false;
        }
        return c;
    }
    RatMatrix A;
    RatVec b;
    build_halfspace_system(c.space_, c.constraints_, A, b);
    c.empty_ = !lp_feasible(A, b);
    return c;
}

ConvexSet ConvexSet::full_simplex(StateSpacePtr space) {
    std::vector<int> all(static_cast<std::size_t>(space->size()));
    for (int s = 0; s < space->size(); ++s) all[static_cast<std::size_t>(s)] = s;
    return point_simplex(std::move(space), std::move(all));
}

std::size_t ConvexSet::vertex_count() const {
    if (form_ == Form::PointSimplex) return support_.size();
    if (form_ == Form::Vertices) return vertices_.size();
    fail("kind", "vertex_count on a halfspace-form set");
}

std::vector<Distribution> ConvexSet::vertex_list() const {
    std::vector<Distribution> out;
    for_each_vertex([&](const Distribution& d) { out.push_back(d); });
    return out;
}

bool ConvexSet::contains(const Distribution& mu) const {
    require_same_space(mu.space(), space_, "hull_membership");
    switch (form_) {
    case Form::PointSimplex: {
        for (const auto& [s, w] : mu.entries())
            if (!std::binary_search(support_.begin(), support_.end(), s)) return false;
        return true;
    }
    case Form::Vertices: {
        if (vertices_.size() == 1) return mu == vertices_.front();
        return in_hull_lp(mu, vertices_);
    }
    case Form::Halfspaces: {
        if (empty_) return false;
        for (const auto& c : constraints_) {
            Rat lhs = 0;
            for (const auto& [s, w] : mu.entries()) lhs += c.coeff[static_cast<std::size_t>(s)] * w;
            if (c.equality ? lhs != c.rhs : lhs < c.rhs) return false;
        }
        return true;
    }
    }
    return false;
}

Rat ConvexSet::minimize(const RatVec& coeff) const {
    if (static_cast<int>(coeff.size()) != space_->size()) fail("state-space", "objective arity mismatch");
    switch (form_) {
    case Form::PointSimplex: {
        Rat best = coeff[static_cast<std::size_t>(support_.front())];
        for (int t : support_) {
            const Rat& v = coeff[static_cast<std::size_t>(t)];
            if (v < best) best = v;
        }
        return best;
    }
    case Form::Vertices: {
        std::optional<Rat> best;
        for (const auto& v : vertices_) {
            Rat val = 0;
            for (const auto& [s, w] : v.entries()) val += coeff[static_cast<std::size_t>(s)] * w;
            if (!best || val < *best) best = val;
        }
        return *best;
    }
    case Form::Halfspaces: {
        if (empty_) fail("empty-set", "minimize over an empty constraint set");
        if (pattern_) {
            // mu = q (dist on A) + (1-q)(dist on B) with A the lower-bound
            // part of the support and q >= p; the optimum sits at q = p or 1.
            const auto& pat = *pattern_;
            std::optional<Rat> m1, m0;
            for (int t : pat.support) {
                const Rat& v = coeff[static_cast<std::size_t>(t)];
                bool in_lower = !pat.has_lower || pat.lower_set[static_cast<std::size_t>(t)];
                if (in_lower) {
                    if (!m1 || v < *m1) m1 = v;
                } else {
                    if (!m0 || v < *m0) m0 = v;
                }
            }
            if (!pat.has_lower || pat.lower_bound <= 0) {
                Rat best = m1 ? *m1 : *m0;
                if (m0 && *m0 < best) best = *m0;
                if (m1 && *m1 < best) best = *m1;
                return best;
            }
            if (!m0) return *m1;
            Rat mixed = pat.lower_bound * *m1 + (Rat(1) - pat.lower_bound) * *m0;
            return std::min(*m1, mixed);
        }
        RatMatrix A;
        RatVec b;
        build_halfspace_system(space_, constraints_, A, b);
        RatVec c(A[0].size(), Rat(0));
        for (int s = 0; s < space_->size(); ++s) c[static_cast<std::size_t>(s)] = coeff[static_cast<std::size_t>(s)];
        LpResult res = lp_solve(A, b, c);
        if (!res.feasible) fail("internal", "satisfiable set became infeasible");
        if (!res.bounded) fail("internal", "unbounded objective over a polytope");
        return res.value;
    }
    }
    fail("internal", "unreachable");
}

std::vector<int> ConvexSet::positive_mass_states() const {
    std::vector<int> out;
    switch (form_) {
    case Form::PointSimplex: return support_;
    case Form::Vertices: {
        std::vector<bool> seen(static_cast<std::size_t>(space_->size()), false);
        for (const auto& v : vertices_)
            for (const auto& [s, w] : v.entries()) {
                (void)w;
                seen[static_cast<std::size_t>(s)] = true;
            }
        for (int s = 0; s < space_->size(); ++s)
            if (seen[static_cast<std::size_t>(s)]) out.push_back(s);
        return out;
    }
    case Form::Halfspaces: {
        if (empty_) return out;
        if (pattern_) {
            const auto& pat = *pattern_;
            if (pat.has_lower && pat.lower_bound >= 1) {
                for (int t : pat.support)
                    if (pat.lower_set[static_cast<std::size_t>(t)]) out.push_back(t);
            } else {
                out = pat.support;
            }
            return out;
        }
        // General constraint sets: maximize mu(t) per state with an exact LP.
        for (int t = 0; t < space_->size(); ++t) {
            RatVec neg(static_cast<std::size_t>(space_->size()), Rat(0));
            neg[static_cast<std::size_t>(t)] = -1;
            if (minimize(neg) < 0) out.push_back(t);
        }
        return out;
    }
    }
    return out;
}

bool ConvexSet::subset_of(const ConvexSet& other) const {
    require_same_space(space_, other.space(), "subset_of");
    if (form_ == Form::Halfspaces) fail("kind", "subset_of with a halfspace left operand");
    if (form_ == Form::PointSimplex && other.form_ == Form::PointSimplex)
        return std::includes(other.support_.begin(), other.support_.end(), support_.begin(),
                             support_.end());
    bool ok = true;
    for_each_vertex([&](const Distribution& v) {
        if (ok && !other.contains(v)) ok = false;
    });
    return ok;
}

bool ConvexSet::operator==(const ConvexSet& o) const {
    if (form_ != o.form_) return false;
    switch (form_) {
    case Form::PointSimplex: return support_ == o.support_;
    case Form::Vertices: return vertices_ == o.vertices_;
    case Form::Halfspaces:
        if (empty_ != o.empty_ || constraints_.size() != o.constraints_.size()) return false;
        for (std::size_t i = 0; i < constraints_.size(); ++i) {
            if (constraints_[i].coeff != o.constraints_[i].coeff ||
                constraints_[i].rhs != o.constraints_[i].rhs ||
                constraints_[i].equality != o.constraints_[i].equality)
                return false;
        }
        return true;
    }
    return false;
}

bool hull_membership(const Distribution& mu, const ConvexSet& c) { return c.contains(mu); }

ConvexSet hull_reduce(StateSpacePtr space, std::vector<Distribution> points) {
    if (points.empty()) fail("empty-set", "hull_reduce of an empty point set");
    for (const auto& p : points) require_same_space(p.space(), space, "hull_reduce");
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());

    bool all_point = std::all_of(points.begin(), points.end(),
                                 [](const Distribution& d) { return d.is_point_mass(); });
    if (all_point) {
        std::vector<int> support;
        support.reserve(points.size());
        for (const auto& p : points) support.push_back(p.point_state());
        return ConvexSet::point_simplex(std::move(space), std::move(support));
    }

    // A point of a finite set is extreme iff it is not in the hull of the rest.
    std::vector<Distribution> extreme;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points.size() == 1) {
            extreme.push_back(points[i]);
            break;
        }
        std::vector<Distribution> rest;
        rest.reserve(points.size() - 1);
        for (std::size_t j = 0; j < points.size(); ++j)
            if (j != i) rest.push_back(points[j]);
        if (!in_hull_lp(points[i], rest)) extreme.push_back(points[i]);
    }
    // All inputs in the hull of the others can only happen through mutual
    // redundancy of duplicates, which were removed above; extreme is non-empty.
    bool extremes_point = std::all_of(extreme.begin(), extreme.end(),
                                      [](const Distribution& d) { return d.is_point_mass(); });
    if (extremes_point) {
        std::vector<int> support;
        for (const auto& p : extreme) support.push_back(p.point_state());
        return ConvexSet::point_simplex(std::move(space), std::move(support));
    }
    ConvexSet out;
    out.form_ = ConvexSet::Form::Vertices;
    out.space_ = std::move(space);
    out.vertices_ = std::move(extreme);
    return out;
}

RelationClosure relation_convex_closure(const StateSpacePtr& space,
                                        const std::vector<std::pair<int, int>>& rho) {
    int n = space->size();
    std::vector<std::vector<int>> succ(static_cast<std::size_t>(n));
    for (const auto& [s, t] : rho) {
        if (s < 0 || s >= n || t < 0 || t >= n) fail("state-space", "relation pair outside the space");
        succ[static_cast<std::size_t>(s)].push_back(t);
    }
    RelationClosure out;
    for (int s = 0; s < n; ++s) {
        if (succ[static_cast<std::size_t>(s)].empty()) {
            out.dead_states.push_back(s);
            out.sets.push_back(std::nullopt);
        } else {
            out.sets.push_back(ConvexSet::point_simplex(space, succ[static_cast<std::size_t>(s)]));
        }
    }
    return out;
}

std::optional<ConvexSet> intersect(const ConvexSet& a, const ConvexSet& b, std::size_t cap) {
    require_same_space(a.space(), b.space(), "intersect");
    if (!a.vertex_like() || !b.vertex_like()) fail("kind", "intersect needs vertex-like operands");
    if (a.form() == ConvexSet::Form::PointSimplex && b.form() == ConvexSet::Form::PointSimplex) {
        std::vector<int> common;
        std::set_intersection(a.support().begin(), a.support().end(), b.support().begin(),
                              b.support().end(), std::back_inserter(common));
        if (common.empty()) return std::nullopt;
        return ConvexSet::point_simplex(a.space(), std::move(common));
    }
    if (a.subset_of(b)) return a;
    if (b.subset_of(a)) return b;

    // Lifted polytope over hull coefficients (lambda, gamma):
    //   V lambda - W gamma = 0, sum lambda = 1, sum gamma = 1, both >= 0.
    auto va = a.vertex_list();
    auto vb = b.vertex_list();
    int n = a.space()->size();
    int ka = static_cast<int>(va.size());
    int kb = static_cast<int>(vb.size());
    RatMatrix A(static_cast<std::size_t>(n + 2), RatVec(static_cast<std::size_t>(ka + kb), Rat(0)));
    RatVec rhs(static_cast<std::size_t>(n + 2), Rat(0));
    for (int j = 0; j < ka; ++j)
        for (const auto& [s, w] : va[static_cast<std::size_t>(j)].entries())
            A[static_cast<std::size_t>(s)][static_cast<std::size_t>(j)] = w;
    for (int j = 0; j < kb; ++j)
        for (const auto& [s, w] : vb[static_cast<std::size_t>(j)].entries())
            A[static_cast<std::size_t>(s)][static_cast<std::size_t>(ka + j)] = -w;
    for (int j = 0; j < ka; ++j) A[static_cast<std::size_t>(n)][static_cast<std::size_t>(j)] = 1;
    rhs[static_cast<std::size_t>(n)] = 1;
    for (int j = 0; j < kb; ++j) A[static_cast<std::size_t>(n + 1)][static_cast<std::size_t>(ka + j)] = 1;
    rhs[static_cast<std::size_t>(n + 1)] = 1;

    auto basics = enumerate_basic_points(A, rhs, cap);
    if (basics.empty()) return std::nullopt;
    std::vector<Distribution> points;
    for (const auto& x : basics) {
        SubDistribution acc = SubDistribution::zero(a.space());
        for (int j = 0; j < ka; ++j)
            if (x[static_cast<std::size_t>(j)] != 0)
                acc.add_scaled(va[static_cast<std::size_t>(j)], x[static_cast<std::size_t>(j)]);
        points.push_back(acc.to_distribution());
    }
    return hull_reduce(a.space(), std::move(points));
}

} // namespace prgc
