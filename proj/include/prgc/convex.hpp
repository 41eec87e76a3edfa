// Copyright (c) prgc contributors.
// SPDX-License-Identifier: Apache-2.0
#ifndef PRGC_CONVEX_HPP
#define PRGC_CONVEX_HPP

#include "prgc/distribution.hpp"
#include "prgc/linear.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace prgc {

/// One linear constraint sum_s coeff[s] * mu(s) >= rhs (or == rhs),
/// interpreted inside the probability simplex.
struct HalfspaceConstraint {
    RatVec coeff;
    Rat rhs;
    bool equality = false;
};

/// A non-empty closed convex set of distributions in one of three exact
/// finite representations:
///  - Vertices: irredundant hull vertices in canonical order;
///  - PointSimplex: conv{ delta_t : t in support } kept as the support list
///    (the normal form whenever every vertex is a point mass);
///  - Halfspaces: finitely many linear constraints intersected with the
///    simplex, possibly marked empty when unsatisfiable.
class ConvexSet {
  public:
    enum class Form { PointSimplex, Vertices, Halfspaces };

    /// Canonical hull of finitely many points; empty input is an error.
    static ConvexSet hull(StateSpacePtr space, std::vector<Distribution> points);
    static ConvexSet point_simplex(StateSpacePtr space, std::vector<int> support);
    static ConvexSet singleton(Distribution d);
    static ConvexSet halfspaces(StateSpacePtr space, std::vector<HalfspaceConstraint> constraints);
    /// The whole probability simplex over the space.
    static ConvexSet full_simplex(StateSpacePtr space);

    Form form() const { return form_; }
    const StateSpacePtr& space() const { return space_; }
    bool vertex_like() const { return form_ != Form::Halfspaces; }
    /// Only halfspace sets can be empty; vertex forms are non-empty by construction.
    bool is_empty() const { return empty_; }

    std::size_t vertex_count() const;
    /// Materializes the vertex list (point simplices expand to point masses).
    std::vector<Distribution> vertex_list() const;
    template <typename F>
    void for_each_vertex(F&& f) const {
        if (form_ == Form::PointSimplex) {
            for (int t : support_) f(Distribution::point(space_, t));
        } else {
            for (const auto& v : vertices_) f(v);
        }
    }
    const std::vector<int>& support() const { return support_; }
    const std::vector<HalfspaceConstraint>& constraints() const { return constraints_; }

    bool contains(const Distribution& mu) const;
    /// Exact min of coeff . mu over the set; error on empty sets.
    Rat minimize(const RatVec& coeff) const;
    /// States that can carry positive mass somewhere in the set.
    std::vector<int> positive_mass_states() const;

    /// Halfspace sets of the common shape "simplex restricted to a support,
    /// plus at most one 0/1 mass lower bound" admit closed-form minimization;
    /// detected at construction.
    struct SupportPattern {
        std::vector<int> support;      // S, sorted
        std::vector<bool> lower_set;   // O (over the whole space)
        Rat lower_bound;               // p in mu(O) >= p
        bool has_lower = false;
    };
    const std::optional<SupportPattern>& support_pattern() const { return pattern_; }
    /// Every point of this set lies in `other` (both convex, so vertex checks
    /// suffice on vertex-like sets; halfspace left operands are not supported).
    bool subset_of(const ConvexSet& other) const;

    bool operator==(const ConvexSet& o) const;
    bool operator!=(const ConvexSet& o) const { return !(*this == o); }

  private:
    ConvexSet() = default;
    friend ConvexSet hull_reduce(StateSpacePtr space, std::vector<Distribution> points);

    Form form_ = Form::Vertices;
    StateSpacePtr space_;
    std::vector<Distribution> vertices_;
    std::vector<int> support_;
    std::vector<HalfspaceConstraint> constraints_;
    std::optional<SupportPattern> pattern_;
    bool empty_ = false;
};

/// mu in C, decided exactly (linear feasibility on vertex forms, constraint
/// evaluation on halfspace forms).
bool hull_membership(const Distribution& mu, const ConvexSet& c);

/// Canonical irredundant vertex form of conv(points).
ConvexSet hull_reduce(StateSpacePtr space, std::vector<Distribution> points);

/// Per-state convex closure of a relation: r(s) = conv{ delta_t : (s,t) in rho }.
/// States with no successor come back EMPTY and flagged instead of raising.
struct RelationClosure {
    std::vector<std::optional<ConvexSet>> sets;
    std::vector<int> dead_states; // states with no successor (program infeasible there)
};
RelationClosure relation_convex_closure(const StateSpacePtr& space,
                                        const std::vector<std::pair<int, int>>& rho);

/// Exact intersection of two vertex-like sets; nullopt when empty.
/// Computed on the lifted standard-form polytope of hull coefficients, so it
/// is robust to degenerate (lower-dimensional) inputs.
std::optional<ConvexSet> intersect(const ConvexSet& a, const ConvexSet& b, std::size_t cap);

} // namespace prgc

#endif
