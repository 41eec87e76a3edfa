// Copyright (c) prgc contributors.
// SPDX-License-Identifier: Apache-2.0
#ifndef PRGC_PROGRAM_HPP
#define PRGC_PROGRAM_HPP

#include "prgc/convex.hpp"

#include <optional>
#include <string>
#include <vector>

namespace prgc {

/// Program: a state-indexed family of non-empty convex sets of distributions.
/// Test: a subidentity, each entry EMPTY or exactly {delta_s}.
/// Partial: a guard table produced by guard_then, EMPTY where the guard fails.
enum class ProgramKind { Program, Test, Partial };

class ConvexProgram {
  public:
    static ConvexProgram program(StateSpacePtr space, std::vector<ConvexSet> body);
    static ConvexProgram test(StateSpacePtr space, const std::vector<bool>& holds);
    /// skip: the deterministic do-nothing program delta (Program kind).
    static ConvexProgram skip(StateSpacePtr space);
    /// bottom: the everywhere-EMPTY test, the constant written as an inverted T.
    static ConvexProgram bottom(StateSpacePtr space);
    static ConvexProgram partial(StateSpacePtr space, std::vector<std::optional<ConvexSet>> body);
    /// Single-vertex deterministic program from a per-state successor table.
    static ConvexProgram deterministic(StateSpacePtr space, const std::vector<int>& successor);

    const StateSpacePtr& space() const { return space_; }
    ProgramKind kind() const { return kind_; }
    bool is_empty_at(int s) const { return !body_[static_cast<std::size_t>(s)].has_value(); }
    const ConvexSet& at(int s) const;
    const std::optional<ConvexSet>& entry(int s) const { return body_[static_cast<std::size_t>(s)]; }
    bool is_total() const;
    /// Entrywise EMPTY or {delta_s}; exactly the programs refining skip.
    bool is_subidentity() const;
    /// Logical complement of a test.
    ConvexProgram negated() const;
    /// Reinterprets a total table as Program kind (feasibility error otherwise).
    ConvexProgram require_program() const;

    /// Body equality on canonical forms; the kind tag is derived bookkeeping.
    bool operator==(const ConvexProgram& o) const;
    bool operator!=(const ConvexProgram& o) const { return !(*this == o); }

  private:
    ConvexProgram(StateSpacePtr space, ProgramKind kind, std::vector<std::optional<ConvexSet>> body)
        : space_(std::move(space)), kind_(kind), body_(std::move(body)) {}

    StateSpacePtr space_;
    ProgramKind kind_;
    std::vector<std::optional<ConvexSet>> body_;
};

/// A vertex-valued refinement f of some program: one distribution per state.
struct DeterministicSelection {
    std::vector<Distribution> choice;

    /// (f star mu)(s') = sum_t f(t)(s') mu(t).
    Distribution apply(const Distribution& mu) const;
};

struct ComposeLimits {
    std::size_t candidate_cap = 1u << 20;
};

/// r with probability 1-p, r2 with probability p (both Program kind).
ConvexProgram prob_choice(const ConvexProgram& r, const ConvexProgram& r2, const Rat& p);

/// Nondeterministic choice: pointwise hull of the union; EMPTY is the unit.
ConvexProgram ndet_choice(const ConvexProgram& r, const ConvexProgram& r2);

/// Sequential composition r then r2 via vertex-valued selections.
ConvexProgram seq_compose(const ConvexProgram& r, const ConvexProgram& r2,
                          const ComposeLimits& lim = {});

/// The partial table b.r: r(s) where the test holds, EMPTY elsewhere.
ConvexProgram guard_then(const ConvexProgram& test, const ConvexProgram& r);

struct StarOptions {
    int max_iterations = 64;
    bool allow_transitive_shortcut = true;
};

/// Binary Kleene star r * r2: least fixed point of X -> r2 + r.X, computed by
/// exact Kleene iteration; transitive r with r2 = skip reduces to skip + r.
/// Iteration that fails to stabilize raises a non-termination error.
ConvexProgram kleene_star(const ConvexProgram& r, const ConvexProgram& r2,
                          const StarOptions& opt = {});

struct StarIteration {
    bool stabilized = false;
    int iterations = 0;
    ConvexProgram last;
};
StarIteration kleene_star_by_iteration(const ConvexProgram& r, const ConvexProgram& r2,
                                       int max_iterations);

/// Pointwise inclusion order; EMPTY refines anything.
bool refines_H(const ConvexProgram& r, const ConvexProgram& r2);

/// r.(r + delta) refines r; holds for convex closures of transitive relations.
bool is_transitive(const ConvexProgram& r);

/// Program whose entries are the convex closure of a relation, with the
/// states lacking successors reported (the program is EMPTY there).
struct RelationProgram {
    ConvexProgram prog;
    std::vector<int> dead_states;
};
RelationProgram program_from_relation(const StateSpacePtr& space,
                                      const std::vector<std::pair<int, int>>& rho);

/// Exact check suite for the algebra of programs: idempotent-semiring laws,
/// right distributivity, probabilistic sub-distributivity and star unfold on
/// randomly sampled small programs. Also counts witnesses where
/// x.y + x.z is a strict refinement of x.(y+z).
struct AxiomReport {
    int samples = 0;
    int star_samples = 0;
    int strict_subdistributivity_witnesses = 0;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};
AxiomReport axiom_suite(std::uint64_t seed, int samples, int max_states = 3, int max_vertices = 3);

/// Random small program generator shared by the property suites.
class Rng;
ConvexProgram random_program(Rng& rng, const StateSpacePtr& space, int max_vertices, int max_den = 4);
Distribution random_distribution(Rng& rng, const StateSpacePtr& space, int max_den = 4);

} // namespace prgc

#endif
