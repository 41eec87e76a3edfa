// Copyright (c) prgc contributors.
// SPDX-License-Identifier: Apache-2.0
#ifndef PRGC_RG_HPP
#define PRGC_RG_HPP

#include "prgc/simulation.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace prgc {

/// A rely (or guarantee) condition given by an atomic base program r, used as
/// the iterated program r*. Transitive bases reduce r* to skip + r exactly.
class RelyCondition {
  public:
    static RelyCondition from_atomic(ConvexProgram base);

    const ConvexProgram& base() const { return base_; }
    bool transitive() const { return transitive_; }

    /// r* as a program: skip + r for transitive bases, otherwise the exact
    /// Kleene iteration (which may raise non-termination).
    ConvexProgram star_program(const StarOptions& opt = {}) const;

    /// r* as a bounded event structure: depth-d unfolding over a unit exit.
    IpBes realize(int depth) const;

    /// Bounded instance of the defining law r*||r* below r*: the simulation
    /// side is always checked; the sequential consequence optionally (it is
    /// implied by the simulation and costs semantics computations).
    bool validate_rely_law(int depth, bool include_semantics = false) const;

  private:
    explicit RelyCondition(ConvexProgram base, bool transitive)
        : base_(std::move(base)), transitive_(transitive) {}

    ConvexProgram base_;
    bool transitive_;
};

/// Upper bound of [[r* || component]] as a fused composition chain:
/// factors (programs, possibly halfspace-represented) interleaved with
/// guarded branch nodes for conditionals.
struct BoundExpr;

struct BoundBranch {
    ConvexProgram guard; // Test kind
    std::shared_ptr<const BoundExpr> body;
};

struct BoundStep {
    std::optional<ConvexProgram> factor; // present for plain chain factors
    std::vector<BoundBranch> branches;   // used when factor is absent
    bool is_factor() const { return factor.has_value(); }
};

struct BoundExpr {
    std::vector<BoundStep> steps;
};

/// Structural rewrite of r* || es into the fused chain r*.u1.r*...r*; sums
/// become guarded branch nodes per the conditional rule, sequences
/// concatenate, parallel components are rejected. Requires the construction
/// history recorded by the regular operations.
BoundExpr interleave_rely_expr(const RelyCondition& rely, const IpBes& es,
                               const StarOptions& star_opt = {});

/// The bound materialized to a single program (small scale only).
ConvexProgram interleave_rely(const RelyCondition& rely, const IpBes& es,
                              const ComposeLimits& lim = {}, const StarOptions& star_opt = {});

/// Exact minimum of coeff . mu over every behaviour of the bound from state
/// s; nullopt when the bound has no behaviour from s (vacuous).
/// Works directly on halfspace factors through exact LPs, so chains at the
/// case-study scale never materialize their (astronomically large) hulls.
std::optional<Rat> bound_minimize(const BoundExpr& expr, const RatVec& coeff, int s);

/// Every behaviour of the bound from every state satisfies the per-state
/// constraint sets of `target` (halfspace or vertex-like entries). States
/// where `restrict_to` (a test) fails are skipped when provided.
struct RefinementOutcome {
    bool holds = true;
    std::string witness; // failing state / constraint when holds is false
};
RefinementOutcome bound_refines(const BoundExpr& expr, const ConvexProgram& target,
                                const ConvexProgram* restrict_to = nullptr);

/// Strongest guarantee: the nondeterministic choice of all atomic actions in
/// the structure; stutter-only structures yield skip.
ConvexProgram guarantee_of(const IpBes& es);

/// Per-label criterion for es below g*: every label refines g or stutters.
bool check_guarantee(const IpBes& es, const ConvexProgram& g);

/// Pointwise intersection of rely bases; the program is Partial at states
/// with empty intersection, and an empty-program error is raised when the
/// intersection is empty everywhere.
ConvexProgram rely_intersection(const ConvexProgram& r1, const ConvexProgram& r2,
                                std::size_t cap = 1u << 16);

/// The judgment {P, R} E {G, Q}: valid iff P.(R||E) sequentially refines Q
/// and E simulates into G*.
/// Q is a composition chain of programs (length 1 for a plain postcondition);
/// chains are checked stepwise through the per-factor refinements and the
/// absorption lemmas Q.(skip+r) and (skip+r).Q below Q, mirroring the fused
/// derivation.
struct PostCondition {
    std::vector<ConvexProgram> chain;
};

struct Quintuple {
    ConvexProgram pre; // Test kind restricting initial states, or a program factor
    RelyCondition rely;
    IpBes component;
    RelyCondition guar;
    PostCondition post;
};

struct CheckOptions {
    ComposeLimits compose;
    StarOptions star;
    /// Depth for the bounded rely-law validation; 0 disables it.
    int rely_law_depth = 1;
    bool rely_law_semantics = false;
};

struct Verdict {
    bool valid = false;
    bool refinement_ok = false;
    bool guarantee_ok = false;
    bool rely_ok = false;
    std::string detail;
};

Verdict check_quintuple(const Quintuple& q, const CheckOptions& opt = {});

/// Concurrency rule: composes two checked quintuples over par(E1,E2) with
/// rely base r1 meet r2 and guarantee base g1 + g2, provided g1 refines r2
/// and g2 refines r1 and the preconditions agree. The post is taken from the
/// first premise (symmetric variant from the second).
struct ComposeResult {
    std::optional<Quintuple> quintuple;
    std::string rejection;
};
ComposeResult compose_concurrent(const Quintuple& q1, const Quintuple& q2,
                                 bool post_from_second = false,
                                 std::size_t intersect_cap = 1u << 16);

/// One premise of the explicit probability-bound rule: a certified
/// [[r*||E]](s0)(O) >= p fact plus the guarantee base used for the
/// simulation side conditions.
struct BoundPremise {
    RelyCondition rely;
    ConvexProgram guar_base;
    IpBes component;
    int s0 = 0;
    std::vector<bool> target;
    Rat p;
};

/// Certifies both premises (halfspace post mu(O) >= p through the bound
/// chain) and the cross side conditions, then returns the raw lower bound
/// p1 + p2 - 1 on mu(O1 and O2); deliberately not clamped at 0.
struct ProbabilityBound {
    Rat bound;
    std::vector<bool> target;
};
ProbabilityBound probability_bound(const BoundPremise& b1, const BoundPremise& b2,
                                   const CheckOptions& opt = {});

} // namespace prgc

#endif
