// Copyright (c) prgc contributors.
// SPDX-License-Identifier: Apache-2.0
#ifndef PRGC_EVENT_STRUCTURE_HPP
#define PRGC_EVENT_STRUCTURE_HPP

#include "prgc/program.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace prgc {

/// One occurrence of an atomic action; the label is its program.
struct Event {
    std::string name;
    ConvexProgram label;
};

/// x |-> e: e is enabled only after some member of the pairwise-conflicting
/// set x has occurred.
struct Bundle {
    std::vector<int> sources; // sorted
    int target = -1;
};

class IpBes;

/// Construction history recorded by the regular operations; drives the
/// structural rely-interleaving rewrite and the compositionality tests.
struct Provenance {
    enum class Op { Unit, Zero, Atomic, Sum, Seq, Par };
    Op op = Op::Atomic;
    std::vector<IpBes> children;
};
using ProvenancePtr = std::shared_ptr<const Provenance>;

/// Bundle event structure with internal probability: events, bundle and
/// conflict relations, per-event program labels and final sets. Binary
/// operations renumber the right operand by the left operand's event count,
/// which keeps event identities disjoint and makes the renaming reconstructible.
class IpBes {
  public:
    /// Unvalidated construction; run validate() to obtain the invariant report.
    static IpBes raw(StateSpacePtr space, std::vector<Event> events,
                     std::vector<std::pair<int, int>> conflicts, std::vector<Bundle> bundles,
                     std::vector<std::vector<int>> finals);

    /// The constant 1: a single skip-labelled event which is also final.
    static IpBes unit(StateSpacePtr space);
    /// The constant 0: the empty quintuple.
    static IpBes zero(StateSpacePtr space);
    static IpBes atomic(ConvexProgram label, std::string name = "a");

    const StateSpacePtr& space() const { return space_; }
    int event_count() const { return static_cast<int>(events_.size()); }
    const std::vector<Event>& events() const { return events_; }
    const Event& event(int e) const { return events_.at(static_cast<std::size_t>(e)); }
    const std::vector<std::pair<int, int>>& conflicts() const { return conflicts_; }
    const std::vector<Bundle>& bundles() const { return bundles_; }
    const std::vector<std::vector<int>>& finals() const { return finals_; }
    bool in_conflict(int a, int b) const;
    /// Events that are the target of no bundle.
    std::vector<int> initial_events() const;

    const ProvenancePtr& provenance() const { return prov_; }
    IpBes with_provenance(ProvenancePtr p) const;

    /// Structural equality on labels and relations; display names are ignored.
    bool operator==(const IpBes& o) const;
    bool operator!=(const IpBes& o) const { return !(*this == o); }

  private:
    StateSpacePtr space_;
    std::vector<Event> events_;
    std::vector<std::pair<int, int>> conflicts_;
    std::vector<Bundle> bundles_;
    std::vector<std::vector<int>> finals_;
    ProvenancePtr prov_;
};

/// Nondeterministic choice: initial events and final-set members of the two
/// sides are put in conflict; final sets are the pairwise unions.
IpBes sum(const IpBes& a, const IpBes& b);
/// Sequential composition: every final set of a becomes a bundle into each
/// initial event of b; the final sets are b's.
IpBes seq(const IpBes& a, const IpBes& b);
/// Concurrent composition: plain component-wise union.
IpBes par(const IpBes& a, const IpBes& b);

/// depth-th element of the chain b, b + a.b, b + a.(b + a.b), ... built with
/// fresh copies; depth 0 is b itself.
IpBes star_unfold(const IpBes& a, const IpBes& b, int depth);

struct ValidationReport {
    std::vector<std::string> problems;
    bool ok() const { return problems.empty(); }
};
ValidationReport validate(const IpBes& es);

/// Prefix tree of all traces in shortlex order; node 0 is the empty trace.
/// Requires at most 64 events (desk-scale executed-set bitmasks).
class TraceSet {
  public:
    struct Node {
        int parent = -1;
        int via = -1; // event appended to the parent trace
        int depth = 0;
        std::uint64_t mask = 0; // executed events
        std::vector<int> children;
        bool maximal = false;
    };

    static TraceSet enumerate(const IpBes& es, std::size_t cap);

    int size() const { return static_cast<int>(nodes_.size()); }
    const Node& node(int i) const { return nodes_.at(static_cast<std::size_t>(i)); }
    const std::vector<Node>& nodes() const { return nodes_; }
    std::vector<int> events_of(int node) const;
    /// Child of `node` via `event`, or -1.
    int extend(int node, int event) const;
    std::vector<int> maximal_nodes() const;
    int max_depth() const;

  private:
    std::vector<Node> nodes_;
};

/// Events whose extensions are possible after the executed set `mask`:
/// unexecuted, conflict-free against mask, every incoming bundle hit.
std::vector<int> enabled_after(const IpBes& es, std::uint64_t mask);

/// Every non-maximal trace can continue from every state: the extension
/// labels' domains cover the whole space.
bool is_feasible(const IpBes& es, const TraceSet& ts);
bool is_feasible(const IpBes& es);

/// Exact structural isomorphism search (labels, conflicts, bundles, finals).
bool equal_up_to_renaming(const IpBes& a, const IpBes& b);

/// Trace sets compared through an explicit event bijection a -> b.
bool trace_sets_equal_under(const TraceSet& a, const TraceSet& b, const std::vector<int>& event_map);

} // namespace prgc

#endif
