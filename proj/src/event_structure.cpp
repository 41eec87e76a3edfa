// Copyright (c) prgc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "prgc/event_structure.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace prgc {
namespace {

void canonicalize_relations(std::vector<std::pair<int, int>>& conflicts,
                            std::vector<Bundle>& bundles, std::vector<std::vector<int>>& finals) {
    for (auto& [a, b] : conflicts)
        if (a > b) std::swap(a, b);
    std::sort(conflicts.begin(), conflicts.end());
    conflicts.erase(std::unique(conflicts.begin(), conflicts.end()), conflicts.end());
    for (auto& bu : bundles) {
        std::sort(bu.sources.begin(), bu.sources.end());
        bu.sources.erase(std::unique(bu.sources.begin(), bu.sources.end()), bu.sources.end());
    }
    std::sort(bundles.begin(), bundles.end(), [](const Bundle& x, const Bundle& y) {
        return std::tie(x.target, x.sources) < std::tie(y.target, y.sources);
    });
    bundles.erase(std::unique(bundles.begin(), bundles.end(),
                              [](const Bundle& x, const Bundle& y) {
                                  return x.target == y.target && x.sources == y.sources;
                              }),
                  bundles.end());
    for (auto& f : finals) {
        std::sort(f.begin(), f.end());
        f.erase(std::unique(f.begin(), f.end()), f.end());
    }
    std::sort(finals.begin(), finals.end());
    finals.erase(std::unique(finals.begin(), finals.end()), finals.end());
}

std::vector<std::pair<int, int>> shift_conflicts(const std::vector<std::pair<int, int>>& cs, int off) {
    std::vector<std::pair<int, int>> out;
    out.reserve(cs.size());
    for (auto [a, b] : cs) out.emplace_back(a + off, b + off);
    return out;
}

std::vector<Bundle> shift_bundles(const std::vector<Bundle>& bs, int off) {
    std::vector<Bundle> out;
    out.reserve(bs.size());
    for (const auto& b : bs) {
        Bundle nb;
        nb.target = b.target + off;
        for (int s : b.sources) nb.sources.push_back(s + off);
        out.push_back(std::move(nb));
    }
    return out;
}

std::vector<std::vector<int>> shift_finals(const std::vector<std::vector<int>>& fs, int off) {
    std::vector<std::vector<int>> out;
    out.reserve(fs.size());
    for (const auto& f : fs) {
        std::vector<int> nf;
        for (int e : f) nf.push_back(e + off);
        out.push_back(std::move(nf));
    }
    return out;
}

IpBes combine(Provenance::Op op, const IpBes& a, const IpBes& b,
              std::vector<std::pair<int, int>> conflicts, std::vector<Bundle> bundles,
              std::vector<std::vector<int>> finals) {
    require_same_space(a.space(), b.space(), "event structure composition");
    std::vector<Event> events = a.events();
    events.insert(events.end(), b.events().begin(), b.events().end());
    IpBes out = IpBes::raw(a.space(), std::move(events), std::move(conflicts), std::move(bundles),
                           std::move(finals));
    auto prov = std::make_shared<Provenance>();
    prov->op = op;
    prov->children = {a, b};
    return out.with_provenance(std::move(prov));
}

} // namespace

IpBes IpBes::raw(StateSpacePtr space, std::vector<Event> events,
                 std::vector<std::pair<int, int>> conflicts, std::vector<Bundle> bundles,
                 std::vector<std::vector<int>> finals) {
    canonicalize_relations(conflicts, bundles, finals);
    IpBes es;
    es.space_ = std::move(space);
    es.events_ = std::move(events);
    es.conflicts_ = std::move(conflicts);
    es.bundles_ = std::move(bundles);
    es.finals_ = std::move(finals);
    return es;
}

IpBes IpBes::unit(StateSpacePtr space) {
    IpBes es = raw(space, {Event{"skip", ConvexProgram::skip(space)}}, {}, {}, {{0}});
    auto prov = std::make_shared<Provenance>();
    prov->op = Provenance::Op::Unit;
    return es.with_provenance(std::move(prov));
}

IpBes IpBes::zero(StateSpacePtr space) {
    IpBes es = raw(std::move(space), {}, {}, {}, {});
    auto prov = std::make_shared<Provenance>();
    prov->op = Provenance::Op::Zero;
    return es.with_provenance(std::move(prov));
}

IpBes IpBes::atomic(ConvexProgram label, std::string name) {
    auto space = label.space();
    IpBes es = raw(std::move(space), {Event{std::move(name), std::move(label)}}, {}, {}, {{0}});
    auto prov = std::make_shared<Provenance>();
    prov->op = Provenance::Op::Atomic;
    return es.with_provenance(std::move(prov));
}

bool IpBes::in_conflict(int a, int b) const {
    if (a > b) std::swap(a, b);
    return std::binary_search(conflicts_.begin(), conflicts_.end(), std::make_pair(a, b));
}

std::vector<int> IpBes::initial_events() const {
    std::vector<bool> has_bundle(events_.size(), false);
    for (const auto& b : bundles_) has_bundle[static_cast<std::size_t>(b.target)] = true;
    std::vector<int> out;
    for (int e = 0; e < event_count(); ++e)
        if (!has_bundle[static_cast<std::size_t>(e)]) out.push_back(e);
    return out;
}

IpBes IpBes::with_provenance(ProvenancePtr p) const {
    IpBes copy = *this;
    copy.prov_ = std::move(p);
    return copy;
}

bool IpBes::operator==(const IpBes& o) const {
    if (!same_space(space_, o.space_)) return false;
    if (events_.size() != o.events_.size()) return false;
    for (std::size_t i = 0; i < events_.size(); ++i)
        if (events_[i].label != o.events_[i].label) return false;
    return conflicts_ == o.conflicts_ && finals_ == o.finals_ &&
           bundles_.size() == o.bundles_.size() &&
           std::equal(bundles_.begin(), bundles_.end(), o.bundles_.begin(),
                      [](const Bundle& x, const Bundle& y) {
                          return x.target == y.target && x.sources == y.sources;
                      });
}

IpBes sum(const IpBes& a, const IpBes& b) {
    if (a.event_count() == 0) return b; // 0 + E = E
    if (b.event_count() == 0) return a;
    int off = a.event_count();
    std::vector<std::pair<int, int>> conflicts = a.conflicts();
    auto bc = shift_conflicts(b.conflicts(), off);
    conflicts.insert(conflicts.end(), bc.begin(), bc.end());
    // Final-set members of the two sides conflict pairwise, and so do the
    // initial events; this keeps every combined final set self-conflicting.
    for (const auto& x : a.finals())
        for (const auto& y : b.finals())
            for (int ea : x)
                for (int eb : y) conflicts.emplace_back(ea, eb + off);
    for (int ea : a.initial_events())
        for (int eb : b.initial_events()) conflicts.emplace_back(ea, eb + off);
    std::vector<Bundle> bundles = a.bundles();
    auto bb = shift_bundles(b.bundles(), off);
    bundles.insert(bundles.end(), bb.begin(), bb.end());
    std::vector<std::vector<int>> finals;
    for (const auto& x : a.finals())
        for (const auto& y : b.finals()) {
            std::vector<int> u = x;
            for (int e : y) u.push_back(e + off);
            finals.push_back(std::move(u));
        }
    return combine(Provenance::Op::Sum, a, b, std::move(conflicts), std::move(bundles),
                   std::move(finals));
}

IpBes seq(const IpBes& a, const IpBes& b) {
    if (a.event_count() == 0) return b; // 0 . E = E
    if (b.event_count() == 0) return a; // E . 0 = E
    int off = a.event_count();
    std::vector<std::pair<int, int>> conflicts = a.conflicts();
    auto bc = shift_conflicts(b.conflicts(), off);
    conflicts.insert(conflicts.end(), bc.begin(), bc.end());
    std::vector<Bundle> bundles = a.bundles();
    auto bb = shift_bundles(b.bundles(), off);
    bundles.insert(bundles.end(), bb.begin(), bb.end());
    for (int eb : b.initial_events())
        for (const auto& x : a.finals()) {
            Bundle nb;
            nb.sources = x;
            nb.target = eb + off;
            bundles.push_back(std::move(nb));
        }
    return combine(Provenance::Op::Seq, a, b, std::move(conflicts), std::move(bundles),
                   shift_finals(b.finals(), off));
}

IpBes par(const IpBes& a, const IpBes& b) {
    if (a.event_count() == 0) return b;
    if (b.event_count() == 0) return a;
    int off = a.event_count();
    std::vector<std::pair<int, int>> conflicts = a.conflicts();
    auto bc = shift_conflicts(b.conflicts(), off);
    conflicts.insert(conflicts.end(), bc.begin(), bc.end());
    std::vector<Bundle> bundles = a.bundles();
    auto bb = shift_bundles(b.bundles(), off);
    bundles.insert(bundles.end(), bb.begin(), bb.end());
    std::vector<std::vector<int>> finals = a.finals();
    auto bf = shift_finals(b.finals(), off);
    finals.insert(finals.end(), bf.begin(), bf.end());
    return combine(Provenance::Op::Par, a, b, std::move(conflicts), std::move(bundles),
                   std::move(finals));
}

IpBes star_unfold(const IpBes& a, const IpBes& b, int depth) {
    if (depth < 0) fail("domain", "star_unfold depth must be nonnegative");
    if (depth == 0) return b;
    return sum(b, seq(a, star_unfold(a, b, depth - 1)));
}

ValidationReport validate(const IpBes& es) {
    ValidationReport rep;
    int n = es.event_count();
    for (auto [a, b] : es.conflicts()) {
        if (a < 0 || a >= n || b < 0 || b >= n)
            rep.problems.push_back("conflict pair outside the event set");
        else if (a == b)
            rep.problems.push_back("reflexive conflict on event " + es.event(a).name);
    }
    for (const auto& bu : es.bundles()) {
        if (bu.target < 0 || bu.target >= n) {
            rep.problems.push_back("bundle target outside the event set");
            continue;
        }
        for (int s : bu.sources)
            if (s < 0 || s >= n) rep.problems.push_back("bundle source outside the event set");
        for (std::size_t i = 0; i < bu.sources.size(); ++i)
            for (std::size_t j = i + 1; j < bu.sources.size(); ++j)
                if (!es.in_conflict(bu.sources[i], bu.sources[j]))
                    rep.problems.push_back("non-conflicting bundle source pair {" +
                                           es.event(bu.sources[i]).name + ", " +
                                           es.event(bu.sources[j]).name + "} for " +
                                           es.event(bu.target).name);
    }
    for (const auto& f : es.finals()) {
        for (int e : f)
            if (e < 0 || e >= n) rep.problems.push_back("final-set member outside the event set");
        for (std::size_t i = 0; i < f.size(); ++i)
            for (std::size_t j = i + 1; j < f.size(); ++j)
                if (!es.in_conflict(f[i], f[j]))
                    rep.problems.push_back("non-conflicting final-set pair {" + es.event(f[i]).name +
                                           ", " + es.event(f[j]).name + "}");
    }
    for (const auto& e : es.events())
        if (!same_space(e.label.space(), es.space()))
            rep.problems.push_back("label of " + e.name + " is over a different state space");
    return rep;
}

std::vector<int> enabled_after(const IpBes& es, std::uint64_t mask) {
    int n = es.event_count();
    std::vector<int> out;
    for (int e = 0; e < n; ++e) {
        if (mask & (1ull << e)) continue;
        bool ok = true;
        for (int o = 0; o < n && ok; ++o)
            if ((mask & (1ull << o)) && es.in_conflict(e, o)) ok = false;
        if (!ok) continue;
        for (const auto& bu : es.bundles()) {
            if (bu.target != e) continue;
            bool hit = false;
            for (int s : bu.sources)
                if (mask & (1ull << s)) {
                    hit = true;
                    break;
                }
            if (!hit) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(e);
    }
    return out;
}

TraceSet TraceSet::enumerate(const IpBes& es, std::size_t cap) {
    if (es.event_count() > 64) fail("explosion", "trace enumeration is limited to 64 events");
    TraceSet ts;
    ts.nodes_.push_back(Node{});
    for (std::size_t i = 0; i < ts.nodes_.size(); ++i) {
        std::uint64_t mask = ts.nodes_[i].mask;
        auto exts = enabled_after(es, mask);
        ts.nodes_[i].maximal = exts.empty();
        for (int e : exts) {
            Node child;
            child.parent = static_cast<int>(i);
            child.via = e;
            child.depth = ts.nodes_[i].depth + 1;
            child.mask = mask | (1ull << e);
            ts.nodes_[i].children.push_back(static_cast<int>(ts.nodes_.size()));
            ts.nodes_.push_back(std::move(child));
            if (ts.nodes_.size() > cap)
                fail("explosion", "trace enumeration exceeded cap of " + std::to_string(cap) +
                                      " (partial count " + std::to_string(ts.nodes_.size()) + ")");
        }
    }
    return ts;
}

std::vector<int> TraceSet::events_of(int node) const {
    std::vector<int> out;
    for (int cur = node; cur != 0; cur = nodes_[static_cast<std::size_t>(cur)].parent)
        out.push_back(nodes_[static_cast<std::size_t>(cur)].via);
    std::reverse(out.begin(), out.end());
    return out;
}

int TraceSet::extend(int node, int event) const {
    for (int c : nodes_[static_cast<std::size_t>(node)].children)
        if (nodes_[static_cast<std::size_t>(c)].via == event) return c;
    return -1;
}

std::vector<int> TraceSet::maximal_nodes() const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i)
        if (nodes_[static_cast<std::size_t>(i)].maximal) out.push_back(i);
    return out;
}

int TraceSet::max_depth() const {
    int d = 0;
    for (const auto& n : nodes_) d = std::max(d, n.depth);
    return d;
}

bool is_feasible(const IpBes& es, const TraceSet& ts) {
    int n = es.space()->size();
    for (int i = 0; i < ts.size(); ++i) {
        const auto& node = ts.node(i);
        if (node.maximal) continue;
        std::vector<bool> covered(static_cast<std::size_t>(n), false);
        for (int c : node.children) {
            const ConvexProgram& label = es.event(ts.node(c).via).label;
            for (int s = 0; s < n; ++s)
                if (!label.is_empty_at(s)) covered[static_cast<std::size_t>(s)] = true;
        }
        if (!std::all_of(covered.begin(), covered.end(), [](bool b) { return b; })) return false;
    }
    return true;
}

bool is_feasible(const IpBes& es) { return is_feasible(es, TraceSet::enumerate(es, 1u << 20)); }

bool equal_up_to_renaming(const IpBes& a, const IpBes& b) {
    if (!same_space(a.space(), b.space())) return false;
    int n = a.event_count();
    if (n != b.event_count()) return false;
    if (a.conflicts().size() != b.conflicts().size() || a.bundles().size() != b.bundles().size() ||
        a.finals().size() != b.finals().size())
        return false;

    std::vector<int> map(static_cast<std::size_t>(n), -1);
    std::vector<bool> used(static_cast<std::size_t>(n), false);

    auto consistent = [&](int ea, int eb) {
        if (a.event(ea).label != b.event(eb).label) return false;
        for (int o = 0; o < n; ++o) {
            if (map[static_cast<std::size_t>(o)] < 0 || o == ea) continue;
            if (a.in_conflict(ea, o) != b.in_conflict(eb, map[static_cast<std::size_t>(o)]))
                return false;
        }
        return true;
    };

    auto full_check = [&]() {
        auto remap_bundles = [&](const IpBes& src) {
            std::vector<Bundle> out;
            for (const auto& bu : src.bundles()) {
                Bundle nb;
                nb.target = map[static_cast<std::size_t>(bu.target)];
                for (int s : bu.sources) nb.sources.push_back(map[static_cast<std::size_t>(s)]);
                std::sort(nb.sources.begin(), nb.sources.end());
                out.push_back(std::move(nb));
            }
            std::sort(out.begin(), out.end(), [](const Bundle& x, const Bundle& y) {
                return std::tie(x.target, x.sources) < std::tie(y.target, y.sources);
            });
            return out;
        };
        auto mb = remap_bundles(a);
        if (!std::equal(mb.begin(), mb.end(), b.bundles().begin(),
                        [](const Bundle& x, const Bundle& y) {
                            return x.target == y.target && x.sources == y.sources;
                        }))
            return false;
        std::vector<std::vector<int>> mf;
        for (const auto& f : a.finals()) {
            std::vector<int> nf;
            for (int e : f) nf.push_back(map[static_cast<std::size_t>(e)]);
            std::sort(nf.begin(), nf.end());
            mf.push_back(std::move(nf));
        }
        std::sort(mf.begin(), mf.end());
        return mf == b.finals();
    };

    auto rec = [&](auto&& self, int ea) -> bool {
        if (ea == n) return full_check();
        for (int eb = 0; eb < n; ++eb) {
            if (used[static_cast<std::size_t>(eb)] || !consistent(ea, eb)) continue;
            map[static_cast<std::size_t>(ea)] = eb;
            used[static_cast<std::size_t>(eb)] = true;
            if (self(self, ea + 1)) return true;
            used[static_cast<std::size_t>(eb)] = false;
            map[static_cast<std::size_t>(ea)] = -1;
        }
        return false;
    };
    return rec(rec, 0);
}

bool trace_sets_equal_under(const TraceSet& a, const TraceSet& b, const std::vector<int>& event_map) {
    if (a.size() != b.size()) return false;
    std::set<std::vector<int>> bt;
    for (int i = 0; i < b.size(); ++i) bt.insert(b.events_of(i));
    for (int i = 0; i < a.size(); ++i) {
        std::vector<int> mapped;
        for (int e : a.events_of(i)) mapped.push_back(event_map.at(static_cast<std::size_t>(e)));
        if (!bt.count(mapped)) return false;
    }
    return true;
}

} // namespace prgc
