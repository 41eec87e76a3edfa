// Copyright (c) prgc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "prgc/distribution.hpp"

#include <algorithm>

namespace prgc {
namespace {

void normalize_entries(const StateSpacePtr& space, WeightEntries& entries) {
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    WeightEntries out;
    out.reserve(entries.size());
    for (auto& [s, w] : entries) {
        if (s < 0 || s >= space->size()) fail("state-space", "weight entry outside the state space");
        if (w < 0) fail("domain", "negative probability weight");
        if (w == 0) continue;
        if (!out.empty() && out.back().first == s)
            out.back().second += w;
        else
            out.emplace_back(s, w);
    }
    entries = std::move(out);
}

Rat entries_sum(const WeightEntries& entries) {
    Rat total = 0;
    for (const auto& [s, w] : entries) total += w;
    return total;
}

} // namespace

Distribution::Distribution(StateSpacePtr space, WeightEntries entries)
    : space_(std::move(space)), entries_(std::move(entries)) {
    normalize_entries(space_, entries_);
    if (entries_sum(entries_) != 1) fail("domain", "distribution weights must sum to 1 exactly");
}

Distribution Distribution::point(StateSpacePtr space, int s) {
    if (s < 0 || s >= space->size()) fail("state-space", "point distribution at unknown state");
    return Distribution(std::move(space), {{s, Rat(1)}});
}

Rat Distribution::at(int s) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), s,
                               [](const auto& e, int v) { return e.first < v; });
    if (it != entries_.end() && it->first == s) return it->second;
    return Rat(0);
}

Rat Distribution::mass_of(const std::vector<bool>& member) const {
    Rat total = 0;
    for (const auto& [s, w] : entries_)
        if (member[static_cast<std::size_t>(s)]) total += w;
    return total;
}

bool Distribution::operator<(const Distribution& o) const {
    // Walk both sorted entry lists; a missing index means weight 0.
    std::size_t i = 0, j = 0;
    while (i < entries_.size() || j < o.entries_.size()) {
        int si = i < entries_.size() ? entries_[i].first : space_->size();
        int sj = j < o.entries_.size() ? o.entries_[j].first : space_->size();
        if (si < sj) return false;       // this has positive weight first -> greater dense prefix
        if (sj < si) return true;
        if (entries_[i].second != o.entries_[j].second)
            return entries_[i].second < o.entries_[j].second;
        ++i;
        ++j;
    }
    return false;
}

Distribution mix(const Distribution& mu, const Distribution& nu, const Rat& p) {
    require_probability(p, "mixing parameter");
    require_same_space(mu.space(), nu.space(), "mix");
    SubDistribution acc = SubDistribution::zero(mu.space());
    acc.add_scaled(mu, Rat(1) - p);
    acc.add_scaled(nu, p);
    return acc.to_distribution();
}

SubDistribution SubDistribution::zero(StateSpacePtr space) {
    return SubDistribution(std::move(space), {});
}

SubDistribution::SubDistribution(StateSpacePtr space, WeightEntries entries)
    : space_(std::move(space)), entries_(std::move(entries)) {
    normalize_entries(space_, entries_);
    if (entries_sum(entries_) > 1) fail("domain", "subdistribution mass exceeds 1");
}

SubDistribution::SubDistribution(const Distribution& d)
    : space_(d.space()), entries_(d.entries()) {}

Rat SubDistribution::at(int s) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), s,
                               [](const auto& e, int v) { return e.first < v; });
    if (it != entries_.end() && it->first == s) return it->second;
    return Rat(0);
}

Rat SubDistribution::total_mass() const { return entries_sum(entries_); }

void SubDistribution::add_scaled(const Distribution& d, const Rat& c) {
    if (c == 0) return;
    if (c < 0) fail("domain", "negative scale in subdistribution accumulation");
    WeightEntries merged;
    merged.reserve(entries_.size() + d.entries().size());
    std::size_t i = 0, j = 0;
    const auto& de = d.entries();
    while (i < entries_.size() || j < de.size()) {
        int si = i < entries_.size() ? entries_[i].first : space_->size();
        int sj = j < de.size() ? de[j].first : space_->size();
        if (si < sj) {
            merged.push_back(entries_[i++]);
        } else if (sj < si) {
            merged.emplace_back(sj, c * de[j++].second);
        } else {
            merged.emplace_back(si, entries_[i].second + c * de[j].second);
            ++i;
            ++j;
        }
    }
    entries_ = std::move(merged);
    if (entries_sum(entries_) > 1) fail("domain", "subdistribution mass exceeds 1");
}

void SubDistribution::add(const SubDistribution& d) {
    WeightEntries merged;
    merged.reserve(entries_.size() + d.entries_.size());
    std::size_t i = 0, j = 0;
    while (i < entries_.size() || j < d.entries_.size()) {
        int si = i < entries_.size() ? entries_[i].first : space_->size();
        int sj = j < d.entries_.size() ? d.entries_[j].first : space_->size();
        if (si < sj)
            merged.push_back(entries_[i++]);
        else if (sj < si)
            merged.push_back(d.entries_[j++]);
        else {
            merged.emplace_back(si, entries_[i].second + d.entries_[j].second);
            ++i;
            ++j;
        }
    }
    entries_ = std::move(merged);
    if (entries_sum(entries_) > 1) fail("domain", "subdistribution mass exceeds 1");
}

Distribution SubDistribution::to_distribution() const {
    if (!is_distribution()) fail("termination", "subdistribution mass is below 1");
    return Distribution(space_, entries_);
}

} // namespace prgc
