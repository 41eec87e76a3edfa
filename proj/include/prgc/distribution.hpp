// Copyright (c) prgc contributors.
// SPDX-License-Identifier: Apache-2.0
#ifndef PRGC_DISTRIBUTION_HPP
#define PRGC_DISTRIBUTION_HPP

#include "prgc/rational.hpp"
#include "prgc/state_space.hpp"

#include <utility>
#include <vector>

namespace prgc {

/// Sparse exact weight vector: sorted (state, weight) entries, weights > 0.
using WeightEntries = std::vector<std::pair<int, Rat>>;

/// A full probability distribution over a StateSpace; weights sum to 1 exactly.
class Distribution {
  public:
    Distribution(StateSpacePtr space, WeightEntries entries);

    /// The point distribution centred at s.
    static Distribution point(StateSpacePtr space, int s);

    const StateSpacePtr& space() const { return space_; }
    const WeightEntries& entries() const { return entries_; }

    Rat at(int s) const;
    /// mu(O) for O given as a membership mask over the state space.
    Rat mass_of(const std::vector<bool>& member) const;
    bool is_point_mass() const { return entries_.size() == 1; }
    int point_state() const { return entries_.front().first; }

    bool operator==(const Distribution& o) const { return entries_ == o.entries_; }
    bool operator!=(const Distribution& o) const { return !(*this == o); }
    /// Canonical order: lexicographic on the dense weight sequence.
    bool operator<(const Distribution& o) const;

  private:
    StateSpacePtr space_;
    WeightEntries entries_;
};

/// (mu oplus_p nu)(s) = (1-p) mu(s) + p nu(s): run mu with probability 1-p.
Distribution mix(const Distribution& mu, const Distribution& nu, const Rat& p);

/// Weights sum to at most 1; the shortfall is unresolved (or lost) mass.
class SubDistribution {
  public:
    static SubDistribution zero(StateSpacePtr space);
    SubDistribution(StateSpacePtr space, WeightEntries entries);
    explicit SubDistribution(const Distribution& d);

    const StateSpacePtr& space() const { return space_; }
    const WeightEntries& entries() const { return entries_; }

    Rat at(int s) const;
    Rat total_mass() const;
    bool is_zero() const { return entries_.empty(); }

    /// this += c * d, exact.
    void add_scaled(const Distribution& d, const Rat& c);
    void add(const SubDistribution& d);

    bool is_distribution() const { return total_mass() == 1; }
    Distribution to_distribution() const;

    bool operator==(const SubDistribution& o) const { return entries_ == o.entries_; }

  private:
    StateSpacePtr space_;
    WeightEntries entries_;
};

} // namespace prgc

#endif
