// Copyright (c) prgc contributors.
// SPDX-License-Identifier: Apache-2.0
#ifndef PRGC_TESTS_HELPERS_HPP
#define PRGC_TESTS_HELPERS_HPP

#include "prgc/rg.hpp"

#include <vector>

namespace prgc::testing {

inline Distribution dist(const StateSpacePtr& sp, std::vector<std::pair<int, long>> num, long den) {
    WeightEntries entries;
    for (auto [s, n] : num) entries.emplace_back(s, make_rat(n, den));
    return Distribution(sp, std::move(entries));
}

/// Deterministic two-state playground: delta_0, delta_1, the fair coin and
/// the constant assignments used throughout the worked examples.
struct TwoState {
    StateSpacePtr sp = make_space(2);
    Distribution d0 = Distribution::point(sp, 0);
    Distribution d1 = Distribution::point(sp, 1);
    Distribution mid = dist(sp, {{0, 1}, {1, 1}}, 2);
    ConvexProgram assign0 = ConvexProgram::deterministic(sp, {0, 0});
    ConvexProgram assign1 = ConvexProgram::deterministic(sp, {1, 1});
    ConvexProgram skip = ConvexProgram::skip(sp);

    ConvexProgram coin(long num = 1, long den = 2) const {
        Rat p = make_rat(num, den);
        Distribution c(sp, {{0, Rat(1) - p}, {1, p}});
        std::vector<ConvexSet> body(2, ConvexSet::singleton(c));
        return ConvexProgram::program(sp, std::move(body));
    }
};

/// Exhaustive search for hull coefficients on the denominator grid
/// {0, 1/D, ..., 1}: an implementation-independent membership oracle. A
/// found combination certifies membership; the converse direction is used on
/// instances constructed from grid mixtures.
inline bool grid_hull_oracle(const Distribution& mu, const std::vector<Distribution>& points,
                             int denom) {
    std::vector<int> weights(points.size(), 0);
    auto attempt = [&]() {
        SubDistribution acc = SubDistribution::zero(mu.space());
        for (std::size_t i = 0; i < points.size(); ++i)
            if (weights[i] > 0) acc.add_scaled(points[i], make_rat(weights[i], denom));
        return acc.is_distribution() && acc.to_distribution() == mu;
    };
    auto rec = [&](auto&& self, std::size_t i, int left) -> bool {
        if (i + 1 == points.size()) {
            weights[i] = left;
            return attempt();
        }
        for (int w = 0; w <= left; ++w) {
            weights[i] = w;
            if (self(self, i + 1, left - w)) return true;
        }
        return false;
    };
    return rec(rec, 0, denom);
}

} // namespace prgc::testing

#endif
