// Copyright (c) prgc contributors.
// SPDX-License-Identifier: Apache-2.0
#ifndef PRGC_RNG_HPP
#define PRGC_RNG_HPP

#include "prgc/rational.hpp"

#include <cstdint>
#include <random>

namespace prgc {

/// Deterministic RNG wrapper. mt19937_64 output is pinned by the standard;
/// the sampling helpers below avoid std distributions, whose sequences are
/// implementation-defined.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    /// Uniform integer in [lo, hi], rejection sampled.
    int uniform_int(int lo, int hi) {
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t r;
        do {
            r = eng_();
        } while (r >= limit);
        return lo + static_cast<int>(r % span);
    }

    bool coin() { return (eng_() & 1u) != 0; }

  private:
    std::mt19937_64 eng_;
};

} // namespace prgc

#endif
