// Copyright (c) prgc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "prgc/sieve.hpp"

#include <algorithm>
#include <numeric>

namespace prgc {
namespace {

Rat rat_pow(const Rat& base, long e) {
    Rat out(1);
    for (long k = 0; k < e; ++k) out *= base;
    return out;
}

bool is_prime(int v) {
    if (v < 2) return false;
    for (int d = 2; d * d <= v; ++d)
        if (v % d == 0) return false;
    return true;
}

long lcm_capped(long a, long b, long cap) {
    long g = std::gcd(a, b);
    long l = a / g * b;
    return l > cap ? cap + 1 : l;
}

void require_n(int n) {
    if (n < 4) fail("domain", "the sieve needs n >= 4 (no composite threads otherwise)");
    if (n > 36) fail("range", "desk-scale sieve is capped at n = 36");
}

} // namespace

int sieve_isqrt(int n) {
    int k = 0;
    while ((k + 1) * (k + 1) <= n) ++k;
    return k;
}

std::vector<int> sieve_composites(int n) {
    std::vector<int> out;
    for (int v = 4; v <= n; ++v)
        if (!is_prime(v)) out.push_back(v);
    return out;
}

std::vector<long> sieve_g_exponents(int n) {
    require_n(n);
    int root = sieve_isqrt(n);
    std::vector<long> out;
    for (int i = 2; i <= root; ++i) {
        // Multiples of i in [2i, n] minus those divisible by a smaller index,
        // by inclusion-exclusion over subsets of {2..i-1}.
        long total = n / i - 1;
        std::vector<int> smaller;
        for (int j = 2; j < i; ++j) smaller.push_back(j);
        long removed = 0;
        int m = static_cast<int>(smaller.size());
        for (int bits = 1; bits < (1 << m); ++bits) {
            long l = i;
            int k = 0;
            for (int b = 0; b < m; ++b)
                if (bits & (1 << b)) {
                    l = lcm_capped(l, smaller[static_cast<std::size_t>(b)], n);
                    ++k;
                }
            if (l > n) continue;
            long count = n / l - (2 * i - 1) / l;
            removed += (k % 2 == 1 ? count : -count);
        }
        out.push_back(total - removed);
    }
    return out;
}

std::vector<long> sieve_g_exponents_direct(int n) {
    require_n(n);
    int root = sieve_isqrt(n);
    std::vector<long> out;
    for (int i = 2; i <= root; ++i) {
        long fresh = 0;
        for (int m = 2 * i; m <= n; m += i) {
            bool taken = false;
            for (int j = 2; j < i && !taken; ++j)
                if (m % j == 0) taken = true;
            if (!taken) ++fresh;
        }
        out.push_back(fresh);
    }
    return out;
}

std::pair<Rat, Rat> sieve_bounds(int n, const Rat& p) {
    require_n(n);
    require_probability(p, "sieve failure probability");
    int root = sieve_isqrt(n);
    Rat f(0);
    for (int i = 2; i <= root; ++i) f += rat_pow(p, n / i - 1);
    f -= root - 2;
    Rat g(1);
    for (long e : sieve_g_exponents(n)) g *= rat_pow(p, e);
    return {f, g};
}

Rat sieve_exact(int n, const Rat& p) {
    require_n(n);
    require_probability(p, "sieve failure probability");
    int root = sieve_isqrt(n);
    Rat out(1);
    for (int c : sieve_composites(n)) {
        long hits = 0;
        for (int i = 2; i <= root; ++i)
            if (c % i == 0 && c >= 2 * i) ++hits;
        // c survives all its removal attempts with probability (1-p)^hits.
        out *= Rat(1) - rat_pow(Rat(1) - p, hits);
    }
    return out;
}

SieveModel sieve_generate(int n, const Rat& p, int max_composites) {
    require_n(n);
    require_probability(p, "sieve failure probability");
    SieveModel m;
    m.n = n;
    m.p = p;
    m.composites = sieve_composites(n);
    for (int v = 2; v <= n; ++v)
        if (is_prime(v)) m.primes.push_back(v);
    int k = static_cast<int>(m.composites.size());
    if (k > max_composites)
        fail("explosion", "sieve model needs 2^" + std::to_string(k) +
                              " states; raise max_composites to allow it");

    int nstates = 1 << k;
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(nstates));
    for (int mask = 0; mask < nstates; ++mask) {
        std::string name = "{";
        bool first = true;
        for (int b = 0; b < k; ++b)
            if (mask & (1 << b)) {
                if (!first) name += ",";
                name += std::to_string(m.composites[static_cast<std::size_t>(b)]);
                first = false;
            }
        name += "}";
        names.push_back(std::move(name));
    }
    m.space = make_space(std::move(names));
    m.s0 = nstates - 1;

    auto bit_of = [&](int c) {
        auto it = std::lower_bound(m.composites.begin(), m.composites.end(), c);
        return static_cast<int>(it - m.composites.begin());
    };

    // Subset-decreasing rely: r(s) = conv{ delta_t : t a submask of s }.
    {
        std::vector<ConvexSet> body;
        for (int mask = 0; mask < nstates; ++mask) {
            std::vector<int> subs;
            int sub = mask;
            for (;;) {
                subs.push_back(sub);
                if (sub == 0) break;
                sub = (sub - 1) & mask;
            }
            body.push_back(ConvexSet::point_simplex(m.space, std::move(subs)));
        }
        m.rely_base = ConvexProgram::program(m.space, std::move(body));
        m.rely = RelyCondition::from_atomic(m.rely_base);
    }

    int root = sieve_isqrt(n);
    for (int i = 2; i <= root; ++i) {
        m.thread_ids.push_back(i);
        std::vector<IpBes> atoms;
        std::vector<ConvexProgram> qs;
        std::vector<bool> o_i(static_cast<std::size_t>(nstates), true);
        for (int j = 2; j <= n / i; ++j) {
            int c = i * j;
            int bit = bit_of(c);
            // u_{i,j}(s) = (1-p) delta_s + p delta_{s minus c}.
            std::vector<ConvexSet> body;
            for (int mask = 0; mask < nstates; ++mask) {
                int removed = mask & ~(1 << bit);
                WeightEntries we;
                we.emplace_back(removed, p);
                we.emplace_back(mask, Rat(1) - p);
                body.push_back(ConvexSet::singleton(Distribution(m.space, std::move(we))));
            }
            ConvexProgram u = ConvexProgram::program(m.space, std::move(body));
            atoms.push_back(IpBes::atomic(u, "u[" + std::to_string(i) + "," + std::to_string(j) +
                                                 "]"));

            // Q_{i,j}(s): mu(O_{i,j}) >= p and mu({t : t a submask of s}) = 1.
            RatVec o_coeff(static_cast<std::size_t>(nstates), Rat(0));
            for (int mask = 0; mask < nstates; ++mask)
                if (!(mask & (1 << bit))) o_coeff[static_cast<std::size_t>(mask)] = 1;
            std::vector<ConvexSet> qbody;
            for (int mask = 0; mask < nstates; ++mask) {
                RatVec sub_coeff(static_cast<std::size_t>(nstates), Rat(0));
                for (int t = 0; t < nstates; ++t)
                    if ((t & mask) == t) sub_coeff[static_cast<std::size_t>(t)] = 1;
                qbody.push_back(ConvexSet::halfspaces(
                    m.space, {HalfspaceConstraint{o_coeff, p, false},
                              HalfspaceConstraint{std::move(sub_coeff), Rat(1), true}}));
            }
            qs.push_back(ConvexProgram::program(m.space, std::move(qbody)));
            for (int mask = 0; mask < nstates; ++mask)
                if (mask & (1 << bit)) o_i[static_cast<std::size_t>(mask)] = false;
        }
        IpBes thread = atoms.front();
        for (std::size_t a = 1; a < atoms.size(); ++a) thread = seq(thread, atoms[a]);
        m.threads.push_back(std::move(thread));
        m.q_chains.push_back(std::move(qs));
        m.o_threads.push_back(std::move(o_i));
    }

    m.target.assign(static_cast<std::size_t>(nstates), true);
    for (const auto& o : m.o_threads)
        for (int mask = 0; mask < nstates; ++mask)
            if (!o[static_cast<std::size_t>(mask)]) m.target[static_cast<std::size_t>(mask)] = false;

    m.system = m.threads.front();
    for (std::size_t t = 1; t < m.threads.size(); ++t) m.system = par(m.system, m.threads[t]);
    return m;
}

Rat sieve_exact_semantics(const SieveModel& m, const SemanticsLimits& lim) {
    ConvexSet sem = semantics(m.system, m.s0, lim);
    if (sem.vertex_count() != 1)
        fail("internal", "scheduler outcomes of the sieve system disagree: " +
                             std::to_string(sem.vertex_count()) + " vertices");
    Rat mass(0);
    sem.for_each_vertex([&](const Distribution& d) { mass = d.mass_of(m.target); });
    return mass;
}

bool sieve_prime_preserving(const SieveModel& m) {
    for (const auto& thread : m.threads) {
        for (const auto& ev : thread.events()) {
            const ConvexProgram& u = ev.label;
            for (int s = 0; s < m.space->size(); ++s) {
                bool ok = true;
                u.at(s).for_each_vertex([&](const Distribution& d) {
                    for (const auto& [t, w] : d.entries()) {
                        (void)w;
                        if ((t & s) != t) ok = false; // added an element
                    }
                });
                if (!ok) return false;
            }
        }
    }
    return true;
}

Quintuple sieve_thread_quintuple(const SieveModel& m, std::size_t ti) {
    std::vector<bool> pre(static_cast<std::size_t>(m.space->size()), false);
    pre[static_cast<std::size_t>(m.s0)] = true;
    return Quintuple{ConvexProgram::test(m.space, pre), *m.rely, m.threads.at(ti), *m.rely,
                     PostCondition{m.q_chains.at(ti)}};
}

BoundPremise sieve_thread_premise(const SieveModel& m, std::size_t ti) {
    int i = m.thread_ids.at(ti);
    return BoundPremise{*m.rely, m.rely_base, m.threads.at(ti), m.s0, m.o_threads.at(ti),
                        rat_pow(m.p, m.n / i - 1)};
}

} // namespace prgc
