// Copyright (c) prgc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "prgc/linear.hpp"

#include "prgc/error.hpp"

#include <algorithm>

namespace prgc {
namespace {

struct Tableau {
    RatMatrix rows;        // m x (n+1), rhs in the last column
    RatVec obj;            // n+1, obj[n] = -objective value
    std::vector<int> basis; // basic column per row
    int n = 0;

    void pivot(int r, int s) {
        Rat inv = 1 / rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)];
        auto& prow = rows[static_cast<std::size_t>(r)];
        for (auto& v : prow) v *= inv;
        for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
            if (i == r) continue;
            Rat f = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)];
            if (f == 0) continue;
            auto& row = rows[static_cast<std::size_t>(i)];
            for (int j = 0; j <= n; ++j) row[static_cast<std::size_t>(j)] -= f * prow[static_cast<std::size_t>(j)];
        }
        Rat f = obj[static_cast<std::size_t>(s)];
        if (f != 0)
            for (int j = 0; j <= n; ++j) obj[static_cast<std::size_t>(j)] -= f * prow[static_cast<std::size_t>(j)];
        basis[static_cast<std::size_t>(r)] = s;
    }

    // Bland's rule: entering = lowest-index negative reduced cost; leaving =
    // lowest basic index among minimal ratios. Returns false when optimal,
    // throws on an unbounded ray.
    bool step() {
        int enter = -1;
        for (int j = 0; j < n; ++j)
            if (obj[static_cast<std::size_t>(j)] < 0) {
                enter = j;
                break;
            }
        if (enter < 0) return false;
        int leave = -1;
        Rat best;
        for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
            const Rat& a = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(enter)];
            if (a <= 0) continue;
            Rat ratio = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(n)] / a;
            if (leave < 0 || ratio < best ||
                (ratio == best && basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave < 0) fail("internal", "unbounded simplex direction");
        pivot(leave, enter);
        return true;
    }
};

// Phase 1: returns a tableau whose basis is feasible for A x = b, or nullopt.
std::optional<Tableau> phase1(const RatMatrix& A, const RatVec& b) {
    int m = static_cast<int>(A.size());
    int n = m > 0 ? static_cast<int>(A[0].size()) : 0;
    Tableau t;
    t.n = n + m;
    t.rows.assign(static_cast<std::size_t>(m), RatVec(static_cast<std::size_t>(t.n + 1), Rat(0)));
    t.basis.assign(static_cast<std::size_t>(m), 0);
    for (int i = 0; i < m; ++i) {
        bool flip = b[static_cast<std::size_t>(i)] < 0;
        for (int j = 0; j < n; ++j) {
            const Rat& v = A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            t.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = flip ? -v : v;
        }
        t.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(n + i)] = 1;
        t.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(t.n)] =
            flip ? -b[static_cast<std::size_t>(i)] : b[static_cast<std::size_t>(i)];
        t.basis[static_cast<std::size_t>(i)] = n + i;
    }
    t.obj.assign(static_cast<std::size_t>(t.n + 1), Rat(0));
    for (int j = 0; j <= t.n; ++j) {
        if (j >= n && j < t.n) continue; // artificial columns have reduced cost 0
        Rat sum = 0;
        for (int i = 0; i < m; ++i) sum += t.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        t.obj[static_cast<std::size_t>(j)] = -sum;
    }
    while (t.step()) {}
    if (t.obj[static_cast<std::size_t>(t.n)] != 0) return std::nullopt; // residual artificial mass

    // Drive artificials out of the basis; rows that cannot pivot are redundant.
    for (int i = static_cast<int>(t.rows.size()) - 1; i >= 0; --i) {
        if (t.basis[static_cast<std::size_t>(i)] < n) continue;
        int col = -1;
        for (int j = 0; j < n; ++j)
            if (t.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] != 0) {
                col = j;
                break;
            }
        if (col >= 0) {
            t.pivot(i, col);
        } else {
            t.rows.erase(t.rows.begin() + i);
            t.basis.erase(t.basis.begin() + i);
        }
    }
    // Truncate the artificial columns.
    for (auto& row : t.rows) {
        row[static_cast<std::size_t>(n)] = row[static_cast<std::size_t>(t.n)];
        row.resize(static_cast<std::size_t>(n + 1));
    }
    t.n = n;
    t.obj.assign(static_cast<std::size_t>(n + 1), Rat(0));
    return t;
}

} // namespace

LpResult lp_solve(const RatMatrix& A, const RatVec& b, const RatVec& c) {
    LpResult out;
    int n = A.empty() ? static_cast<int>(c.size()) : static_cast<int>(A[0].size());
    if (A.empty()) {
        // No constraints: x = 0 is optimal iff c >= 0.
        out.feasible = true;
        out.solution.assign(static_cast<std::size_t>(n), Rat(0));
        out.value = 0;
        for (const auto& cj : c)
            if (cj < 0) out.bounded = false;
        return out;
    }
    auto t0 = phase1(A, b);
    if (!t0) return out;
    Tableau t = *std::move(t0);
    out.feasible = true;
    // Phase 2 objective row from c and the current basis.
    for (int j = 0; j <= t.n; ++j) {
        Rat z = j < t.n ? c[static_cast<std::size_t>(j)] : Rat(0);
        for (std::size_t i = 0; i < t.rows.size(); ++i)
            z -= c[static_cast<std::size_t>(t.basis[i])] * t.rows[i][static_cast<std::size_t>(j)];
        t.obj[static_cast<std::size_t>(j)] = z;
    }
    try {
        while (t.step()) {}
    } catch (const Error&) {
        out.bounded = false;
        return out;
    }
    out.solution.assign(static_cast<std::size_t>(n), Rat(0));
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        out.solution[static_cast<std::size_t>(t.basis[i])] = t.rows[i][static_cast<std::size_t>(t.n)];
    out.value = -t.obj[static_cast<std::size_t>(t.n)];
    return out;
}

bool lp_feasible(const RatMatrix& A, const RatVec& b) {
    if (A.empty()) {
        for (const auto& v : b)
            if (v != 0) return false;
        return true;
    }
    return phase1(A, b).has_value();
}

std::vector<RatVec> enumerate_basic_points(const RatMatrix& A, const RatVec& b, std::size_t cap) {
    int m = static_cast<int>(A.size());
    int n = m > 0 ? static_cast<int>(A[0].size()) : 0;
    // Rank of A by exact elimination.
    RatMatrix red = A;
    RatVec rhs = b;
    int rank = 0;
    for (int col = 0; col < n && rank < m; ++col) {
        int piv = -1;
        for (int i = rank; i < m; ++i)
            if (red[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(red[static_cast<std::size_t>(piv)], red[static_cast<std::size_t>(rank)]);
        std::swap(rhs[static_cast<std::size_t>(piv)], rhs[static_cast<std::size_t>(rank)]);
        for (int i = 0; i < m; ++i) {
            if (i == rank) continue;
            Rat f = red[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)] /
                    red[static_cast<std::size_t>(rank)][static_cast<std::size_t>(col)];
            if (f == 0) continue;
            for (int j = 0; j < n; ++j)
                red[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -=
                    f * red[static_cast<std::size_t>(rank)][static_cast<std::size_t>(j)];
            rhs[static_cast<std::size_t>(i)] -= f * rhs[static_cast<std::size_t>(rank)];
        }
        ++rank;
    }
    for (int i = rank; i < m; ++i)
        if (rhs[static_cast<std::size_t>(i)] != 0) return {}; // inconsistent system

    std::vector<RatVec> points;
    std::vector<int> chosen;
    std::size_t visited = 0;

    auto solve_subset = [&](const std::vector<int>& cols) {
        // Solve A_cols y = b exactly; keep unique nonnegative solutions.
        int k = static_cast<int>(cols.size());
        RatMatrix M(static_cast<std::size_t>(m), RatVec(static_cast<std::size_t>(k + 1), Rat(0)));
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < k; ++j)
                M[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    A[static_cast<std::size_t>(i)][static_cast<std::size_t>(cols[static_cast<std::size_t>(j)])];
            M[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = b[static_cast<std::size_t>(i)];
        }
        std::vector<int> where(static_cast<std::size_t>(k), -1);
        int row = 0;
        for (int col = 0; col < k && row < m; ++col) {
            int piv = -1;
            for (int i = row; i < m; ++i)
                if (M[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)] != 0) {
                    piv = i;
                    break;
                }
            if (piv < 0) continue;
            std::swap(M[static_cast<std::size_t>(piv)], M[static_cast<std::size_t>(row)]);
            for (int i = 0; i < m; ++i) {
                if (i == row) continue;
                Rat f = M[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)] /
                        M[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
                if (f == 0) continue;
                for (int j = col; j <= k; ++j)
                    M[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -=
                        f * M[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)];
            }
            where[static_cast<std::size_t>(col)] = row;
            ++row;
        }
        if (row < k) return; // dependent columns, no unique basic solution
        for (int i = row; i < m; ++i)
            if (M[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] != 0) return; // inconsistent
        RatVec x(static_cast<std::size_t>(n), Rat(0));
        for (int col = 0; col < k; ++col) {
            int r = where[static_cast<std::size_t>(col)];
            Rat v = M[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] /
                    M[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
            if (v < 0) return;
            x[static_cast<std::size_t>(cols[static_cast<std::size_t>(col)])] = v;
        }
        points.push_back(std::move(x));
    };

    auto rec = [&](auto&& self, int start, int need) -> void {
        if (need == 0) {
            if (++visited > cap) fail("explosion", "basic-solution enumeration exceeded cap");
            solve_subset(chosen);
            return;
        }
        for (int j = start; j <= n - need; ++j) {
            chosen.push_back(j);
            self(self, j + 1, need - 1);
            chosen.pop_back();
        }
    };
    if (rank == 0) {
        RatVec x(static_cast<std::size_t>(n), Rat(0));
        points.push_back(std::move(x));
    } else {
        rec(rec, 0, rank);
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    return points;
}

} // namespace prgc
