#pragma once

#include "unorm/integer.hpp"
#include "unorm/sparse_matrix.hpp"

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace unorm {

/// Smith normal form with unimodular transforms: left * A * right == diagonal.
struct SmithForm {
    DenseMatrix<Int> diagonal;  // same shape as the input
    DenseMatrix<Int> left;      // rows x rows
    DenseMatrix<Int> right;     // cols x cols
    std::vector<Int> invariants;  // nonzero diagonal entries d1 | d2 | ..., all positive
};

namespace detail {

inline DenseMatrix<Int> identity_dense(std::size_t n) {
    DenseMatrix<Int> m(n, std::vector<Int>(n, 0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline void row_axpy(DenseMatrix<Int>& m, std::size_t dst, const Int& s, std::size_t src) {
    if (s == 0) return;
    for (std::size_t k = 0; k < m[dst].size(); ++k)
        if (m[src][k] != 0) m[dst][k] += s * m[src][k];
}
inline void col_axpy(DenseMatrix<Int>& m, std::size_t dst, const Int& s, std::size_t src) {
    if (s == 0) return;
    for (auto& row : m)
        if (row[src] != 0) row[dst] += s * row[src];
}
inline void swap_cols(DenseMatrix<Int>& m, std::size_t a, std::size_t b) {
    if (a == b) return;
    for (auto& row : m) std::swap(row[a], row[b]);
}

}  // namespace detail

/// Dense Smith normal form with transforms. Pivoting always takes the entry
/// of smallest absolute value, which keeps intermediate growth small and
/// makes the output deterministic.
inline SmithForm smith_normal_form(const DenseMatrix<Int>& input) {
    using namespace detail;
    SmithForm sf;
    DenseMatrix<Int> a = input;
    const std::size_t m = a.size(), n = m ? a[0].size() : 0;
    DenseMatrix<Int> u = identity_dense(m), v = identity_dense(n);

    auto smallest_in = [&](std::size_t t, std::size_t& pi, std::size_t& pj) {
        bool found = false;
        Int best;
        for (std::size_t i = t; i < m; ++i)
            for (std::size_t j = t; j < n; ++j)
                if (a[i][j] != 0 && (!found || abs_int(a[i][j]) < best)) {
                    best = abs_int(a[i][j]);
                    pi = i;
                    pj = j;
                    found = true;
                }
        return found;
    };

    for (std::size_t t = 0; t < std::min(m, n); ++t) {
        std::size_t pi = 0, pj = 0;
        if (!smallest_in(t, pi, pj)) break;
        std::swap(a[t], a[pi]);
        std::swap(u[t], u[pi]);
        swap_cols(a, t, pj);
        swap_cols(v, t, pj);
        for (;;) {
            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i)
                if (a[i][t] != 0) {
                    Int q = a[i][t] / a[t][t];
                    row_axpy(a, i, -q, t);
                    row_axpy(u, i, -q, t);
                    if (a[i][t] != 0) clean = false;
                }
            for (std::size_t j = t + 1; j < n; ++j)
                if (a[t][j] != 0) {
                    Int q = a[t][j] / a[t][t];
                    col_axpy(a, j, -q, t);
                    col_axpy(v, j, -q, t);
                    if (a[t][j] != 0) clean = false;
                }
            if (!clean) {
                // a remainder is now smaller than the pivot: move it to (t, t)
                std::size_t bi = t, bj = t;
                Int best = abs_int(a[t][t]);
                for (std::size_t i = t + 1; i < m; ++i)
                    if (a[i][t] != 0 && abs_int(a[i][t]) < best) best = abs_int(a[i][t]), bi = i, bj = t;
                for (std::size_t j = t + 1; j < n; ++j)
                    if (a[t][j] != 0 && abs_int(a[t][j]) < best) best = abs_int(a[t][j]), bi = t, bj = j;
                std::swap(a[t], a[bi]);
                std::swap(u[t], u[bi]);
                swap_cols(a, t, bj);
                swap_cols(v, t, bj);
                continue;
            }
            // enforce divisibility of the remaining block by the pivot
            bool divisible = true;
            for (std::size_t i = t + 1; i < m && divisible; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (a[i][j] % a[t][t] != 0) {
                        row_axpy(a, t, 1, i);
                        row_axpy(u, t, 1, i);
                        divisible = false;
                        break;
                    }
            if (divisible) break;
        }
        if (a[t][t] < 0) {
            for (auto& x : a[t]) x = -x;
            for (auto& x : u[t]) x = -x;
        }
        sf.invariants.push_back(a[t][t]);
    }
    sf.diagonal = std::move(a);
    sf.left = std::move(u);
    sf.right = std::move(v);
    return sf;
}

/// Diagonal-only data of a Smith normal form: rank and the non-unit invariant
/// factors (the unit invariants are implied by the rank).
struct SmithDiagonal {
    std::size_t rank = 0;
    std::vector<Int> torsion;  // invariants > 1 in divisibility-chain order
};

/// Smith invariants of a sparse integer matrix by sparse elimination with
/// smallest-entry pivoting. No transforms are tracked.
inline SmithDiagonal smith_diagonal(const SparseMatrix<Int>& mat) {
    // Work on the stored columns as "rows"; invariants are transpose-invariant.
    std::vector<SparseVector<Int>> rows;
    rows.reserve(mat.cols());
    for (std::size_t j = 0; j < mat.cols(); ++j)
        if (!mat.column(j).empty()) rows.push_back(mat.column(j));
    std::vector<std::size_t> col_count(mat.rows(), 0);
    for (const auto& r : rows)
        for (const auto& e : r) ++col_count[e.first];
    std::vector<int> active;
    for (std::size_t i = 0; i < rows.size(); ++i) active.push_back(static_cast<int>(i));

    auto find_entry = [](const SparseVector<Int>& r, int c) -> const Int* {
        auto it = std::lower_bound(r.begin(), r.end(), c, [](const auto& e, int key) { return e.first < key; });
        return (it != r.end() && it->first == c) ? &it->second : nullptr;
    };
    auto update_counts = [&](const SparseVector<Int>& before, const SparseVector<Int>& after) {
        for (const auto& e : before) --col_count[e.first];
        for (const auto& e : after) ++col_count[e.first];
    };

    std::vector<Int> diag;
    for (;;) {
        active.erase(std::remove_if(active.begin(), active.end(), [&](int ri) { return rows[ri].empty(); }),
                     active.end());
        if (active.empty()) break;
        // pivot: minimal |value|, then minimal Markowitz cost, then first seen
        int best_row = -1, best_col = -1;
        Int best_abs;
        std::size_t best_cost = 0;
        for (int ri : active) {
            const auto& r = rows[ri];
            for (const auto& [c, val] : r) {
                Int av = abs_int(val);
                const std::size_t cost = (r.size() - 1) * (col_count[c] - 1);
                if (best_row < 0 || av < best_abs || (av == best_abs && cost < best_cost)) {
                    best_row = ri;
                    best_col = c;
                    best_abs = std::move(av);
                    best_cost = cost;
                }
            }
            if (best_abs == 1 && best_cost == 0) break;
        }
        const Int pivot = *find_entry(rows[best_row], best_col);

        // clear the pivot column from every other active row
        bool remainder = false;
        for (int ri : active) {
            if (ri == best_row) continue;
            const Int* e = find_entry(rows[ri], best_col);
            if (!e) continue;
            Int q = *e / pivot;
            if (q != 0) {
                SparseVector<Int> before = rows[ri];
                axpy(rows[ri], Int(-q), rows[best_row]);
                update_counts(before, rows[ri]);
            }
            if (find_entry(rows[ri], best_col)) remainder = true;
        }
        if (remainder) continue;

        // column operations against the pivot only touch the pivot row now
        auto& pr = rows[best_row];
        bool divisible = true;
        for (const auto& [c, val] : pr)
            if (c != best_col && val % pivot != 0) divisible = false;
        if (divisible) {
            diag.push_back(abs_int(pivot));
            for (const auto& e : pr) --col_count[e.first];
            pr.clear();
            active.erase(std::find(active.begin(), active.end(), best_row));
        } else {
            SparseVector<Int> before = pr, after;
            for (const auto& [c, val] : pr) {
                if (c == best_col) {
                    after.emplace_back(c, val);
                } else {
                    Int r = val % pivot;
                    if (r != 0) after.emplace_back(c, r);
                }
            }
            update_counts(before, after);
            pr = std::move(after);
        }
    }
    SmithDiagonal out;
    out.rank = diag.size();
    out.torsion = invariant_factors(diag);
    return out;
}

/// Rank over the prime field F_p by sparse Gaussian elimination.
inline std::size_t rank_over_field(const SparseMatrix<Int>& mat, std::int64_t p) {
    if (!is_prime(p)) throw std::invalid_argument("rank_over_field: modulus is not prime");
    using Row = std::vector<std::pair<int, std::int64_t>>;
    auto mulmod = [p](std::int64_t a, std::int64_t b) { return static_cast<std::int64_t>((__int128)a * b % p); };
    auto inv = [&](std::int64_t a) {
        std::int64_t r = 1, e = p - 2, b = a;
        while (e) {
            if (e & 1) r = mulmod(r, b);
            b = mulmod(b, b);
            e >>= 1;
        }
        return r;
    };
    std::vector<Row> rows;
    for (std::size_t j = 0; j < mat.cols(); ++j) {
        Row r;
        for (const auto& [i, v] : mat.column(j)) {
            std::int64_t x = static_cast<std::int64_t>(mod_floor(v, Int(p)));
            if (x) r.emplace_back(i, x);
        }
        if (!r.empty()) rows.push_back(std::move(r));
    }
    // pivot rows keyed by leading column; reduce each incoming row against them
    std::vector<Row> pivot_of(mat.rows());
    std::vector<bool> has(mat.rows(), false);
    std::size_t rank = 0;
    for (auto& r : rows) {
        while (!r.empty()) {
            const int lead = r.front().first;
            if (!has[lead]) {
                const std::int64_t s = inv(r.front().second);
                for (auto& e : r) e.second = mulmod(e.second, s);
                pivot_of[lead] = std::move(r);
                has[lead] = true;
                ++rank;
                break;
            }
            const std::int64_t f = p - r.front().second;
            const Row& pr = pivot_of[lead];
            Row out;
            std::size_t i = 0, j = 0;
            while (i < r.size() || j < pr.size()) {
                if (j == pr.size() || (i < r.size() && r[i].first < pr[j].first)) {
                    out.push_back(r[i++]);
                } else if (i == r.size() || pr[j].first < r[i].first) {
                    out.emplace_back(pr[j].first, mulmod(f, pr[j].second));
                    ++j;
                } else {
                    std::int64_t c = (r[i].second + mulmod(f, pr[j].second)) % p;
                    if (c) out.emplace_back(r[i].first, c);
                    ++i;
                    ++j;
                }
            }
            r = std::move(out);
        }
    }
    return rank;
}

/// Rank over Q by fraction-based Gaussian elimination; independent of the
/// Smith routines on purpose.
template <class R>
std::size_t rational_rank(const SparseMatrix<R>& mat) {
    std::vector<std::vector<std::pair<int, Rational>>> rows;
    for (std::size_t j = 0; j < mat.cols(); ++j) {
        std::vector<std::pair<int, Rational>> r;
        for (const auto& [i, v] : mat.column(j)) r.emplace_back(i, Rational(v));
        if (!r.empty()) rows.push_back(std::move(r));
    }
    std::vector<std::vector<std::pair<int, Rational>>> pivot_of(mat.rows());
    std::vector<bool> has(mat.rows(), false);
    std::size_t rank = 0;
    for (auto& r : rows) {
        while (!r.empty()) {
            const int lead = r.front().first;
            if (!has[lead]) {
                Rational s = 1 / r.front().second;
                for (auto& e : r) e.second *= s;
                pivot_of[lead] = std::move(r);
                has[lead] = true;
                ++rank;
                break;
            }
            Rational f = -r.front().second;
            SparseVector<Rational> rv(r.begin(), r.end());
            axpy(rv, f, SparseVector<Rational>(pivot_of[lead].begin(), pivot_of[lead].end()));
            r.assign(rv.begin(), rv.end());
        }
    }
    return rank;
}

}  // namespace unorm
