#pragma once

#include "unorm/smith.hpp"

#include <stdexcept>
#include <vector>

namespace unorm {

/// Integer lattices given by generator columns of a dense matrix with a
/// fixed ambient dimension. All routines go through the Smith form with
/// transforms, so they are exact and deterministic.
namespace lattice {

inline DenseMatrix<Int> zeros(std::size_t r, std::size_t c) { return DenseMatrix<Int>(r, std::vector<Int>(c, 0)); }

inline DenseMatrix<Int> multiply(const DenseMatrix<Int>& a, const DenseMatrix<Int>& b, std::size_t inner) {
    const std::size_t r = a.size(), c = b.empty() ? 0 : b[0].size();
    DenseMatrix<Int> out = zeros(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t k = 0; k < inner; ++k) {
            if (a[i][k] == 0) continue;
            for (std::size_t j = 0; j < c; ++j)
                if (b[k][j] != 0) out[i][j] += a[i][k] * b[k][j];
        }
    return out;
}

inline std::size_t num_cols(const DenseMatrix<Int>& a, std::size_t fallback = 0) { return a.empty() ? fallback : a[0].size(); }

/// [a | b] for matrices with `rows` rows (either may have zero columns).
inline DenseMatrix<Int> hconcat(const DenseMatrix<Int>& a, const DenseMatrix<Int>& b, std::size_t rows) {
    DenseMatrix<Int> out(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!a.empty()) out[i] = a[i];
        if (!b.empty()) out[i].insert(out[i].end(), b[i].begin(), b[i].end());
    }
    return out;
}

inline DenseMatrix<Int> scaled_identity(std::size_t n, const Int& s) {
    DenseMatrix<Int> m = zeros(n, n);
    for (std::size_t i = 0; i < n; ++i) m[i][i] = s;
    return m;
}

inline std::size_t rank_of(const SmithForm& sf) { return sf.invariants.size(); }

/// A basis (as columns) of the integer kernel of the rows x cols matrix a.
inline DenseMatrix<Int> kernel_basis(const DenseMatrix<Int>& a, std::size_t cols) {
    if (a.empty()) return scaled_identity(cols, 1);
    const SmithForm sf = smith_normal_form(a);
    const std::size_t r = rank_of(sf);
    DenseMatrix<Int> out = zeros(cols, cols - r);
    for (std::size_t i = 0; i < cols; ++i)
        for (std::size_t j = r; j < cols; ++j) out[i][j - r] = sf.right[i][j];
    return out;
}

/// A basis (as columns) of the lattice spanned by the columns of a.
inline DenseMatrix<Int> column_basis(const DenseMatrix<Int>& a, std::size_t rows) {
    const std::size_t c = num_cols(a);
    if (rows == 0 || c == 0) return DenseMatrix<Int>(rows);
    const SmithForm sf = smith_normal_form(a);
    const std::size_t r = rank_of(sf);
    const DenseMatrix<Int> av = multiply(a, sf.right, c);
    DenseMatrix<Int> out = zeros(rows, r);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < r; ++j) out[i][j] = av[i][j];
    return out;
}

/// Solves basis * x = g column by column, where basis has full column rank.
/// Throws if some column of g is not in the lattice of basis.
inline DenseMatrix<Int> coordinates(const DenseMatrix<Int>& basis, const DenseMatrix<Int>& g, std::size_t rows) {
    const std::size_t r = num_cols(basis), m = num_cols(g);
    if (r == 0) {
        for (const auto& row : g)
            for (const auto& v : row)
                if (v != 0) throw std::domain_error("lattice: vector outside the zero lattice");
        return DenseMatrix<Int>();
    }
    const SmithForm sf = smith_normal_form(basis);
    if (rank_of(sf) != r) throw std::invalid_argument("lattice: basis is not independent");
    const DenseMatrix<Int> ug = multiply(sf.left, g, rows);
    DenseMatrix<Int> y = zeros(r, m);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            if (i < r) {
                if (ug[i][j] % sf.invariants[i] != 0) throw std::domain_error("lattice: vector outside the lattice");
                y[i][j] = ug[i][j] / sf.invariants[i];
            } else if (ug[i][j] != 0) {
                throw std::domain_error("lattice: vector outside the span");
            }
        }
    return multiply(sf.right, y, r);
}

/// Invariants of the quotient L / S where L has basis `big` and S is spanned
/// by `small` (S must lie in L). Free summands are reported as zeros.
inline std::vector<Int> quotient_invariants(const DenseMatrix<Int>& big, const DenseMatrix<Int>& small, std::size_t rows) {
    const std::size_t r = num_cols(big);
    if (r == 0) return {};
    const DenseMatrix<Int> x = coordinates(big, small, rows);
    std::vector<Int> out;
    std::size_t rk = 0;
    if (num_cols(x) > 0) {
        const SmithForm sf = smith_normal_form(x);
        rk = rank_of(sf);
        for (const auto& d : sf.invariants)
            if (d != 1) out.push_back(d);
    }
    for (std::size_t i = rk; i < r; ++i) out.push_back(0);
    return out;
}

/// A subquotient K / I of Z^dim, with K and I given by generator columns.
struct Subquotient {
    std::size_t dim = 0;
    DenseMatrix<Int> cycles;      // generators of K
    DenseMatrix<Int> boundaries;  // generators of I, contained in K
};

/// Homology at B of A --f--> B --g--> C where the maps on ambient lattices
/// carry K into K and I into I:
///   { b in K_B : g b in I_C } / (f K_A + I_B).
inline std::vector<Int> subquotient_homology(const Subquotient& a, const DenseMatrix<Int>& f, const Subquotient& b,
                                             const DenseMatrix<Int>& g, const Subquotient& c) {
    const DenseMatrix<Int> kb = column_basis(b.cycles, b.dim);
    const std::size_t k = num_cols(kb);
    // t with g kb t in I_C: kernel of [g kb | I_C] projected to the first k coordinates
    DenseMatrix<Int> z;
    if (c.dim == 0) {
        z = kb;
    } else {
        const DenseMatrix<Int> gk = multiply(g, kb, b.dim);
        const DenseMatrix<Int> stacked = hconcat(gk, c.boundaries, c.dim);
        const std::size_t total = k + num_cols(c.boundaries);
        const DenseMatrix<Int> ker = kernel_basis(stacked, total);
        DenseMatrix<Int> proj = zeros(k, num_cols(ker));
        for (std::size_t i = 0; i < k; ++i) proj[i] = ker[i];
        z = multiply(kb, proj, k);
    }
    const DenseMatrix<Int> zb = column_basis(z, b.dim);
    const DenseMatrix<Int> fa = a.dim == 0 ? DenseMatrix<Int>(b.dim) : multiply(f, a.cycles, a.dim);
    const DenseMatrix<Int> img = hconcat(fa, b.boundaries, b.dim);
    return quotient_invariants(zb, img, b.dim);
}

}  // namespace lattice
}  // namespace unorm
