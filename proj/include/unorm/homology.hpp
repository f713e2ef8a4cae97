#pragma once

#include "unorm/lattice.hpp"
#include "unorm/smith.hpp"
#include "unorm/sparse_matrix.hpp"

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace unorm {

/// Z^free_rank + sum Z/torsion_i over Z, or (Z/M)^free_rank + sum Z/torsion_i
/// over Z/M. Torsion is kept as a divisibility chain of entries >= 2.
struct HomologyGroup {
    std::size_t free_rank = 0;
    std::vector<Int> torsion;

    bool operator==(const HomologyGroup&) const = default;
    bool is_zero() const { return free_rank == 0 && torsion.empty(); }
};

inline std::string describe(const HomologyGroup& h, const Int& modulus = 0) {
    std::string s;
    auto append = [&s](const std::string& part) {
        if (!s.empty()) s += " + ";
        s += part;
    };
    if (h.free_rank > 0) {
        std::string base = modulus == 0 ? "Z" : "Z/" + modulus.str();
        append(h.free_rank == 1 ? base : base + "^" + std::to_string(h.free_rank));
    }
    for (const auto& t : h.torsion) append("Z/" + t.str());
    return s.empty() ? "0" : s;
}

inline std::ostream& operator<<(std::ostream& os, const HomologyGroup& h) { return os << describe(h); }

/// Coefficient ring of a homology computation: Z when modulus == 0, else Z/M.
struct Ring {
    Int modulus = 0;
    static Ring integers() { return {}; }
    static Ring mod(const Int& m) {
        if (m < 1) throw std::invalid_argument("Ring::mod: modulus must be positive");
        return {m};
    }
    bool is_integers() const { return modulus == 0; }
};

/// Raised when consecutive differentials do not compose to zero.
class DifferentialError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

inline void check_composable(const SparseMatrix<Int>& d_in, const SparseMatrix<Int>& d_out, const Ring& ring) {
    if (d_in.rows() != d_out.cols())
        throw std::invalid_argument("homology_at: d_in has " + std::to_string(d_in.rows()) + " rows but d_out has " +
                                    std::to_string(d_out.cols()) + " columns");
    SparseMatrix<Int> comp = d_out * d_in;
    if (!ring.is_integers()) comp = comp.reduced_mod(ring.modulus);
    if (!comp.is_zero()) throw DifferentialError("homology_at: d_out * d_in is not zero");
}

/// Homology over Z/M from the Smith invariants of integral lifts d_in, d_out
/// that compose to zero over Z (universal coefficients):
///   (Z/M)^{c - rk d_in - rk d_out} + Z/gcd(t_i, M) + Z/gcd(s_j, M).
inline HomologyGroup homology_mod_uct(const SmithDiagonal& in, const SmithDiagonal& out, std::size_t c, const Int& m) {
    std::vector<Int> parts;
    std::size_t free = c - in.rank - out.rank;
    auto absorb = [&](const std::vector<Int>& ts) {
        for (const auto& t : ts) {
            Int g = gcd_int(t, m);
            if (g == m) ++free;
            else if (g != 1) parts.push_back(g);
        }
    };
    absorb(in.torsion);
    absorb(out.torsion);
    return {free, invariant_factors(parts)};
}

namespace detail {
inline DenseMatrix<Int> dense_of(const SparseMatrix<Int>& a) { return a.to_dense(); }

inline HomologyGroup from_quotient_invariants(const std::vector<Int>& inv, const Int& m) {
    HomologyGroup h;
    std::vector<Int> parts;
    for (const auto& d : inv) {
        if (d == 0 || d == m) ++h.free_rank;
        else parts.push_back(d);
    }
    h.torsion = invariant_factors(parts);
    return h;
}
}  // namespace detail

/// Homology over Z/M by lattices: cycles {v : d_out v in M Z^k} modulo
/// d_in Z^a + M Z^c, i.e. Smith forms of the lifts augmented by M * identity.
inline HomologyGroup homology_mod_lattice(const SparseMatrix<Int>& d_in, const SparseMatrix<Int>& d_out, const Int& m) {
    const std::size_t a = d_in.cols(), c = d_in.rows(), k = d_out.rows();
    if (c == 0) return {};
    lattice::Subquotient sa{a, lattice::scaled_identity(a, 1), lattice::scaled_identity(a, m)};
    lattice::Subquotient sb{c, lattice::scaled_identity(c, 1), lattice::scaled_identity(c, m)};
    lattice::Subquotient sc{k, lattice::scaled_identity(k, 1), lattice::scaled_identity(k, m)};
    const auto inv = lattice::subquotient_homology(sa, detail::dense_of(d_in), sb, detail::dense_of(d_out), sc);
    return detail::from_quotient_invariants(inv, m);
}

/// Ambient dimension up to which homology over composite Z/M is computed by
/// the dense lattice method; larger integral complexes use universal
/// coefficients.
inline constexpr std::size_t lattice_method_limit = 96;

/// ker(d_out) / im(d_in) for d_in: C^{n-1} -> C^n and d_out: C^n -> C^{n+1}.
inline HomologyGroup homology_at(const SparseMatrix<Int>& d_in, const SparseMatrix<Int>& d_out, const Ring& ring = {}) {
    check_composable(d_in, d_out, ring);
    const std::size_t c = d_in.rows();
    if (ring.is_integers()) {
        const SmithDiagonal in = smith_diagonal(d_in), out = smith_diagonal(d_out);
        return {c - in.rank - out.rank, in.torsion};
    }
    const Int& m = ring.modulus;
    if (m == 1) return {};
    if (m <= Int(std::numeric_limits<std::int64_t>::max()) && is_prime(static_cast<std::int64_t>(m))) {
        const auto p = static_cast<std::int64_t>(m);
        return {c - rank_over_field(d_in, p) - rank_over_field(d_out, p), {}};
    }
    if (c + d_in.cols() + d_out.rows() <= lattice_method_limit) return homology_mod_lattice(d_in, d_out, m);
    // universal coefficients need lifts that compose to zero over Z
    if (!(d_out * d_in).is_zero()) return homology_mod_lattice(d_in, d_out, m);
    return homology_mod_uct(smith_diagonal(d_in), smith_diagonal(d_out), c, m);
}

}  // namespace unorm
