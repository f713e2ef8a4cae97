#pragma once

#include "unorm/graded_complex.hpp"
#include "unorm/system.hpp"

#include <map>
#include <vector>

namespace unorm {

/// All w with support dividing the support of z and deg w <= max_degree.
inline std::vector<FormalProduct> cochain_indices(const FormalProduct& z, int max_degree) {
    std::vector<FormalProduct> out;
    for (int n = 0; n <= max_degree; ++n)
        for (auto& w : products_of_degree(support(z), n)) out.push_back(std::move(w));
    return out;
}

/// Z-basis element g[w] of the tensor projective resolution, in homological
/// degree deg w (stored at cochain degree -deg w).
struct PSymbol {
    FormalProduct w;
    GroupElement g;

    int degree() const { return -w.degree(); }
    auto operator<=>(const PSymbol&) const = default;
};

/// Multiplies g by sigma_{z(x)}^k.
inline GroupElement shift(const NormSystem& sys, const GroupElement& g, PrimeId x, long k) {
    GroupElement out = g;
    const auto& fs = g.target.factors();
    for (std::size_t i = 0; i < fs.size(); ++i)
        if (fs[i].first == x) out.residues[i] = mod_floor(out.residues[i] + k, sys.order(x, fs[i].second));
    return out;
}

/// d[w] = sum_{x | w} (-1)^{sum_{x' < x} v_{x'}(w)} alpha_x [w/x], with
/// alpha_x = sigma - 1 for v_x(w) odd and the norm for v_x(w) even.
inline LinearCombination<PSymbol, Int> P_boundary(const NormSystem& sys, const FormalProduct& z, const PSymbol& s) {
    LinearCombination<PSymbol, Int> out;
    for (const auto& [x, e] : s.w.factors()) {
        const Int sign = sign_of(exponent_below(x, s.w));
        const FormalProduct lower = s.w / FormalProduct::prime(x);
        if (e % 2 == 1) {
            out.add(PSymbol{lower, shift(sys, s.g, x, 1)}, sign);
            out.add(PSymbol{lower, s.g}, -sign);
        } else {
            for (long k = 0; k < sys.local_order(z, x); ++k) out.add(PSymbol{lower, shift(sys, s.g, x, k)}, sign);
        }
    }
    return out;
}

/// P_z in homological degrees 0 .. q_max + 1.
inline GradedComplex<PSymbol> build_P(const NormSystem& sys, const FormalProduct& z, int q_max) {
    std::map<int, std::vector<PSymbol>> bases;
    const auto group = group_elements(sys, z);
    for (const auto& w : cochain_indices(z, q_max + 1))
        for (const auto& g : group) bases[-w.degree()].push_back({w, g});
    for (auto& [n, b] : bases) std::sort(b.begin(), b.end());
    auto c = assemble(bases, [&](const PSymbol& s) { return P_boundary(sys, z, s); },
                      [](const PSymbol& s) { return s.degree(); });
    c.verify();
    return c;
}

/// Cochain [w] of Hom(P_z, A) for a trivial module A.
struct ISymbol {
    FormalProduct w;
    int degree() const { return w.degree(); }
    auto operator<=>(const ISymbol&) const = default;
};

/// delta[w] = sum_x (-1)^{sum_{x'<x} v_{x'}(w)} a_x [w x], where a_x is 0 for
/// v_x(w) even and |G_{z(x)}| for v_x(w) odd.
inline LinearCombination<ISymbol, Int> I_coboundary(const NormSystem& sys, const FormalProduct& z, const ISymbol& s) {
    LinearCombination<ISymbol, Int> out;
    for (PrimeId x : z.primes())
        if (s.w.valuation(x) % 2 == 1)
            out.add(ISymbol{s.w * FormalProduct::prime(x)}, Int(sign_of(exponent_below(x, s.w)) * sys.local_order(z, x)));
    return out;
}

inline std::map<int, std::vector<ISymbol>> I_bases(const FormalProduct& z, int top) {
    std::map<int, std::vector<ISymbol>> bases;
    for (const auto& w : cochain_indices(z, top)) bases[w.degree()].push_back({w});
    for (auto& [n, b] : bases) std::sort(b.begin(), b.end());
    return bases;
}

/// Hom(P_z, Z) in degrees 0 .. q_max + 1 from the closed-form coboundary.
inline GradedComplex<ISymbol> build_I(const NormSystem& sys, const FormalProduct& z, int q_max) {
    auto c = assemble(I_bases(z, q_max + 1), [&](const ISymbol& s) { return I_coboundary(sys, z, s); },
                      [](const ISymbol& s) { return s.degree(); });
    c.verify();
    return c;
}

/// Hom(P_z, Z) obtained directly from the resolution: every group element
/// acts as 1 and the coboundary is the transpose of the collapsed boundary.
inline GradedComplex<ISymbol> build_I_from_P(const NormSystem& sys, const FormalProduct& z, int q_max) {
    GradedComplex<ISymbol> out;
    const auto bases = I_bases(z, q_max + 1);
    for (const auto& [n, b] : bases) out.set_basis(n, b);
    for (const auto& [n, b] : bases) {
        if (!bases.count(n + 1)) continue;
        const BasisIndex<ISymbol> src(b);
        SparseMatrix<Int> m(bases.at(n + 1).size(), b.size());
        const auto& upper = bases.at(n + 1);
        for (std::size_t i = 0; i < upper.size(); ++i) {
            PSymbol s{upper[i].w, GroupElement::identity(z)};
            LinearCombination<ISymbol, Int> collapsed;
            for (const auto& [t, c] : P_boundary(sys, z, s)) collapsed.add(ISymbol{t.w}, c);
            for (const auto& [t, c] : collapsed) m.add(i, src.at(t), c);
        }
        out.set_differential(n, std::move(m));
    }
    out.verify();
    return out;
}

/// Binomial coefficient for small arguments.
inline long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// m_w: gcd of |G_{z(x)}| over x | w.
inline Int m_w(const NormSystem& sys, const FormalProduct& z, const FormalProduct& w) {
    Int g = 0;
    for (PrimeId x : w.primes()) g = gcd_int(g, Int(sys.local_order(z, x)));
    return g;
}

/// One block H_{T,w}: free Z/m_w-modules of rank C(deg w̄ - 1, i - 1) in
/// degree 2 deg w - deg w̄ + i for 1 <= i <= deg w̄; Z in degree 0 for w = 1.
struct TrivialBlock {
    int degree;
    long rank;
    Int modulus;  // 0 for the free summand
};

inline std::vector<TrivialBlock> trivial_blocks(const NormSystem& sys, const FormalProduct& z, const FormalProduct& w) {
    if (w.is_unit()) return {{0, 1, 0}};
    std::vector<TrivialBlock> out;
    const int s = w.num_primes();
    const Int m = m_w(sys, z, w);
    for (int i = 1; i <= s; ++i) out.push_back({2 * w.degree() - s + i, binomial(s - 1, i - 1), m});
    return out;
}

/// Adds `rank` copies of Z/modulus (modulus 0 meaning Z) to a per-degree tally.
inline void tally(std::map<int, std::pair<std::size_t, std::vector<Int>>>& acc, int degree, long rank, const Int& modulus) {
    auto& slot = acc[degree];
    for (long k = 0; k < rank; ++k) {
        if (modulus == 0) ++slot.first;
        else if (modulus != 1) slot.second.push_back(modulus);
    }
}

}  // namespace unorm
