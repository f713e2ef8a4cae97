#pragma once

#include "unorm/graded_complex.hpp"
#include "unorm/norm_distribution.hpp"

#include <map>
#include <vector>

namespace unorm {

/// Generator [a, y] of Anderson's resolution, a in A_{z/z(y)}, in degree -deg y.
struct LSymbol {
    FormalProduct y;
    ASymbol a;

    int degree() const { return -y.degree(); }
    auto operator<=>(const LSymbol&) const = default;
};

template <class R = Int>
using LVector = LinearCombination<LSymbol, R>;

inline std::map<int, std::vector<LSymbol>> L_bases(const NormSystem& sys, const FormalProduct& z) {
    std::map<int, std::vector<LSymbol>> bases;
    for (const auto& y : squarefree_divisors(support(z)))
        for (auto& a : enumerate_A(sys, z / stalk(z, y))) bases[-y.degree()].push_back({y, std::move(a)});
    for (auto& [n, b] : bases) std::sort(b.begin(), b.end());
    return bases;
}

/// Which parts of the differential to include: d = d1 + d2, with
/// d1 the norm terms and d2 the Frobenius-polynomial terms.
enum class LPart { full, norm_part, poly_part };

/// The x-summand of d (or of d1, d2) on [a, y]; zero unless x | y.
template <class R = Int>
LVector<R> L_differential_at(const NormSystem& sys, const FormalProduct& z, PrimeId x, const LSymbol& s,
                             LPart part = LPart::full) {
    LVector<R> out;
    const int w = omega(x, s.y);
    if (w == 0) return out;
    const FormalProduct yx = s.y / FormalProduct::prime(x);
    if (part != LPart::norm_part)
        for (const auto& [b, c] : frobenius_poly_act<R>(sys, x, s.a)) out.add(LSymbol{yx, b}, c * R(w));
    if (part != LPart::poly_part)
        for (const auto& [b, c] : norm_lift<R>(sys, z, x, s.a)) out.add(LSymbol{yx, b}, c * R(-w));
    return out;
}

/// d[a, y] = sum_{x | y} omega(x, y) lambda_{z(x)} [a, y/x].
template <class R = Int>
LVector<R> L_differential(const NormSystem& sys, const FormalProduct& z, const LSymbol& s, LPart part = LPart::full) {
    LVector<R> out;
    for (PrimeId x : s.y.primes()) out += L_differential_at<R>(sys, z, x, s, part);
    return out;
}

template <class R = Int>
LVector<R> L_differential(const NormSystem& sys, const FormalProduct& z, const LVector<R>& v, LPart part = LPart::full) {
    LVector<R> out;
    for (const auto& [s, c] : v) out.add(L_differential<R>(sys, z, s, part), c);
    return out;
}

inline GradedComplex<LSymbol> build_L(const NormSystem& sys, const FormalProduct& z, LPart part = LPart::full) {
    auto c = assemble(L_bases(sys, z), [&](const LSymbol& s) { return L_differential<Int>(sys, z, s, part); },
                      [](const LSymbol& s) { return s.degree(); });
    c.verify();
    return c;
}

/// Matrix of one differential piece (d, d1, d2 or a single prime's summand)
/// between degrees n and n+1.
inline SparseMatrix<Int> L_piece(const NormSystem& sys, const FormalProduct& z, int n, LPart part,
                                 std::optional<PrimeId> only = std::nullopt) {
    auto bases = L_bases(sys, z);
    return matrix_of(bases[n], bases[n + 1], [&](const LSymbol& s) {
        return only ? L_differential_at<Int>(sys, z, *only, s, part) : L_differential<Int>(sys, z, s, part);
    });
}

/// The augmentation u: [a, 1] -> reduce([a]) as a matrix L^0 -> U_z.
inline SparseMatrix<Int> augmentation_matrix(const NormSystem& sys, const FormalProduct& z) {
    Reducer<Int> red(sys);
    auto bases = L_bases(sys, z);
    return matrix_of(bases[0], basis_U(sys, z), [&](const LSymbol& s) {
        return s.y.is_unit() ? red.reduce(s.a) : AVector<Int>();
    });
}

/// Action of g in G_z on one degree of L_z (a permutation matrix).
inline SparseMatrix<Int> L_action(const NormSystem& sys, const FormalProduct& z, int n, const GroupElement& g) {
    auto bases = L_bases(sys, z);
    return matrix_of(bases[n], bases[n], [&](const LSymbol& s) { return LVector<Int>(LSymbol{s.y, act(sys, g, s.a)}); });
}

/// Generator of the cyclic factor G_{z(x)}, viewed in G_z.
inline GroupElement local_generator(const FormalProduct& z, PrimeId x) {
    GroupElement g = GroupElement::identity(z);
    const auto& fs = z.factors();
    for (std::size_t i = 0; i < fs.size(); ++i)
        if (fs[i].first == x) g.residues[i] = 1;
    return g;
}

/// Basis element y'' e_{y'} of the truncated Koszul complex C_y.
struct KoszulSymbol {
    FormalProduct exterior;    // y'
    FormalProduct polynomial;  // y''

    int degree() const { return -exterior.degree(); }
    auto operator<=>(const KoszulSymbol&) const = default;
};

/// d(y'' e_{y'}) = sum_{x | y'} omega(x, y') (y'' x) e_{y'/x}.
inline LinearCombination<KoszulSymbol, Int> koszul_differential(const KoszulSymbol& s) {
    LinearCombination<KoszulSymbol, Int> out;
    for (PrimeId x : s.exterior.primes())
        out.add(KoszulSymbol{s.exterior / FormalProduct::prime(x), s.polynomial * FormalProduct::prime(x)},
                Int(omega(x, s.exterior)));
    return out;
}

/// C_y: span of y'' e_{y'} over disjoint y', y'' with y' y'' | y.
inline GradedComplex<KoszulSymbol> koszul_truncated(const FormalProduct& y) {
    if (!y.is_squarefree()) throw std::invalid_argument("koszul_truncated: y must be squarefree");
    std::map<int, std::vector<KoszulSymbol>> bases;
    for (const auto& ext : squarefree_divisors(y))
        for (const auto& poly : squarefree_divisors(y / ext)) bases[-ext.degree()].push_back({ext, poly});
    for (auto& [n, b] : bases) std::sort(b.begin(), b.end());
    auto c = assemble(bases, koszul_differential, [](const KoszulSymbol& s) { return s.degree(); });
    c.verify();
    return c;
}

/// lambda_{z(y'')} [a, y'] with the factors applied in increasing prime order.
inline LVector<Int> lambda_product(const NormSystem& sys, const FormalProduct& z, const FormalProduct& ypp,
                                   const LSymbol& s) {
    AVector<Int> v(s.a);
    for (PrimeId x : ypp.primes()) v = lambda<Int>(sys, z, x, v);
    LVector<Int> out;
    for (const auto& [b, c] : v) out.add(LSymbol{s.y, b}, c);
    return out;
}

/// Generator lambda_{z(y'')} [a, y'] of the summand C_a, indexed by the
/// Koszul symbol y'' e_{y'}.
struct SummandGenerator {
    ASymbol a;
    KoszulSymbol k;
};

/// For a in B_0 ∩ A_z, the Koszul variables of C_a: primes of z outside a's stalk.
inline FormalProduct summand_variables(const FormalProduct& z, const ASymbol& a) {
    return support(z) / support(a.stalk());
}

inline LVector<Int> summand_generator(const NormSystem& sys, const FormalProduct& z, const SummandGenerator& g) {
    return lambda_product(sys, z, g.k.polynomial, LSymbol{g.k.exterior, g.a});
}

/// Corestriction on Anderson's resolutions: [a, y] -> [cor_{w/w(y), z/z(y)} a, y].
inline LVector<Int> corestriction_L(const NormSystem& sys, const FormalProduct& w, const FormalProduct& z,
                                    const LSymbol& s) {
    const FormalProduct wy = w / stalk(w, s.y), zy = z / stalk(z, s.y);
    LVector<Int> out;
    for (const auto& [b, c] : corestriction(sys, wy, zy, s.a)) out.add(LSymbol{s.y, b}, c);
    return out;
}

}  // namespace unorm
