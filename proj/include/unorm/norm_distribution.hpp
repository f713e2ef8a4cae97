#pragma once

#include "unorm/formal_product.hpp"
#include "unorm/graded_complex.hpp"
#include "unorm/lattice.hpp"
#include "unorm/linear_combination.hpp"
#include "unorm/smith.hpp"
#include "unorm/system.hpp"

#include <map>
#include <stdexcept>
#include <vector>

namespace unorm {

/// Basis symbol [g z'] of A_z: a stalk z' (the target of g) and g in G_{z'}.
struct ASymbol {
    GroupElement g;

    const FormalProduct& stalk() const { return g.target; }
    static ASymbol top(const FormalProduct& zp) { return {GroupElement::identity(zp)}; }
    auto operator<=>(const ASymbol&) const = default;
};

template <class R = Int>
using AVector = LinearCombination<ASymbol, R>;

/// Elements of U_z are stored on the basis B_0 ∩ A_z.
template <class R = Int>
using UVector = LinearCombination<ASymbol, R>;

/// True when every component of g is nontrivial, i.e. [g z'] lies in B_0.
inline bool in_B0(const ASymbol& a) {
    for (long r : a.g.residues)
        if (r == 0) return false;
    return true;
}

/// All [g z'] with z' a stalk of z, ordered by stalk then group element.
inline std::vector<ASymbol> enumerate_A(const NormSystem& sys, const FormalProduct& z) {
    sys.check_configured(z);
    std::vector<ASymbol> out;
    for (const auto& zp : stalks(z))
        for (auto& g : group_elements(sys, zp)) out.push_back({std::move(g)});
    return out;
}

/// B_0 ∩ A_z, the canonical basis of U_z.
inline std::vector<ASymbol> basis_U(const NormSystem& sys, const FormalProduct& z) {
    std::vector<ASymbol> out;
    for (auto& a : enumerate_A(sys, z))
        if (in_B0(a)) out.push_back(std::move(a));
    return out;
}

/// Action of h (an element of any G_t) on [g z']: h acts through its
/// components at the primes of z', reduced along the towers.
inline ASymbol act(const NormSystem& sys, const GroupElement& h, const ASymbol& a) {
    ASymbol out = a;
    const auto& fs = a.stalk().factors();
    for (std::size_t i = 0; i < fs.size(); ++i)
        out.g.residues[i] = mod_floor(a.g.residues[i] + h.component(fs[i].first), sys.order(fs[i].first, fs[i].second));
    return out;
}

template <class R>
AVector<R> ring_act(const NormSystem& sys, const GroupRingElement<R>& r, const AVector<R>& v) {
    AVector<R> out;
    for (const auto& [a, c] : v)
        for (const auto& [res, k] : r.terms) out.add(act(sys, GroupElement{r.target, res}, a), c * k);
    return out;
}

/// p(x; Fr_x^{-1}) [g z'] for x not dividing z'.
template <class R = Int>
AVector<R> frobenius_poly_act(const NormSystem& sys, PrimeId x, const ASymbol& a) {
    AVector<R> out;
    const auto& coeffs = sys.poly(x);
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        out.add(act(sys, frobenius_power(sys, x, a.stalk(), -static_cast<long>(i)), a), R(coeffs[i]));
    return out;
}

/// N_{z(x)} [g z(x) z']: the sum of [h z(x) z'] over h restricting to g on z'.
template <class R = Int>
AVector<R> norm_lift(const NormSystem& sys, const FormalProduct& z, PrimeId x, const ASymbol& a) {
    const int e = z.valuation(x);
    const FormalProduct target = a.stalk() * FormalProduct::prime(x, e);
    AVector<R> out;
    const long n = sys.order(x, e);
    for (long k = 0; k < n; ++k) {
        ASymbol b{GroupElement::identity(target)};
        const auto& fs = target.factors();
        for (std::size_t i = 0; i < fs.size(); ++i) b.g.residues[i] = fs[i].first == x ? k : a.g.component(fs[i].first);
        out.add(b, R(1));
    }
    return out;
}

/// lambda_{z(x)} [g z'] = p(x; Fr_x^{-1}) [g z'] - N_{z(x)} [g z(x) z'].
template <class R = Int>
AVector<R> lambda(const NormSystem& sys, const FormalProduct& z, PrimeId x, const ASymbol& a) {
    if (!z.divisible_by(x)) throw std::invalid_argument("lambda: x does not divide z");
    if (a.stalk().divisible_by(x)) throw std::invalid_argument("lambda: symbol already involves x");
    AVector<R> out = frobenius_poly_act<R>(sys, x, a);
    out -= norm_lift<R>(sys, z, x, a);
    return out;
}

template <class R = Int>
AVector<R> lambda(const NormSystem& sys, const FormalProduct& z, PrimeId x, const AVector<R>& v) {
    AVector<R> out;
    for (const auto& [a, c] : v) out.add(lambda<R>(sys, z, x, a), c);
    return out;
}

/// Generators of D_z, in the order used by relation_matrix.
inline std::vector<std::pair<PrimeId, ASymbol>> relation_generators(const NormSystem& sys, const FormalProduct& z) {
    std::vector<std::pair<PrimeId, ASymbol>> out;
    for (PrimeId x : z.primes())
        for (auto& a : enumerate_A(sys, z / FormalProduct::prime(x, z.valuation(x)))) out.emplace_back(x, std::move(a));
    return out;
}

/// Columns lambda_{z(x)}[a] for every x | z and a in A_{z/z(x)}, rows indexed by enumerate_A.
inline SparseMatrix<Int> relation_matrix(const NormSystem& sys, const FormalProduct& z) {
    const auto gens = relation_generators(sys, z);
    return matrix_of(gens, enumerate_A(sys, z),
                     [&](const std::pair<PrimeId, ASymbol>& g) { return lambda<Int>(sys, z, g.first, g.second); });
}

/// Normal form in U_z by repeated rewriting: a symbol with a trivial
/// component at x is replaced using the distribution relation for x.
/// Results are memoised per symbol.
template <class R = Int>
class Reducer {
public:
    explicit Reducer(NormSystem sys) : sys_(std::move(sys)) {}

    const AVector<R>& reduce(const ASymbol& a) {
        if (auto it = memo_.find(a); it != memo_.end()) return it->second;
        AVector<R> out;
        const auto& fs = a.stalk().factors();
        std::size_t pos = fs.size();
        for (std::size_t i = 0; i < fs.size(); ++i)
            if (a.g.residues[i] == 0) {
                pos = i;
                break;
            }
        if (pos == fs.size()) {
            out.add(a, R(1));
        } else {
            // [g z'] = p(x;Fr^{-1})[g z'/z(x)] - sum_{h != 1} [(h, g) z'] modulo D_z
            const PrimeId x = fs[pos].first;
            const FormalProduct rest = a.stalk() / FormalProduct::prime(x, fs[pos].second);
            const ASymbol lower{restrict(sys_, a.g, rest)};
            for (const auto& [b, c] : frobenius_poly_act<R>(sys_, x, lower)) out.add(reduce(b), c);
            const long n = sys_.order(x, fs[pos].second);
            for (long k = 1; k < n; ++k) {
                ASymbol b = a;
                b.g.residues[pos] = k;
                out.add(reduce(b), R(-1));
            }
        }
        return memo_.emplace(a, std::move(out)).first->second;
    }

    AVector<R> reduce(const AVector<R>& v) {
        AVector<R> out;
        for (const auto& [a, c] : v) out.add(reduce(a), c);
        return out;
    }

    std::size_t memo_size() const { return memo_.size(); }

private:
    NormSystem sys_;
    std::map<ASymbol, AVector<R>> memo_;
};

/// Independent description of U_z as a quotient lattice: with U R V = D the
/// Smith form of the relation matrix, v maps to the trailing coordinates of
/// U v. Coordinates on B_0 are obtained by inverting that map on B_0.
class QuotientOracle {
public:
    QuotientOracle(const NormSystem& sys, const FormalProduct& z) : symbols_(enumerate_A(sys, z)), index_(symbols_) {
        const SparseMatrix<Int> rel = relation_matrix(sys, z);
        const std::size_t n = symbols_.size();
        DenseMatrix<Int> dense = rel.to_dense();
        if (rel.cols() == 0) dense.assign(n, {});
        SmithForm sf = smith_normal_form(dense);
        rank_ = sf.invariants.size();
        free_ = true;
        for (const auto& d : sf.invariants)
            if (d != 1) free_ = false;
        left_ = std::move(sf.left);
        for (std::size_t i = 0; i < n; ++i)
            if (in_B0(symbols_[i])) b0_.push_back(symbols_[i]);
        pi_b0_ = lattice::zeros(n - rank_, b0_.size());
        for (std::size_t j = 0; j < b0_.size(); ++j) {
            const std::size_t col = index_.at(b0_[j]);
            for (std::size_t i = rank_; i < n; ++i) pi_b0_[i - rank_][j] = left_[i][col];
        }
    }

    /// Torsion-free quotient (all nonzero invariants of the relation matrix are 1).
    bool is_free() const { return free_; }
    std::size_t relation_rank() const { return rank_; }
    std::size_t quotient_rank() const { return symbols_.size() - rank_; }
    const std::vector<ASymbol>& b0() const { return b0_; }

    /// Image of v in Z^{quotient_rank}.
    std::vector<Int> project(const AVector<Int>& v) const {
        std::vector<Int> out(quotient_rank(), 0);
        for (const auto& [a, c] : v) {
            const std::size_t col = index_.at(a);
            for (std::size_t i = rank_; i < symbols_.size(); ++i) out[i - rank_] += left_[i][col] * c;
        }
        return out;
    }

    /// Coordinates of v modulo D_z on B_0; throws unless B_0 maps onto a basis.
    AVector<Int> reduce(const AVector<Int>& v) const {
        const auto p = project(v);
        DenseMatrix<Int> rhs(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) rhs[i] = {p[i]};
        const DenseMatrix<Int> x = lattice::coordinates(pi_b0_, rhs, p.size());
        AVector<Int> out;
        for (std::size_t j = 0; j < b0_.size(); ++j) out.add(b0_[j], x[j][0]);
        return out;
    }

private:
    std::vector<ASymbol> symbols_;
    BasisIndex<ASymbol> index_;
    std::size_t rank_ = 0;
    bool free_ = true;
    DenseMatrix<Int> left_;
    std::vector<ASymbol> b0_;
    DenseMatrix<Int> pi_b0_;
};

/// cor_{w,z}[g w'] = sum over h in G_{z'} restricting to g of [h z'], where
/// z' is the stalk of z with the support of w'.
inline AVector<Int> corestriction(const NormSystem& sys, const FormalProduct& w, const FormalProduct& z, const ASymbol& a) {
    if (!w.divides(z)) throw std::invalid_argument("corestriction: w does not divide z");
    if (!a.stalk().divides(w) || stalk(w, support(a.stalk())) != a.stalk())
        throw std::invalid_argument("corestriction: symbol is not in A_w");
    const FormalProduct zp = stalk(z, support(a.stalk()));
    AVector<Int> out;
    for (const auto& h : group_elements(sys, zp))
        if (restrict(sys, h, a.stalk()) == a.g) out.add(ASymbol{h}, 1);
    return out;
}

/// Matrix of U_w -> U_z on the B_0 bases.
inline SparseMatrix<Int> corestriction_matrix(const NormSystem& sys, const FormalProduct& w, const FormalProduct& z) {
    Reducer<Int> red(sys);
    return matrix_of(basis_U(sys, w), basis_U(sys, z),
                     [&](const ASymbol& a) { return red.reduce(corestriction(sys, w, z, a)); });
}

/// Throws ConfigError unless the systems differ at most in their polynomials.
inline void check_compatible(const NormSystem& s1, const NormSystem& s2) {
    if (s1.num_primes() != s2.num_primes()) throw ConfigError("connecting map: different prime sets");
    for (PrimeId x : s1.primes()) {
        if (s1.tower(x) != s2.tower(x)) throw ConfigError("connecting map: different group towers");
        for (PrimeId x2 : s1.primes())
            if (s1.frobenius_exponent(x, x2) != s2.frobenius_exponent(x, x2))
                throw ConfigError("connecting map: different Frobenius data");
    }
}

/// phi_{1,2}[g z'] = sum_{w |_s z'} (-1)^{deg w̄} prod_{x | w} (p2 - p1)(x; Fr_x^{-1}) / |G_{z(x)}| [g z'/w].
inline AVector<Rational> connecting_map(const NormSystem& s1, const NormSystem& s2, const ASymbol& a) {
    check_compatible(s1, s2);
    AVector<Rational> out;
    for (const auto& wbar : squarefree_divisors(support(a.stalk()))) {
        const FormalProduct w = stalk(a.stalk(), wbar);
        const FormalProduct rest = a.stalk() / w;
        AVector<Rational> term(ASymbol{restrict(s1, a.g, rest)}, Rational(wbar.degree() % 2 == 0 ? 1 : -1));
        for (const auto& [x, e] : w.factors()) {
            AVector<Rational> next;
            const Rational scale = Rational(1) / Rational(s1.order(x, e));
            for (const auto& [b, c] : term) {
                next.add(frobenius_poly_act<Rational>(s2, x, b), c * scale);
                next.add(frobenius_poly_act<Rational>(s1, x, b), -c * scale);
            }
            term = std::move(next);
        }
        out += term;
    }
    return out;
}

template <class R>
AVector<Rational> connecting_map(const NormSystem& s1, const NormSystem& s2, const AVector<R>& v) {
    AVector<Rational> out;
    for (const auto& [a, c] : v) out.add(connecting_map(s1, s2, a), Rational(c));
    return out;
}

}  // namespace unorm
