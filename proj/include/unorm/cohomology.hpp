#pragma once

#include "unorm/anderson.hpp"
#include "unorm/graded_complex.hpp"
#include "unorm/homology.hpp"
#include "unorm/lattice.hpp"
#include "unorm/norm_distribution.hpp"
#include "unorm/resolution.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace unorm {

/// A theorem or construction was requested outside its hypotheses.
class InapplicableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Per-degree cohomology with the degree band in which the truncated
/// computation is exact, plus the (y, w) labels of canonical classes.
struct CohomologyReport {
    std::string system;
    FormalProduct z;
    Int modulus = 0;  // 0 for integral cohomology
    int q_max = 0;
    int band_low = 0, band_high = -1;
    std::map<int, HomologyGroup> groups;
    std::map<int, std::vector<std::pair<FormalProduct, FormalProduct>>> lineage;

    HomologyGroup at(int n) const {
        auto it = groups.find(n);
        return it == groups.end() ? HomologyGroup{} : it->second;
    }
    /// Degrees where both reports are guaranteed and the groups differ.
    std::vector<int> disagreements(const CohomologyReport& o) const {
        std::vector<int> out;
        for (int n = std::max(band_low, o.band_low); n <= std::min(band_high, o.band_high); ++n)
            if (at(n) != o.at(n)) out.push_back(n);
        return out;
    }
};

namespace detail {
inline HomologyGroup group_from_tally(std::size_t free, const std::vector<Int>& torsion) {
    return {free, invariant_factors(torsion)};
}

template <class Key>
void fill_from_complex(CohomologyReport& r, const GradedComplex<Key>& c, const Ring& ring) {
    for (int n = r.band_low; n <= r.band_high; ++n) r.groups[n] = c.homology(n, ring);
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Trivial coefficients

/// H^q(G_z, Z) (or with Z/M coefficients) for 0 <= q <= q_max - 1, computed
/// from Hom(P_z, Z).
inline CohomologyReport trivial_cohomology(const NormSystem& sys, const FormalProduct& z, int q_max,
                                           const Ring& ring = {}) {
    CohomologyReport r;
    r.z = z;
    r.modulus = ring.modulus;
    r.q_max = q_max;
    r.band_high = q_max - 1;
    detail::fill_from_complex(r, build_I_from_P(sys, z, q_max), ring);
    return r;
}

/// Closed form: the sum of the blocks H_{T,w} over all w with w̄ | z̄; with
/// Z/M coefficients (M dividing every |G_{z(x)}|) the rank in degree n is
/// the number of w of degree n.
inline CohomologyReport predicted_trivial(const NormSystem& sys, const FormalProduct& z, int q_max,
                                          const Ring& ring = {}) {
    CohomologyReport r;
    r.z = z;
    r.modulus = ring.modulus;
    r.q_max = q_max;
    r.band_high = q_max - 1;
    if (!ring.is_integers()) {
        for (PrimeId x : z.primes())
            if (Int(sys.local_order(z, x)) % ring.modulus != 0)
                throw InapplicableError("modulus does not divide every local group order");
        for (int n = 0; n <= r.band_high; ++n)
            r.groups[n] = {ring.modulus == 1 ? 0 : products_of_degree(support(z), n).size(), {}};
        return r;
    }
    std::map<int, std::pair<std::size_t, std::vector<Int>>> acc;
    for (const auto& w : cochain_indices(z, q_max))
        for (const auto& b : trivial_blocks(sys, z, w)) tally(acc, b.degree, b.rank, b.modulus);
    for (int n = 0; n <= r.band_high; ++n) r.groups[n] = detail::group_from_tally(acc[n].first, acc[n].second);
    return r;
}

// ---------------------------------------------------------------------------
// The Hom complex K_z = Hom(P_z, L_z)

/// Basis element [a, y, w] of K_z: the homomorphism [w] -> [a, y].
struct KSymbol {
    FormalProduct y;
    ASymbol a;
    FormalProduct w;

    int degree() const { return w.degree() - y.degree(); }
    auto operator<=>(const KSymbol&) const = default;
};

using KVector = LinearCombination<KSymbol, Int>;

/// Differential pieces: d_{1,x}, d_{2,x}, d_{3,x} and the tilde-convention
/// versions of d and delta.
enum class KPiece { d1, d2, d3, tilde_d, tilde_delta };

/// a_{z(x)} on a symbol of A_{z/z(y)}: 1 - sigma for even, N for odd.
/// sigma_{z(x)} acts trivially when x does not divide the stalk.
inline AVector<Int> local_operator(const NormSystem& sys, const FormalProduct& z, PrimeId x, bool even,
                                   const ASymbol& a) {
    AVector<Int> out;
    const long n = sys.local_order(z, x);
    if (!a.stalk().divisible_by(x)) {
        if (!even) out.add(a, Int(n));
        return out;
    }
    const GroupElement sigma = local_generator(a.stalk(), x);
    if (even) {
        out.add(a, 1);
        out.add(act(sys, sigma, a), -1);
    } else {
        ASymbol b = a;
        for (long k = 0; k < n; ++k) {
            out.add(b, 1);
            b = act(sys, sigma, b);
        }
    }
    return out;
}

/// sum_{x' <= x} v_{x'}(y)
inline int count_upto(PrimeId x, const FormalProduct& y) { return exponent_below(x, y) + y.valuation(x); }

/// One piece at one prime applied to a symbol.
inline KVector K_apply(const NormSystem& sys, const FormalProduct& z, KPiece piece, PrimeId x, const KSymbol& s) {
    KVector out;
    if (piece == KPiece::d3 || piece == KPiece::tilde_delta) {
        const bool even = s.w.valuation(x) % 2 == 0;
        int sign = sign_of(exponent_below(x, s.w));
        sign *= piece == KPiece::d3 ? sign_of(s.y.degree()) : sign_of(count_upto(x, s.y));
        const FormalProduct wx = s.w * FormalProduct::prime(x);
        for (const auto& [b, c] : local_operator(sys, z, x, even, s.a)) out.add(KSymbol{s.y, b, wx}, c * sign);
        return out;
    }
    const int sign = piece == KPiece::tilde_d ? sign_of(exponent_below(x, s.w)) : 1;
    const LPart part = piece == KPiece::d1 ? LPart::norm_part : piece == KPiece::d2 ? LPart::poly_part : LPart::full;
    for (const auto& [t, c] : L_differential_at<Int>(sys, z, x, LSymbol{s.y, s.a}, part))
        out.add(KSymbol{t.y, t.a, s.w}, c * sign);
    return out;
}

/// Sum of a piece over all primes of z.
inline KVector K_apply(const NormSystem& sys, const FormalProduct& z, KPiece piece, const KSymbol& s) {
    KVector out;
    for (PrimeId x : z.primes()) out += K_apply(sys, z, piece, x, s);
    return out;
}

template <class F>
KVector K_extend(const KVector& v, const F& f) {
    KVector out;
    for (const auto& [s, c] : v) out.add(f(s), c);
    return out;
}

/// The sign automorphism epsilon[a, y, w] = (-1)^{sum_{x | y} sum_{x' < x} v_{x'}(w)}.
inline int epsilon_sign(const KSymbol& s) {
    int e = 0;
    for (PrimeId x : s.y.primes()) e += exponent_below(x, s.w);
    return sign_of(e);
}

enum class Convention { plain, tilde };

/// K_z truncated to total degrees -deg z̄ .. q_max + 1. All total degrees in
/// that range are complete, so cohomology is exact in 0 .. q_max - 1.
class KComplex {
public:
    KComplex(NormSystem sys, FormalProduct z, int q_max) : sys_(std::move(sys)), z_(std::move(z)), q_max_(q_max) {
        const int r = z_.num_primes();
        for (const auto& y : squarefree_divisors(support(z_))) {
            const auto as = enumerate_A(sys_, z_ / stalk(z_, y));
            for (int n = -r; n <= q_max + 1; ++n) {
                const int dw = n + y.degree();
                if (dw < 0) continue;
                for (const auto& w : products_of_degree(support(z_), dw))
                    for (const auto& a : as) bases_[n].push_back({y, a, w});
            }
        }
        for (auto& [n, b] : bases_) std::sort(b.begin(), b.end());
    }

    const NormSystem& system() const { return sys_; }
    const FormalProduct& z() const { return z_; }
    int q_max() const { return q_max_; }
    int min_degree() const { return -z_.num_primes(); }
    int max_degree() const { return q_max_ + 1; }
    const std::map<int, std::vector<KSymbol>>& bases() const { return bases_; }
    const std::vector<KSymbol>& basis(int n) const {
        static const std::vector<KSymbol> empty;
        auto it = bases_.find(n);
        return it == bases_.end() ? empty : it->second;
    }

    /// Total differential of the chosen convention on one symbol.
    KVector total(const KSymbol& s, Convention c = Convention::plain) const {
        KVector out;
        for (PrimeId x : z_.primes()) {
            if (c == Convention::plain) {
                out += K_apply(sys_, z_, KPiece::d1, x, s);
                out += K_apply(sys_, z_, KPiece::d2, x, s);
                out += K_apply(sys_, z_, KPiece::d3, x, s);
            } else {
                out += K_apply(sys_, z_, KPiece::tilde_d, x, s);
                out += K_apply(sys_, z_, KPiece::tilde_delta, x, s);
            }
        }
        return out;
    }

    /// Matrix of a piece from degree n to n + 1 (all primes, or just x).
    SparseMatrix<Int> piece_matrix(KPiece piece, int n, std::optional<PrimeId> x = std::nullopt) const {
        return matrix_of(basis(n), basis(n + 1), [&](const KSymbol& s) {
            return x ? K_apply(sys_, z_, piece, *x, s) : K_apply(sys_, z_, piece, s);
        });
    }

    SparseMatrix<Int> epsilon(int n) const {
        const auto& b = basis(n);
        SparseMatrix<Int> m(b.size(), b.size());
        for (std::size_t i = 0; i < b.size(); ++i) m.add(i, i, epsilon_sign(b[i]));
        return m;
    }

    GradedComplex<KSymbol> complex(Convention c = Convention::plain) const {
        GradedComplex<KSymbol> out;
        for (const auto& [n, b] : bases_) out.set_basis(n, b);
        for (const auto& [n, b] : bases_) {
            if (!bases_.count(n + 1)) continue;
            out.set_differential(n, matrix_of(b, basis(n + 1), [&](const KSymbol& s) { return total(s, c); }));
        }
        return out;
    }

private:
    NormSystem sys_;
    FormalProduct z_;
    int q_max_;
    std::map<int, std::vector<KSymbol>> bases_;
};

/// A failed differential identity, for diagnostics.
struct IdentityFailure {
    std::string identity;
    KSymbol witness;
};

/// Checks d_{i,x}^2 = 0 and d_{i,x} d_{j,x'} + d_{j,x'} d_{i,x} = 0 for all
/// pieces i, j in {1, 2, 3} and primes x, x', symbol by symbol.
inline std::vector<IdentityFailure> check_multicomplex(const KComplex& k) {
    std::vector<IdentityFailure> out;
    const auto& sys = k.system();
    const auto& z = k.z();
    std::vector<std::pair<KPiece, PrimeId>> pieces;
    for (KPiece p : {KPiece::d1, KPiece::d2, KPiece::d3})
        for (PrimeId x : z.primes()) pieces.emplace_back(p, x);
    auto name = [&](std::size_t i) {
        const int idx = pieces[i].first == KPiece::d1 ? 1 : pieces[i].first == KPiece::d2 ? 2 : 3;
        return "d" + std::to_string(idx) + "," + sys.name(pieces[i].second);
    };
    // images of single pieces are shared between many compositions
    std::map<std::pair<std::size_t, KSymbol>, KVector> memo;
    auto piece = [&](std::size_t t, const KSymbol& u) -> const KVector& {
        auto [it, fresh] = memo.try_emplace({t, u});
        if (fresh) it->second = K_apply(sys, z, pieces[t].first, pieces[t].second, u);
        return it->second;
    };
    auto then = [&](std::size_t t, const KVector& v) {
        KVector out;
        for (const auto& [u, c] : v) out.add(piece(t, u), c);
        return out;
    };
    for (const auto& [n, basis] : k.bases())
        for (const auto& s : basis)
            for (std::size_t i = 0; i < pieces.size(); ++i)
                for (std::size_t j = i; j < pieces.size(); ++j) {
                    KVector v = then(i, piece(j, s));
                    if (i != j) v += then(j, piece(i, s));
                    if (!v.empty()) {
                        out.push_back({i == j ? name(i) + " squared" : name(i) + " with " + name(j), s});
                        if (out.size() > 8) return out;
                    }
                }
    return out;
}

/// Checks the square and anticommutator identities of (d, delta) or of
/// (d~, delta~) as matrices on every degree.
inline std::vector<std::string> check_double_complex(const KComplex& k, Convention c) {
    std::vector<std::string> out;
    const std::string tag = c == Convention::plain ? "" : "~";
    std::map<int, SparseMatrix<Int>> h, v;
    for (const auto& [n, b] : k.bases()) {
        if (!k.bases().count(n + 1)) continue;
        h[n] = c == Convention::plain ? k.piece_matrix(KPiece::d1, n) + k.piece_matrix(KPiece::d2, n)
                                      : k.piece_matrix(KPiece::tilde_d, n);
        v[n] = k.piece_matrix(c == Convention::plain ? KPiece::d3 : KPiece::tilde_delta, n);
    }
    for (const auto& [n, hn] : h) {
        if (!h.count(n + 1)) continue;
        const std::string at = " in degree " + std::to_string(n);
        if (!(h[n + 1] * hn).is_zero()) out.push_back("d" + tag + " squared" + at);
        if (!(v[n + 1] * v[n]).is_zero()) out.push_back("delta" + tag + " squared" + at);
        if (!(h[n + 1] * v[n] + v[n + 1] * hn).is_zero()) out.push_back("d" + tag + " delta" + tag + " anticommutator" + at);
    }
    return out;
}

/// epsilon d~ epsilon = d, epsilon delta~ epsilon = delta and epsilon^2 = 1
/// as matrices on every pair of consecutive degrees.
inline std::vector<std::string> check_epsilon(const KComplex& k) {
    std::vector<std::string> out;
    for (const auto& [n, b] : k.bases()) {
        const auto e = k.epsilon(n);
        if (!(e * e == SparseMatrix<Int>::identity(b.size()))) out.push_back("epsilon^2 != 1 in degree " + std::to_string(n));
        if (!k.bases().count(n + 1)) continue;
        const auto e1 = k.epsilon(n + 1);
        const auto d = k.piece_matrix(KPiece::d1, n) + k.piece_matrix(KPiece::d2, n);
        const auto delta = k.piece_matrix(KPiece::d3, n);
        if (!(e1 * k.piece_matrix(KPiece::tilde_d, n) * e == d))
            out.push_back("epsilon d~ epsilon != d in degree " + std::to_string(n));
        if (!(e1 * k.piece_matrix(KPiece::tilde_delta, n) * e == delta))
            out.push_back("epsilon delta~ epsilon != delta in degree " + std::to_string(n));
    }
    return out;
}

// ---------------------------------------------------------------------------
// The direct complex Hom(P_z, U_z)

/// Basis element [b, w] of Hom(P_z, U_z) with b in B_0 ∩ A_z.
struct KbarSymbol {
    ASymbol b;
    FormalProduct w;

    int degree() const { return w.degree(); }
    auto operator<=>(const KbarSymbol&) const = default;
};

class KbarComplex {
public:
    KbarComplex(NormSystem sys, FormalProduct z, int q_max)
        : sys_(std::move(sys)), z_(std::move(z)), q_max_(q_max), reducer_(sys_) {
        const auto b0 = basis_U(sys_, z_);
        for (int n = 0; n <= q_max + 1; ++n) {
            auto& v = bases_[n];
            for (const auto& w : products_of_degree(support(z_), n))
                for (const auto& b : b0) v.push_back({b, w});
            std::sort(v.begin(), v.end());
        }
    }

    const std::vector<KbarSymbol>& basis(int n) const {
        static const std::vector<KbarSymbol> empty;
        auto it = bases_.find(n);
        return it == bases_.end() ? empty : it->second;
    }

    /// delta[b, w] = sum_x (-1)^{sum_{x'<x} v_{x'}(w)} a_{z(x)} b [w x], reduced in U_z.
    LinearCombination<KbarSymbol, Int> coboundary(const KbarSymbol& s) {
        LinearCombination<KbarSymbol, Int> out;
        for (PrimeId x : z_.primes()) {
            const int sign = sign_of(exponent_below(x, s.w));
            const FormalProduct wx = s.w * FormalProduct::prime(x);
            const bool even = s.w.valuation(x) % 2 == 0;
            for (const auto& [b, c] : reducer_.reduce(local_operator(sys_, z_, x, even, s.b)))
                out.add(KbarSymbol{b, wx}, c * sign);
        }
        return out;
    }

    GradedComplex<KbarSymbol> complex() {
        GradedComplex<KbarSymbol> out;
        for (const auto& [n, b] : bases_) out.set_basis(n, b);
        for (const auto& [n, b] : bases_)
            if (bases_.count(n + 1))
                out.set_differential(n, matrix_of(b, basis(n + 1), [&](const KbarSymbol& s) { return coboundary(s); }));
        return out;
    }

    /// u: [a, 1, w] -> [reduce(a), w]; symbols with y != 1 map to zero.
    SparseMatrix<Int> u_matrix(const KComplex& k, int n) {
        return matrix_of(k.basis(n), basis(n), [&](const KSymbol& s) {
            LinearCombination<KbarSymbol, Int> out;
            if (s.y.is_unit())
                for (const auto& [b, c] : reducer_.reduce(s.a)) out.add(KbarSymbol{b, s.w}, c);
            return out;
        });
    }

private:
    NormSystem sys_;
    FormalProduct z_;
    int q_max_;
    Reducer<Int> reducer_;
    std::map<int, std::vector<KbarSymbol>> bases_;
};

// ---------------------------------------------------------------------------
// The quotient Q_z = K_z / S

/// [1, y, w] with y | w̄: the symbols surviving in Q_z.
inline bool in_Q(const KSymbol& s) { return s.a.stalk().is_unit() && s.y.divides(support(s.w)); }

class QComplex {
public:
    explicit QComplex(const KComplex& k) : k_(&k) {
        for (const auto& [n, b] : k.bases())
            for (const auto& s : b)
                if (in_Q(s)) bases_[n].push_back(s);
    }
    // Holds a reference to k.
    explicit QComplex(KComplex&&) = delete;

    const std::vector<KSymbol>& basis(int n) const {
        static const std::vector<KSymbol> empty;
        auto it = bases_.find(n);
        return it == bases_.end() ? empty : it->second;
    }
    const std::map<int, std::vector<KSymbol>>& bases() const { return bases_; }

    /// rho: K^n -> Q^n.
    SparseMatrix<Int> rho(int n) const {
        return matrix_of(k_->basis(n), basis(n), [](const KSymbol& s) { return in_Q(s) ? KVector(s) : KVector(); });
    }

    /// Induced differential on Q (the Q-part of the K differential).
    GradedComplex<KSymbol> complex(Convention c = Convention::plain) const {
        GradedComplex<KSymbol> out;
        for (const auto& [n, b] : bases_) out.set_basis(n, b);
        for (const auto& [n, b] : bases_)
            if (bases_.count(n + 1))
                out.set_differential(n, matrix_of(b, basis(n + 1),
                                                  [&](const KSymbol& s) { return k_->total(s, c).filtered(in_Q); },
                                                  [](const KSymbol&) { return true; }));
        return out;
    }

    /// S-stability: no piece maps a symbol outside Q into Q (mod M when
    /// modulus is nonzero). Returns offending symbols.
    std::vector<IdentityFailure> check_stability(const Int& modulus = 0) const {
        std::vector<IdentityFailure> out;
        const auto& sys = k_->system();
        const auto& z = k_->z();
        for (const auto& [n, b] : k_->bases())
            for (const auto& s : b) {
                if (in_Q(s)) continue;
                for (KPiece p : {KPiece::d1, KPiece::d2, KPiece::d3}) {
                    for (const auto& [t, c] : K_apply(sys, z, p, s).filtered(in_Q))
                        if (modulus == 0 || c % modulus != 0) {
                            out.push_back({"S not stable", s});
                            break;
                        }
                }
                if (out.size() > 8) return out;
            }
        return out;
    }

private:
    const KComplex* k_;
    std::map<int, std::vector<KSymbol>> bases_;
};

// ---------------------------------------------------------------------------
// Mapping cones

/// Degree-wise maps f^n : A^n -> B^n of a candidate chain map.
using ChainMap = std::map<int, SparseMatrix<Int>>;

/// Cone^n = A^{n+1} + B^n with D(a, b) = (-d_A a, f a + d_B b). Returns the
/// degrees in [lo, hi] where the cone has nonzero cohomology; an empty result
/// means f induces isomorphisms in degrees lo + 1 .. hi.
template <class KA, class KB>
std::vector<int> cone_defects(const GradedComplex<KA>& a, const GradedComplex<KB>& b, const ChainMap& f, int lo, int hi,
                              const Ring& ring = {}) {
    auto fmap = [&](int n) {
        auto it = f.find(n);
        return it == f.end() ? SparseMatrix<Int>(b.dimension(n), a.dimension(n)) : it->second;
    };
    auto cone_d = [&](int n) {
        // C^n = A^{n+1} + B^n  ->  C^{n+1} = A^{n+2} + B^{n+1}
        const std::size_t ra = a.dimension(n + 2), rb = b.dimension(n + 1);
        const std::size_t ca = a.dimension(n + 1), cb = b.dimension(n);
        SparseMatrix<Int> m(ra + rb, ca + cb);
        const auto da = a.differential(n + 1), db = b.differential(n), fn = fmap(n + 1);
        for (std::size_t j = 0; j < ca; ++j) {
            for (const auto& [i, v] : da.column(j)) m.add(i, j, -v);
            for (const auto& [i, v] : fn.column(j)) m.add(ra + i, j, v);
        }
        for (std::size_t j = 0; j < cb; ++j)
            for (const auto& [i, v] : db.column(j)) m.add(ra + i, ca + j, v);
        return m;
    };
    std::vector<int> out;
    for (int n = lo; n <= hi; ++n)
        if (!homology_at(cone_d(n - 1), cone_d(n), ring).is_zero()) out.push_back(n);
    return out;
}

// ---------------------------------------------------------------------------
// Cohomology of U_z and the closed forms

inline CohomologyReport cohomology_U(const NormSystem& sys, const FormalProduct& z, int q_max,
                                     Convention c = Convention::plain) {
    CohomologyReport r;
    r.z = z;
    r.q_max = q_max;
    r.band_high = q_max - 1;
    const KComplex k(sys, z, q_max);
    detail::fill_from_complex(r, k.complex(c), Ring{});
    return r;
}

/// Same groups from Hom(P_z, U_z) with the rewriting normal form.
inline CohomologyReport cohomology_Kbar(const NormSystem& sys, const FormalProduct& z, int q_max, const Ring& ring = {}) {
    CohomologyReport r;
    r.z = z;
    r.modulus = ring.modulus;
    r.q_max = q_max;
    r.band_high = q_max - 1;
    KbarComplex kb(sys, z, q_max);
    detail::fill_from_complex(r, kb.complex(), ring);
    return r;
}

inline bool theorem_b_applies(const NormSystem& sys, const FormalProduct& z) {
    for (PrimeId x : z.primes())
        if (sys.poly_at_one(x) != 0) return false;
    return true;
}

/// Divisibility hypotheses for the mod-M structure theorem.
inline bool theorem_a_applies(const NormSystem& sys, const FormalProduct& z, const Int& m) {
    if (m < 1) return false;
    for (PrimeId x : z.primes())
        if (Int(sys.local_order(z, x)) % m != 0 || sys.poly_at_one(x) % m != 0) return false;
    return true;
}

/// All pairs (y, w) with y | w̄ | z̄ and deg w - deg y == n.
inline std::vector<std::pair<FormalProduct, FormalProduct>> canonical_pairs(const FormalProduct& z, int n) {
    std::vector<std::pair<FormalProduct, FormalProduct>> out;
    for (const auto& y : squarefree_divisors(support(z)))
        for (const auto& w : products_of_degree(support(z), n + y.degree()))
            if (y.divides(support(w))) out.emplace_back(y, w);
    return out;
}

/// Integral closed form when p(x;1) = 0 for all x | z: the sum of
/// H_{T,w}[y] over y | w̄ | z̄, each shifted down by deg y.
inline CohomologyReport predicted_theorem_b(const NormSystem& sys, const FormalProduct& z, int q_max) {
    if (!theorem_b_applies(sys, z)) throw InapplicableError("p(x;1) != 0 for some x | z");
    CohomologyReport r;
    r.z = z;
    r.q_max = q_max;
    r.band_high = q_max - 1;
    std::map<int, std::pair<std::size_t, std::vector<Int>>> acc;
    for (const auto& w : cochain_indices(z, q_max + z.num_primes()))
        for (const auto& y : squarefree_divisors(support(w)))
            for (const auto& b : trivial_blocks(sys, z, w)) tally(acc, b.degree - y.degree(), b.rank, b.modulus);
    for (int n = 0; n <= r.band_high; ++n) r.groups[n] = detail::group_from_tally(acc[n].first, acc[n].second);
    return r;
}

/// Mod-M closed form: rank of degree n = number of pairs (y, w) with
/// y | w̄ | z̄ and deg w - deg y = n; the pairs label the canonical classes.
inline CohomologyReport predicted_theorem_a(const NormSystem& sys, const FormalProduct& z, const Int& m, int q_max) {
    if (!theorem_a_applies(sys, z, m)) throw InapplicableError("M must divide every |G_{z(x)}| and every p(x;1)");
    CohomologyReport r;
    r.z = z;
    r.modulus = m;
    r.q_max = q_max;
    r.band_high = q_max - 1;
    for (int n = 0; n <= r.band_high; ++n) {
        auto pairs = canonical_pairs(z, n);
        r.groups[n] = {m == 1 ? 0 : pairs.size(), {}};
        r.lineage[n] = std::move(pairs);
    }
    return r;
}

/// H^n(G_z, U_z / M U_z) from K_z / M K_z. When the structure theorem applies,
/// the canonical labels c(y, w) are attached from the basis of Q_z.
inline CohomologyReport cohomology_U_mod(const NormSystem& sys, const FormalProduct& z, const Int& m, int q_max,
                                         Convention c = Convention::plain) {
    CohomologyReport r;
    r.z = z;
    r.modulus = m;
    r.q_max = q_max;
    r.band_high = q_max - 1;
    const KComplex k(sys, z, q_max);
    detail::fill_from_complex(r, k.complex(c), Ring::mod(m));
    if (theorem_a_applies(sys, z, m)) {
        const QComplex q(k);
        for (int n = 0; n <= r.band_high; ++n)
            for (const auto& s : q.basis(n)) r.lineage[n].emplace_back(s.y, s.w);
    }
    return r;
}

// ---------------------------------------------------------------------------
// The restriction complex built from trivial-module cohomology

/// For fixed y | z̄ and cohomological degree q, the complex whose p-th term
/// is the sum over y' | y with deg y' = p of H^q(G_{z/z(y')}, Z), with
/// differential -sum_x omega(x, y/y') res_x. Returns the cohomology of
/// every term, p = 0 .. deg y.
inline std::vector<HomologyGroup> restriction_complex_cohomology(const NormSystem& sys, const FormalProduct& z,
                                                                 const FormalProduct& y, int q) {
    if (!y.is_squarefree() || !y.divides(support(z))) throw std::invalid_argument("restriction complex: y must divide z̄");
    const auto ys = squarefree_divisors(y);
    // per y': cochains of degree q, cycles and boundaries
    struct Piece {
        FormalProduct yp;
        std::vector<ISymbol> basis;
        DenseMatrix<Int> cycles, boundaries;
    };
    std::map<int, std::vector<Piece>> by_p;
    for (const auto& yp : ys) {
        const FormalProduct zp = z / stalk(z, yp);
        const auto c = build_I(sys, zp, q);
        Piece pc{yp, c.basis(q), {}, {}};
        const std::size_t dim = pc.basis.size();
        const auto out = c.differential(q).to_dense();
        pc.cycles = lattice::kernel_basis(out, dim);
        pc.boundaries = c.differential(q - 1).to_dense();
        if (pc.boundaries.empty()) pc.boundaries.assign(dim, {});
        by_p[yp.degree()].push_back(std::move(pc));
    }
    auto term = [&](int p) {
        lattice::Subquotient s;
        if (!by_p.count(p)) return s;
        std::size_t dim = 0;
        for (const auto& pc : by_p[p]) dim += pc.basis.size();
        s.dim = dim;
        s.cycles = DenseMatrix<Int>(dim);
        s.boundaries = DenseMatrix<Int>(dim);
        std::size_t off = 0;
        for (const auto& pc : by_p[p]) {
            auto place = [&](DenseMatrix<Int>& target, const DenseMatrix<Int>& block) {
                const std::size_t cols = lattice::num_cols(block), start = lattice::num_cols(target);
                for (auto& row : target) row.resize(start + cols, 0);
                for (std::size_t i = 0; i < pc.basis.size(); ++i)
                    for (std::size_t j = 0; j < cols; ++j) target[off + i][start + j] = block[i][j];
            };
            place(s.cycles, pc.cycles);
            place(s.boundaries, pc.boundaries);
            off += pc.basis.size();
        }
        return s;
    };
    auto map = [&](int p) {
        std::size_t rows = 0, cols = 0;
        if (by_p.count(p + 1))
            for (const auto& pc : by_p[p + 1]) rows += pc.basis.size();
        if (by_p.count(p))
            for (const auto& pc : by_p[p]) cols += pc.basis.size();
        DenseMatrix<Int> m = lattice::zeros(rows, cols);
        if (!rows || !cols) return m;
        std::size_t coff = 0;
        for (const auto& src : by_p[p]) {
            std::size_t roff = 0;
            for (const auto& dst : by_p[p + 1]) {
                if (src.yp.divides(dst.yp)) {
                    const FormalProduct x = dst.yp / src.yp;
                    const PrimeId px = x.primes().front();
                    const int sign = -omega(px, y / src.yp);
                    const BasisIndex<ISymbol> idx(dst.basis);
                    for (std::size_t j = 0; j < src.basis.size(); ++j)
                        if (auto i = idx.find(src.basis[j])) m[roff + *i][coff + j] = sign;
                }
                roff += dst.basis.size();
            }
            coff += src.basis.size();
        }
        return m;
    };
    std::vector<HomologyGroup> out;
    for (int p = 0; p <= y.degree(); ++p) {
        const auto inv = lattice::subquotient_homology(term(p - 1), map(p - 1), term(p), map(p), term(p + 1));
        HomologyGroup h;
        std::vector<Int> tors;
        for (const auto& d : inv)
            if (d == 0) ++h.free_rank;
            else tors.push_back(d);
        h.torsion = invariant_factors(tors);
        out.push_back(std::move(h));
    }
    return out;
}

/// Predicted first cohomology of the restriction complex: the degree-q parts
/// of H_{T,w} over y | w̄ | z̄.
inline HomologyGroup predicted_restriction_first(const NormSystem& sys, const FormalProduct& z, const FormalProduct& y,
                                                int q) {
    std::map<int, std::pair<std::size_t, std::vector<Int>>> acc;
    for (const auto& w : cochain_indices(z, q))
        if (y.divides(support(w)))
            for (const auto& b : trivial_blocks(sys, z, w)) tally(acc, b.degree, b.rank, b.modulus);
    return detail::group_from_tally(acc[q].first, acc[q].second);
}

}  // namespace unorm
