#pragma once

#include "unorm/anderson.hpp"
#include "unorm/cohomology.hpp"
#include "unorm/config.hpp"
#include "unorm/norm_distribution.hpp"
#include "unorm/resolution.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace unorm {

enum class Status { pass, fail, skipped };

inline const char* to_string(Status s) {
    switch (s) {
        case Status::pass: return "pass";
        case Status::fail: return "fail";
        default: return "skipped";
    }
}

/// Computed and predicted groups in one degree.
struct DegreeRow {
    int degree = 0;
    std::string computed, predicted;
    bool match = true;
};

struct CheckResult {
    CheckResult() = default;
    explicit CheckResult(std::string n) : name(std::move(n)) {}

    std::string name;
    Status status = Status::pass;
    std::vector<std::string> notes;  // failures, or the reason a check was skipped
    std::vector<DegreeRow> rows;
    std::optional<std::pair<int, int>> band;
    double seconds = 0;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            status = Status::fail;
            notes.push_back(what);
        }
    }
    void skip(const std::string& why) {
        status = Status::skipped;
        notes.push_back("inapplicable: " + why);
    }
};

inline const std::vector<std::string>& all_checks() {
    static const std::vector<std::string> names{"anderson", "basis",    "connecting", "corestriction", "epsilon",
                                                "koszul",   "theorem_a", "theorem_b", "trivial"};
    return names;
}

struct RunSpec {
    FormalProduct z;
    std::optional<Int> modulus;  // falls back to the system's modulus
    int q_max = 4;
    std::vector<std::string> checks;  // empty means all
    unsigned long seed = 20240601;
    std::size_t random_vectors = 100;
};

namespace detail {

/// Rows comparing two reports over the computed band.
inline void compare_reports(CheckResult& r, const CohomologyReport& got, const CohomologyReport& want,
                            const std::string& label) {
    r.band = {got.band_low, got.band_high};
    for (int n = got.band_low; n <= got.band_high; ++n) {
        DegreeRow row{n, describe(got.at(n), got.modulus), describe(want.at(n), want.modulus), got.at(n) == want.at(n)};
        r.require(row.match, label + ": degree " + std::to_string(n) + " computed " + row.computed + ", predicted " +
                                 row.predicted);
        r.rows.push_back(std::move(row));
    }
}

template <class F>
void guarded(CheckResult& r, F&& body) {
    try {
        body();
    } catch (const InapplicableError& e) {
        r.skip(e.what());
    } catch (const DifferentialError& e) {
        r.require(false, std::string("differential: ") + e.what());
    }
}

inline GradedComplex<ASymbol> U_complex(const NormSystem& sys, const FormalProduct& z) {
    GradedComplex<ASymbol> u;
    u.set_basis(0, basis_U(sys, z));
    return u;
}

}  // namespace detail

/// Freeness of U_z, its rank, and agreement of the rewriting normal form
/// with the Smith-form oracle on random vectors.
inline CheckResult check_basis(const NormSystem& sys, const FormalProduct& z, unsigned long seed,
                               std::size_t samples) {
    CheckResult r{"basis"};
    const auto sd = smith_diagonal(relation_matrix(sys, z));
    const auto syms = enumerate_A(sys, z);
    const auto order = static_cast<std::size_t>(group_order(sys, z));
    r.require(sd.torsion.empty(), "relation matrix has a nonunit invariant factor");
    r.require(syms.size() - sd.rank == order, "rank of U_z is " + std::to_string(syms.size() - sd.rank) +
                                                  ", expected |G_z| = " + std::to_string(order));
    r.require(basis_U(sys, z).size() == order, "|B_0 ∩ A_z| differs from |G_z|");
    const QuotientOracle oracle(sys, z);
    r.require(oracle.is_free(), "oracle: quotient has torsion");
    Reducer<Int> red(sys);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, syms.size() - 1);
    std::uniform_int_distribution<int> coeff(-5, 5), terms(1, 6);
    for (std::size_t t = 0; t < samples; ++t) {
        AVector<Int> v;
        for (int k = terms(rng); k > 0; --k) v.add(syms[pick(rng)], coeff(rng));
        if (red.reduce(v) != oracle.reduce(v)) {
            r.require(false, "normal form disagrees with the oracle on random vector " + std::to_string(t));
            break;
        }
    }
    return r;
}

/// Anderson's resolution: d^2 = 0, d1/d2 identities, acyclicity in
/// negative degrees and the augmentation L^0 -> U_z a quasi-isomorphism.
inline CheckResult check_anderson(const NormSystem& sys, const FormalProduct& z) {
    CheckResult r{"anderson"};
    detail::guarded(r, [&] {
        const auto L = build_L(sys, z);
        build_L(sys, z, LPart::norm_part);
        build_L(sys, z, LPart::poly_part);
        for (int n = L.min_degree(); n < 0; ++n) {
            const auto a = L_piece(sys, z, n, LPart::norm_part), b = L_piece(sys, z, n, LPart::poly_part);
            const auto a1 = L_piece(sys, z, n + 1, LPart::norm_part), b1 = L_piece(sys, z, n + 1, LPart::poly_part);
            r.require((a1 * b + b1 * a).is_zero(), "d1 d2 + d2 d1 != 0 in degree " + std::to_string(n));
        }
        for (int n = L.min_degree(); n <= 0; ++n) {
            const auto h = L.homology(n);
            const HomologyGroup want = n < 0 ? HomologyGroup{} : HomologyGroup{basis_U(sys, z).size(), {}};
            DegreeRow row{n, describe(h), describe(want), h == want};
            r.require(row.match, "H^" + std::to_string(n) + "(L) = " + row.computed);
            r.rows.push_back(std::move(row));
        }
        const ChainMap aug{{0, augmentation_matrix(sys, z)}};
        r.require(cone_defects(L, detail::U_complex(sys, z), aug, L.min_degree() - 1, 1).empty(),
                  "augmentation is not a quasi-isomorphism");
    });
    return r;
}

/// Trivial-module cohomology against the closed form, the two cochain
/// constructions against each other and the classical H^2.
inline CheckResult check_trivial(const NormSystem& sys, const FormalProduct& z, int q_max, std::optional<Int> m) {
    CheckResult r{"trivial"};
    const auto a = build_I(sys, z, q_max), b = build_I_from_P(sys, z, q_max);
    for (int n = 0; n <= q_max; ++n)
        r.require(a.differential(n) == b.differential(n),
                  "closed-form coboundary differs from Hom(P, Z) in degree " + std::to_string(n));
    detail::compare_reports(r, trivial_cohomology(sys, z, q_max), predicted_trivial(sys, z, q_max), "H(G_z, Z)");
    if (q_max >= 3) {
        std::vector<Int> orders;
        for (PrimeId x : z.primes()) orders.push_back(Int(sys.local_order(z, x)));
        const HomologyGroup h2{0, invariant_factors(orders)};
        r.require(trivial_cohomology(sys, z, 3).at(2) == h2, "H^2(G_z, Z) differs from the product of Z/n_x");
    }
    if (m && *m > 1) {
        bool divides = true;
        for (PrimeId x : z.primes()) divides = divides && Int(sys.local_order(z, x)) % *m == 0;
        if (divides)
            detail::compare_reports(r, trivial_cohomology(sys, z, q_max, Ring::mod(*m)),
                                    predicted_trivial(sys, z, q_max, Ring::mod(*m)), "H(G_z, Z/M)");
    }
    return r;
}

/// Mod-M structure theorem, with S-stability mod M and rho_M certified by
/// its mapping cone.
inline CheckResult check_theorem_a(const NormSystem& sys, const FormalProduct& z, std::optional<Int> m, int q_max) {
    CheckResult r{"theorem_a"};
    if (!m) {
        r.skip("no modulus M given");
        return r;
    }
    if (!theorem_a_applies(sys, z, *m)) {
        r.skip("M must divide every |G_{z(x)}| and every p(x;1)");
        return r;
    }
    detail::guarded(r, [&] {
        const auto got = cohomology_U_mod(sys, z, *m, q_max);
        const auto want = predicted_theorem_a(sys, z, *m, q_max);
        detail::compare_reports(r, got, want, "H(G_z, U_z/M)");
        for (int n = 0; n <= q_max - 1; ++n) {
            auto a = got.lineage.count(n) ? got.lineage.at(n) : decltype(got.lineage)::mapped_type{};
            auto b = want.lineage.at(n);
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            r.require(a == b, "canonical classes differ in degree " + std::to_string(n));
        }
        const KComplex k(sys, z, q_max);
        const QComplex q(k);
        r.require(q.check_stability(*m).empty(), "S is not stable mod M");
        ChainMap rho;
        for (const auto& [n, b] : k.bases()) rho[n] = q.rho(n);
        r.require(cone_defects(k.complex(), q.complex(), rho, -1, q_max - 1, Ring::mod(*m)).empty(),
                  "rho_M is not a quasi-isomorphism in the band");
    });
    return r;
}

/// Integral structure theorem, the comparison K -> Hom(P, U_z), rho, and the
/// restriction complexes of trivial cohomology.
inline CheckResult check_theorem_b(const NormSystem& sys, const FormalProduct& z, int q_max) {
    CheckResult r{"theorem_b"};
    if (!theorem_b_applies(sys, z)) {
        r.skip("p(x;1) != 0 for some x | z");
        return r;
    }
    detail::guarded(r, [&] {
        const KComplex k(sys, z, q_max);
        const auto kc = k.complex();
        CohomologyReport got;
        got.z = z;
        got.q_max = q_max;
        got.band_high = q_max - 1;
        detail::fill_from_complex(got, kc, Ring{});
        detail::compare_reports(r, got, predicted_theorem_b(sys, z, q_max), "H(G_z, U_z)");
        r.require(got.disagreements(cohomology_Kbar(sys, z, q_max)).empty(), "K and Hom(P, U_z) disagree");
        KbarComplex kb(sys, z, q_max);
        ChainMap u;
        for (int n = 0; n <= q_max + 1; ++n) u[n] = kb.u_matrix(k, n);
        r.require(cone_defects(kc, kb.complex(), u, -1, q_max - 1).empty(), "u is not a quasi-isomorphism in the band");
        const QComplex q(k);
        r.require(q.check_stability().empty(), "S is not stable");
        ChainMap rho;
        for (const auto& [n, b] : k.bases()) rho[n] = q.rho(n);
        r.require(cone_defects(kc, q.complex(), rho, -1, q_max - 1).empty(), "rho is not a quasi-isomorphism in the band");
        for (const auto& y : squarefree_divisors(support(z)))
            for (int qq = 0; qq <= q_max - 1; ++qq) {
                const auto h = restriction_complex_cohomology(sys, z, y, qq);
                r.require(h.front() == predicted_restriction_first(sys, z, y, qq),
                          "restriction complex: first cohomology differs (q = " + std::to_string(qq) + ")");
                for (std::size_t p = 1; p < h.size(); ++p)
                    r.require(h[p].is_zero(), "restriction complex: nonzero cohomology at p = " + std::to_string(p));
            }
    });
    return r;
}

/// Per-prime multicomplex identities, both conventions of the double
/// complex and the epsilon conjugation.
inline CheckResult check_epsilon(const NormSystem& sys, const FormalProduct& z, int q_max) {
    CheckResult r{"epsilon"};
    detail::guarded(r, [&] {
        const KComplex k(sys, z, q_max);
        for (const auto& f : check_multicomplex(k)) r.require(false, f.identity);
        for (const auto& f : check_double_complex(k, Convention::plain)) r.require(false, f);
        for (const auto& f : check_double_complex(k, Convention::tilde)) r.require(false, f);
        for (const auto& f : check_epsilon(k)) r.require(false, f);
        if (r.status == Status::fail) return;
        CohomologyReport plain, tilde;
        plain.band_high = tilde.band_high = q_max - 1;
        detail::fill_from_complex(plain, k.complex(Convention::plain), Ring{});
        detail::fill_from_complex(tilde, k.complex(Convention::tilde), Ring{});
        detail::compare_reports(r, tilde, plain, "tilde total complex");
    });
    return r;
}

/// The system with the same groups and Frobenius data but polynomial 1
/// (or 1 - t if the system already is the trivial distribution).
inline NormSystem companion_system(const NormSystem& sys) {
    NormSystem out = sys;
    bool trivial = true;
    for (PrimeId x : sys.primes()) trivial = trivial && sys.poly(x) == std::vector<Int>{1};
    for (PrimeId x : sys.primes()) out.set_poly(x, trivial ? std::vector<Int>{1, -1} : std::vector<Int>{1});
    return out;
}

/// phi_{2,1} phi_{1,2} = id on A_z ⊗ Q, phi_{1,2} carries D_1 into D_2 ⊗ Q,
/// and U_z ⊗ Q has rank |G_z| for both systems.
inline CheckResult check_connecting(const NormSystem& s1, const NormSystem& s2, const FormalProduct& z) {
    CheckResult r{"connecting"};
    const auto syms = enumerate_A(s1, z);
    const BasisIndex<ASymbol> index(syms);
    for (const auto& a : syms) {
        const auto there = connecting_map(s1, s2, a);
        const auto back = connecting_map(s2, s1, there);
        if (back != AVector<Rational>(a, Rational(1))) {
            r.require(false, "phi_{2,1} phi_{1,2} != id");
            break;
        }
    }
    const auto order = static_cast<std::size_t>(group_order(s1, z));
    const auto r1 = relation_matrix(s1, z), r2 = relation_matrix(s2, z);
    auto to_rational = [&](const SparseMatrix<Int>& m) {
        SparseMatrix<Rational> out(m.rows(), m.cols());
        for (std::size_t j = 0; j < m.cols(); ++j)
            for (const auto& [i, v] : m.column(j)) out.add(i, j, Rational(v));
        return out;
    };
    const auto q1 = to_rational(r1), q2 = to_rational(r2);
    const std::size_t rank1 = rational_rank(q1), rank2 = rational_rank(q2);
    r.require(syms.size() - rank1 == order, "rational rank of U_z differs from |G_z| for the first system");
    r.require(syms.size() - rank2 == order, "rational rank of U_z differs from |G_z| for the second system");
    SparseMatrix<Rational> image(syms.size(), r1.cols());
    for (std::size_t j = 0; j < r1.cols(); ++j) {
        AVector<Int> v;
        for (const auto& [i, c] : r1.column(j)) v.add(syms[i], c);
        for (const auto& [b, c] : connecting_map(s1, s2, v)) image.add(index.at(b), j, c);
    }
    r.require(rational_rank(q2.hconcat(image)) == rank2, "phi_{1,2} does not carry D_1 into D_2 ⊗ Q");
    return r;
}

/// Corestriction U_w -> U_z for every w | z: injective, a splitting of the
/// coordinate projection when w is a stalk, and a chain map on L.
inline CheckResult check_corestriction(const NormSystem& sys, const FormalProduct& z) {
    CheckResult r{"corestriction"};
    std::vector<FormalProduct> divisors{FormalProduct{}};
    for (const auto& [x, e] : z.factors()) {
        std::vector<FormalProduct> next;
        for (const auto& d : divisors)
            for (int k = 0; k <= e; ++k) next.push_back(d * FormalProduct::prime(x, k));
        divisors = std::move(next);
    }
    std::sort(divisors.begin(), divisors.end());
    for (const auto& w : divisors) {
        const auto cor = corestriction_matrix(sys, w, z);
        const auto sd = smith_diagonal(cor);
        r.require(sd.rank == cor.cols(), "corestriction is not injective for w = " + format_z(sys, w));
        if (stalk(z, support(w)) == w) {
            const auto bw = basis_U(sys, w);
            const BasisIndex<ASymbol> iz(basis_U(sys, z));
            for (std::size_t j = 0; j < bw.size(); ++j)
                for (std::size_t i = 0; i < bw.size(); ++i)
                    if (cor.at(iz.at(bw[i]), j) != (i == j ? 1 : 0)) {
                        r.require(false, "splitting identity fails for w = " + format_z(sys, w));
                        i = j = bw.size();
                    }
        }
        const auto bases = L_bases(sys, w);
        for (const auto& [n, b] : bases)
            for (const auto& s : b) {
                LVector<Int> lhs = L_differential<Int>(sys, z, corestriction_L(sys, w, z, s));
                LVector<Int> rhs;
                for (const auto& [t, c] : L_differential<Int>(sys, w, s)) rhs.add(corestriction_L(sys, w, z, t), c);
                if (lhs != rhs) {
                    r.require(false, "corestriction does not commute with d for w = " + format_z(sys, w));
                    goto next_w;
                }
            }
    next_w:;
    }
    return r;
}

/// The summand decomposition of L: the generators lambda_{z(y'')}[a, y'] form
/// a Z-basis in every degree, d acts on them as the truncated Koszul
/// differential, and each truncated Koszul complex has cohomology Z in degree 0.
inline CheckResult check_koszul(const NormSystem& sys, const FormalProduct& z) {
    CheckResult r{"koszul"};
    const auto bases = L_bases(sys, z);
    std::map<int, std::vector<SummandGenerator>> gens;
    std::set<FormalProduct> variable_sets;
    for (const auto& a : basis_U(sys, z)) {
        const FormalProduct c = summand_variables(z, a);
        variable_sets.insert(c);
        for (const auto& yp : squarefree_divisors(c))
            for (const auto& ypp : squarefree_divisors(c / yp)) gens[-yp.degree()].push_back({a, {yp, ypp}});
    }
    for (const auto& [n, b] : bases) {
        const auto& g = gens[n];
        r.require(g.size() == b.size(), "degree " + std::to_string(n) + ": generator count differs from rank of L");
        if (g.size() != b.size()) continue;
        const auto m = matrix_of(g, b, [&](const SummandGenerator& s) { return summand_generator(sys, z, s); });
        const auto sd = smith_diagonal(m);
        r.require(sd.rank == b.size() && sd.torsion.empty(),
                  "degree " + std::to_string(n) + ": generators are not a Z-basis");
    }
    for (const auto& [n, g] : gens)
        for (const auto& s : g) {
            LVector<Int> want;
            for (const auto& [k, c] : koszul_differential(s.k)) want.add(summand_generator(sys, z, {s.a, k}), c);
            if (L_differential<Int>(sys, z, summand_generator(sys, z, s)) != want) {
                r.require(false, "d differs from the Koszul differential on a generator in degree " + std::to_string(n));
                break;
            }
        }
    for (const auto& c : variable_sets) {
        const auto k = koszul_truncated(c);
        for (int n = -c.degree(); n <= 0; ++n) {
            const HomologyGroup want = n == 0 ? HomologyGroup{1, {}} : HomologyGroup{};
            r.require(k.homology(n) == want, "truncated Koszul complex has unexpected cohomology in degree " +
                                                 std::to_string(n));
        }
    }
    return r;
}

/// Runs the requested checks (all by default), ordered by name.
inline std::vector<CheckResult> run_checks(const NormSystem& sys, const RunSpec& spec) {
    sys.check_configured(spec.z);
    std::vector<std::string> names = spec.checks.empty() ? all_checks() : spec.checks;
    for (const auto& n : names)
        if (std::find(all_checks().begin(), all_checks().end(), n) == all_checks().end())
            throw ConfigError("unknown check '" + n + "'");
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    if (spec.q_max < 1) throw ConfigError("q_max must be at least 1");
    const std::optional<Int> m = spec.modulus ? spec.modulus : sys.modulus();
    std::vector<CheckResult> out;
    for (const auto& n : names) {
        const auto t0 = std::chrono::steady_clock::now();
        CheckResult res;
        if (n == "basis") res = check_basis(sys, spec.z, spec.seed, spec.random_vectors);
        else if (n == "anderson") res = check_anderson(sys, spec.z);
        else if (n == "trivial") res = check_trivial(sys, spec.z, spec.q_max, m);
        else if (n == "theorem_a") res = check_theorem_a(sys, spec.z, m, spec.q_max);
        else if (n == "theorem_b") res = check_theorem_b(sys, spec.z, spec.q_max);
        else if (n == "epsilon") res = check_epsilon(sys, spec.z, spec.q_max);
        else if (n == "connecting") res = check_connecting(sys, companion_system(sys), spec.z);
        else if (n == "corestriction") res = check_corestriction(sys, spec.z);
        else res = check_koszul(sys, spec.z);
        res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.push_back(std::move(res));
    }
    return out;
}

}  // namespace unorm
