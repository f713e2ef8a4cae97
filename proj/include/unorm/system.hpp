#pragma once

#include "unorm/formal_product.hpp"
#include "unorm/integer.hpp"
#include "unorm/linear_combination.hpp"

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace unorm {

/// Raised for any inconsistency in a system configuration or a request that
/// refers to unconfigured primes/levels.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Configuration of a universal norm distribution:
///  - ordered prime symbols,
///  - for each prime x the tower n_{x,1} | n_{x,2} | ... of cyclic orders |G_{x^k}|,
///  - Frobenius exponents: Fr_x acts on G_{x'^k} as sigma_{x'^k}^{f(x,x')},
///  - the polynomial p(x;t) as integer coefficients c0, c1, ...,
///  - an optional modulus M.
/// Towers are generator compatible: sigma_{x^{k+1}} maps to sigma_{x^k}.
class NormSystem {
public:
    NormSystem() = default;

    PrimeId add_prime(std::string name, std::vector<long> tower, std::vector<Int> poly) {
        if (find_prime(name)) throw ConfigError("duplicate prime '" + name + "'");
        PrimeId id{static_cast<int>(names_.size())};
        names_.push_back(std::move(name));
        towers_.push_back(std::move(tower));
        polys_.push_back(std::move(poly));
        for (auto& row : frobenius_) row.push_back(0);
        frobenius_.emplace_back(names_.size(), 0);
        return id;
    }

    void set_frobenius(PrimeId x, PrimeId target, long exponent) {
        check_prime(x);
        check_prime(target);
        if (x == target) throw ConfigError("Frobenius of a prime on its own group is the identity");
        frobenius_[x.index][target.index] = exponent;
    }
    void set_poly(PrimeId x, std::vector<Int> coeffs) {
        check_prime(x);
        polys_[x.index] = std::move(coeffs);
    }
    void set_modulus(std::optional<Int> m) { modulus_ = std::move(m); }

    int num_primes() const { return static_cast<int>(names_.size()); }
    std::vector<PrimeId> primes() const {
        std::vector<PrimeId> out;
        for (int i = 0; i < num_primes(); ++i) out.push_back(PrimeId{i});
        return out;
    }
    const std::string& name(PrimeId x) const {
        check_prime(x);
        return names_[x.index];
    }
    std::optional<PrimeId> find_prime(const std::string& name) const {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return PrimeId{static_cast<int>(i)};
        return std::nullopt;
    }
    const std::vector<long>& tower(PrimeId x) const {
        check_prime(x);
        return towers_[x.index];
    }
    /// |G_{x^k}|; the trivial group for k = 0.
    long order(PrimeId x, int k) const {
        check_prime(x);
        if (k == 0) return 1;
        if (k < 0 || k > static_cast<int>(towers_[x.index].size()))
            throw ConfigError("exponent " + std::to_string(k) + " of prime '" + names_[x.index] + "' is not configured");
        return towers_[x.index][k - 1];
    }
    long frobenius_exponent(PrimeId x, PrimeId target) const {
        check_prime(x);
        check_prime(target);
        return x == target ? 0 : frobenius_[x.index][target.index];
    }
    const std::vector<Int>& poly(PrimeId x) const {
        check_prime(x);
        return polys_[x.index];
    }
    Int poly_at_one(PrimeId x) const {
        Int s = 0;
        for (const auto& c : poly(x)) s += c;
        return s;
    }
    const std::optional<Int>& modulus() const { return modulus_; }

    /// Throws ConfigError unless every prime of z is known and every exponent configured.
    void check_configured(const FormalProduct& z) const {
        for (const auto& [p, e] : z.factors()) {
            if (p.index < 0 || p.index >= num_primes()) throw ConfigError("unknown prime in target");
            (void)order(p, e);
        }
    }

    /// |G_{z(x)}| = n_{x, v_x(z)}.
    long local_order(const FormalProduct& z, PrimeId x) const { return order(x, z.valuation(x)); }

    void validate() const {
        for (int i = 0; i < num_primes(); ++i) {
            const auto& t = towers_[i];
            if (t.empty()) throw ConfigError("prime '" + names_[i] + "' has no configured orders");
            for (std::size_t k = 0; k < t.size(); ++k) {
                if (t[k] < 1) throw ConfigError("prime '" + names_[i] + "': order must be positive");
                if (k > 0 && t[k] % t[k - 1] != 0) {
                    std::ostringstream os;
                    os << "prime '" << names_[i] << "': tower violation n_" << k << " = " << t[k - 1]
                       << " does not divide n_" << k + 1 << " = " << t[k];
                    throw ConfigError(os.str());
                }
            }
            if (polys_[i].empty()) throw ConfigError("prime '" + names_[i] + "' has an empty polynomial");
        }
        if (modulus_ && *modulus_ < 1) throw ConfigError("modulus must be positive");
    }

    bool operator==(const NormSystem&) const = default;

private:
    void check_prime(PrimeId x) const {
        if (x.index < 0 || x.index >= num_primes()) throw ConfigError("unknown prime index " + std::to_string(x.index));
    }

    std::vector<std::string> names_;
    std::vector<std::vector<long>> towers_;
    std::vector<std::vector<long>> frobenius_;
    std::vector<std::vector<Int>> polys_;
    std::optional<Int> modulus_;
};

/// |G_z| = prod_{x | z} n_{x, v_x(z)}.
inline long group_order(const NormSystem& sys, const FormalProduct& z) {
    long n = 1;
    for (const auto& [p, e] : z.factors()) n *= sys.order(p, e);
    return n;
}

/// Element of G_z stored through the canonical decomposition G_z = prod G_{z(x)}:
/// one residue modulo n_{x, v_x(z)} per prime of z, aligned with z.factors().
/// Residue 0 is the identity; residue k is sigma_{z(x)}^k.
struct GroupElement {
    FormalProduct target;
    std::vector<long> residues;

    static GroupElement identity(const FormalProduct& z) { return {z, std::vector<long>(z.factors().size(), 0)}; }

    long component(PrimeId x) const {
        const auto& fs = target.factors();
        for (std::size_t i = 0; i < fs.size(); ++i)
            if (fs[i].first == x) return residues[i];
        return 0;
    }
    bool is_identity() const {
        for (long r : residues)
            if (r != 0) return false;
        return true;
    }

    auto operator<=>(const GroupElement&) const = default;
};

/// All elements of G_z in canonical (lexicographic residue) order.
inline std::vector<GroupElement> group_elements(const NormSystem& sys, const FormalProduct& z) {
    std::vector<long> orders;
    for (const auto& [p, e] : z.factors()) orders.push_back(sys.order(p, e));
    std::vector<GroupElement> out;
    GroupElement g = GroupElement::identity(z);
    for (;;) {
        out.push_back(g);
        // odometer increment, last component fastest
        std::size_t i = orders.size();
        for (;;) {
            if (i == 0) return out;
            --i;
            if (++g.residues[i] < orders[i]) break;
            g.residues[i] = 0;
        }
    }
}

/// Image of g in G_{z'} for z' | g.target: drop the primes not dividing z' and
/// reduce each residue along the tower.
inline GroupElement restrict(const NormSystem& sys, const GroupElement& g, const FormalProduct& zp) {
    if (!zp.divides(g.target)) throw std::invalid_argument("restrict: target does not divide the group level");
    GroupElement out = GroupElement::identity(zp);
    const auto& fs = zp.factors();
    for (std::size_t i = 0; i < fs.size(); ++i)
        out.residues[i] = mod_floor(g.component(fs[i].first), sys.order(fs[i].first, fs[i].second));
    return out;
}

/// Product in G_z (targets must agree).
inline GroupElement multiply(const NormSystem& sys, const GroupElement& a, const GroupElement& b) {
    if (a.target != b.target) throw std::invalid_argument("multiply: group elements at different levels");
    GroupElement out = a;
    const auto& fs = a.target.factors();
    for (std::size_t i = 0; i < fs.size(); ++i)
        out.residues[i] = mod_floor(a.residues[i] + b.residues[i], sys.order(fs[i].first, fs[i].second));
    return out;
}

/// Fr_x restricted to G_{z'} raised to `power` (x must not divide z').
inline GroupElement frobenius_power(const NormSystem& sys, PrimeId x, const FormalProduct& zp, long power) {
    if (zp.divisible_by(x)) throw std::invalid_argument("frobenius: x divides the level");
    GroupElement out = GroupElement::identity(zp);
    const auto& fs = zp.factors();
    for (std::size_t i = 0; i < fs.size(); ++i)
        out.residues[i] = mod_floor(power * sys.frobenius_exponent(x, fs[i].first), sys.order(fs[i].first, fs[i].second));
    return out;
}

/// Element of the group ring Z[G_z] (or Q[G_z]); all terms share `target`.
template <class R = Int>
struct GroupRingElement {
    FormalProduct target;
    LinearCombination<std::vector<long>, R> terms;

    R coefficient(const GroupElement& g) const { return terms.coefficient(g.residues); }
    bool is_zero() const { return terms.empty(); }
    bool operator==(const GroupRingElement&) const = default;
};

template <class R = Int>
GroupRingElement<R> group_ring_identity(const FormalProduct& z) {
    GroupRingElement<R> e{z, {}};
    e.terms.add(GroupElement::identity(z).residues, R(1));
    return e;
}

/// N_{z(x)}: the sum of all elements of G_{z(x)}, as an element of Z[G_{z(x)}].
template <class R = Int>
GroupRingElement<R> norm_element(const NormSystem& sys, const FormalProduct& z, PrimeId x) {
    if (!z.divisible_by(x)) throw std::invalid_argument("norm_element: x does not divide z");
    const FormalProduct zx = FormalProduct::prime(x, z.valuation(x));
    GroupRingElement<R> n{zx, {}};
    for (const auto& g : group_elements(sys, zx)) n.terms.add(g.residues, R(1));
    return n;
}

/// p(x; Fr_x^{-1}) = sum_i c_i Fr_x^{-i} in Z[G_{z'}] for x not dividing z'.
template <class R = Int>
GroupRingElement<R> frobenius_poly(const NormSystem& sys, PrimeId x, const FormalProduct& zp) {
    if (zp.divisible_by(x)) throw std::invalid_argument("frobenius_poly: x divides z'");
    sys.check_configured(zp);
    GroupRingElement<R> out{zp, {}};
    const auto& coeffs = sys.poly(x);
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        out.terms.add(frobenius_power(sys, x, zp, -static_cast<long>(i)).residues, R(coeffs[i]));
    return out;
}

namespace detail {
/// Least common level of two targets that agree on shared primes.
inline FormalProduct common_level(const FormalProduct& a, const FormalProduct& b) {
    FormalProduct out = a;
    for (const auto& [p, e] : b.factors()) {
        int ea = a.valuation(p);
        if (ea != 0 && ea != e) throw std::invalid_argument("group ring: mismatched targets");
        out.set(p, e);
    }
    return out;
}
}  // namespace detail

/// Inflate an element of Z[G_{t}] to Z[G_z] along the canonical splitting
/// (t must be a stalk of z).
template <class R>
GroupRingElement<R> inflate(const GroupRingElement<R>& a, const FormalProduct& z) {
    if (detail::common_level(a.target, z) != z) throw std::invalid_argument("inflate: target is not a stalk");
    GroupRingElement<R> out{z, {}};
    for (const auto& [res, c] : a.terms) {
        GroupElement g{a.target, res};
        GroupElement h = GroupElement::identity(z);
        const auto& fs = z.factors();
        for (std::size_t i = 0; i < fs.size(); ++i) h.residues[i] = g.component(fs[i].first);
        out.terms.add(h.residues, c);
    }
    return out;
}

/// Convolution product; targets are inflated to their common level.
template <class R>
GroupRingElement<R> ring_multiply(const NormSystem& sys, const GroupRingElement<R>& a, const GroupRingElement<R>& b) {
    const FormalProduct z = detail::common_level(a.target, b.target);
    const auto ai = inflate(a, z), bi = inflate(b, z);
    GroupRingElement<R> out{z, {}};
    for (const auto& [ra, ca] : ai.terms)
        for (const auto& [rb, cb] : bi.terms)
            out.terms.add(multiply(sys, GroupElement{z, ra}, GroupElement{z, rb}).residues, ca * cb);
    return out;
}

inline std::string format_product(const NormSystem& sys, const FormalProduct& z) {
    if (z.is_unit()) return "1";
    std::string s;
    for (const auto& [p, e] : z.factors()) {
        if (!s.empty()) s += "*";
        s += sys.name(p);
        if (e != 1) s += "^" + std::to_string(e);
    }
    return s;
}

}  // namespace unorm
