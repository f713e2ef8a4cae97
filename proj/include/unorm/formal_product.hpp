#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace unorm {

/// Position of a prime symbol in the fixed total order of the system.
struct PrimeId {
    int index = 0;
    auto operator<=>(const PrimeId&) const = default;
};

/// A finite formal product x1^e1 * x2^e2 * ... of prime symbols. Stored as
/// (prime, exponent) pairs sorted by prime with every exponent >= 1, so the
/// empty product is the unit.
class FormalProduct {
public:
    using Factor = std::pair<PrimeId, int>;

    FormalProduct() = default;

    static FormalProduct prime(PrimeId x, int exponent = 1) {
        FormalProduct z;
        z.set(x, exponent);
        return z;
    }

    static FormalProduct from_exponents(const std::vector<int>& exps) {
        FormalProduct z;
        for (std::size_t i = 0; i < exps.size(); ++i)
            if (exps[i] < 0) throw std::invalid_argument("negative exponent");
            else if (exps[i] > 0) z.factors_.emplace_back(PrimeId{static_cast<int>(i)}, exps[i]);
        return z;
    }

    const std::vector<Factor>& factors() const { return factors_; }
    bool is_unit() const { return factors_.empty(); }

    int valuation(PrimeId x) const {
        for (const auto& [p, e] : factors_)
            if (p == x) return e;
        return 0;
    }
    bool divisible_by(PrimeId x) const { return valuation(x) > 0; }

    void set(PrimeId x, int exponent) {
        if (exponent < 0) throw std::invalid_argument("negative exponent");
        auto it = factors_.begin();
        while (it != factors_.end() && it->first < x) ++it;
        if (it != factors_.end() && it->first == x) {
            if (exponent == 0) factors_.erase(it);
            else it->second = exponent;
        } else if (exponent > 0) {
            factors_.insert(it, {x, exponent});
        }
    }

    int degree() const {
        int d = 0;
        for (const auto& f : factors_) d += f.second;
        return d;
    }
    /// Number of distinct primes, i.e. the degree of the support.
    int num_primes() const { return static_cast<int>(factors_.size()); }

    bool is_squarefree() const {
        for (const auto& f : factors_)
            if (f.second != 1) return false;
        return true;
    }

    std::vector<PrimeId> primes() const {
        std::vector<PrimeId> out;
        out.reserve(factors_.size());
        for (const auto& f : factors_) out.push_back(f.first);
        return out;
    }

    bool divides(const FormalProduct& z) const {
        for (const auto& [p, e] : factors_)
            if (z.valuation(p) < e) return false;
        return true;
    }

    FormalProduct operator*(const FormalProduct& o) const {
        FormalProduct out = *this;
        for (const auto& [p, e] : o.factors_) out.set(p, out.valuation(p) + e);
        return out;
    }

    /// Exact quotient; throws unless `o` divides `*this`.
    FormalProduct operator/(const FormalProduct& o) const {
        if (!o.divides(*this)) throw std::invalid_argument("formal product quotient: not a divisor");
        FormalProduct out = *this;
        for (const auto& [p, e] : o.factors_) out.set(p, out.valuation(p) - e);
        return out;
    }

    bool coprime_to(const FormalProduct& o) const {
        for (const auto& f : factors_)
            if (o.divisible_by(f.first)) return false;
        return true;
    }

    bool operator==(const FormalProduct&) const = default;

    /// Lexicographic order on exponent vectors (v_{x_0}, v_{x_1}, ...).
    std::strong_ordering operator<=>(const FormalProduct& o) const {
        std::size_t i = 0, j = 0;
        while (i < factors_.size() || j < o.factors_.size()) {
            if (j == o.factors_.size() || (i < factors_.size() && factors_[i].first < o.factors_[j].first))
                return std::strong_ordering::greater;  // we have a positive exponent where o has 0
            if (i == factors_.size() || o.factors_[j].first < factors_[i].first)
                return std::strong_ordering::less;
            if (auto c = factors_[i].second <=> o.factors_[j].second; c != 0) return c;
            ++i;
            ++j;
        }
        return std::strong_ordering::equal;
    }

private:
    std::vector<Factor> factors_;
};

inline int valuation(const FormalProduct& z, PrimeId x) { return z.valuation(x); }

/// The squarefree product of the primes dividing z.
inline FormalProduct support(const FormalProduct& z) {
    FormalProduct out;
    for (const auto& f : z.factors()) out.set(f.first, 1);
    return out;
}

/// The unique stalk of z with support y.
inline FormalProduct stalk(const FormalProduct& z, const FormalProduct& y) {
    if (!y.is_squarefree()) throw std::invalid_argument("stalk: y must be squarefree");
    if (!y.divides(support(z))) throw std::invalid_argument("stalk: y does not divide the support of z");
    FormalProduct out;
    for (const auto& f : y.factors()) out.set(f.first, z.valuation(f.first));
    return out;
}

/// All squarefree divisors of a squarefree y, ordered canonically.
inline std::vector<FormalProduct> squarefree_divisors(const FormalProduct& y) {
    const auto ps = y.primes();
    std::vector<FormalProduct> out;
    const std::size_t n = ps.size();
    out.reserve(std::size_t{1} << n);
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        FormalProduct d;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1U) d.set(ps[i], 1);
        out.push_back(std::move(d));
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Every stalk z' |_s z, one per squarefree divisor of the support.
inline std::vector<FormalProduct> stalks(const FormalProduct& z) {
    std::vector<FormalProduct> out;
    for (const auto& y : squarefree_divisors(support(z))) out.push_back(stalk(z, y));
    std::sort(out.begin(), out.end());
    return out;
}

/// Koszul sign: 0 if x does not divide y, otherwise (-1)^{#{x' | y : x' < x}}.
inline int omega(PrimeId x, const FormalProduct& y) {
    if (!y.is_squarefree()) throw std::invalid_argument("omega: y must be squarefree");
    if (!y.divisible_by(x)) return 0;
    int smaller = 0;
    for (const auto& f : y.factors())
        if (f.first < x) ++smaller;
    return smaller % 2 == 0 ? 1 : -1;
}

/// sum_{x' < x} v_{x'}(w): the exponent of the tensor-resolution sign.
inline int exponent_below(PrimeId x, const FormalProduct& w) {
    int s = 0;
    for (const auto& [p, e] : w.factors())
        if (p < x) s += e;
    return s;
}

inline int sign_of(int exponent) { return exponent % 2 == 0 ? 1 : -1; }

/// All w with support dividing the squarefree s and deg w == degree.
inline std::vector<FormalProduct> products_of_degree(const FormalProduct& s, int degree) {
    std::vector<FormalProduct> out;
    const auto ps = s.primes();
    if (degree < 0) return out;
    std::vector<int> exps(ps.size(), 0);
    // enumerate compositions of `degree` into ps.size() non-negative parts
    auto rec = [&](auto&& self, std::size_t i, int left) -> void {
        if (i + 1 >= ps.size()) {
            if (ps.empty()) {
                if (left == 0) out.emplace_back();
                return;
            }
            exps[i] = left;
            FormalProduct w;
            for (std::size_t k = 0; k < ps.size(); ++k) w.set(ps[k], exps[k]);
            out.push_back(std::move(w));
            return;
        }
        for (int e = 0; e <= left; ++e) {
            exps[i] = e;
            self(self, i + 1, left - e);
        }
    };
    rec(rec, 0, degree);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace unorm
