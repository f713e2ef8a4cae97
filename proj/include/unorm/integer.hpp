#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace unorm {

/// Arbitrary-precision integer used for every exact computation.
using Int = boost::multiprecision::cpp_int;
/// Exact rational, only needed by the connecting map between systems.
using Rational = boost::multiprecision::cpp_rational;

inline Int abs_int(const Int& a) { return a < 0 ? Int(-a) : a; }

inline Int gcd_int(Int a, Int b) {
    a = abs_int(a);
    b = abs_int(b);
    while (b != 0) {
        Int r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

inline Int lcm_int(const Int& a, const Int& b) {
    if (a == 0 || b == 0) return 0;
    return abs_int(a / gcd_int(a, b) * b);
}

/// Floor division and non-negative remainder for a positive modulus.
inline Int mod_floor(const Int& a, const Int& m) {
    Int r = a % m;
    if (r < 0) r += m;
    return r;
}

inline long mod_floor(long a, long m) {
    long r = a % m;
    return r < 0 ? r + m : r;
}

/// Extended gcd: returns g = gcd(a, b) >= 0 and s, t with s*a + t*b = g.
inline Int xgcd(const Int& a, const Int& b, Int& s, Int& t) {
    Int old_r = a, r = b, old_s = 1, cur_s = 0, old_t = 0, cur_t = 1;
    while (r != 0) {
        Int q = old_r / r;
        Int tmp = old_r - q * r;
        old_r = std::move(r);
        r = std::move(tmp);
        tmp = old_s - q * cur_s;
        old_s = std::move(cur_s);
        cur_s = std::move(tmp);
        tmp = old_t - q * cur_t;
        old_t = std::move(cur_t);
        cur_t = std::move(tmp);
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    s = old_s;
    t = old_t;
    return old_r;
}

inline bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

/// Prime factorisation of a small positive integer, ascending.
inline std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
    if (n < 1) throw std::invalid_argument("factorize: non-positive argument");
    std::vector<std::pair<std::int64_t, int>> out;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

/// Normalise any list of cyclic orders into invariant factors d1 | d2 | ...,
/// dropping trivial factors. Two finite abelian groups are isomorphic iff
/// their normalised lists coincide.
inline std::vector<Int> invariant_factors(const std::vector<Int>& orders) {
    std::vector<Int> d;
    for (const auto& o : orders) {
        Int a = abs_int(o);
        if (a == 0) throw std::invalid_argument("invariant_factors: zero order");
        if (a != 1) d.push_back(a);
    }
    // (a, b) -> (gcd, lcm) preserves the group; iterate to a divisibility chain.
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = i + 1; j < d.size(); ++j) {
            if (d[j] % d[i] == 0) continue;
            Int g = gcd_int(d[i], d[j]);
            Int l = d[i] / g * d[j];
            d[i] = g;
            d[j] = l;
        }
    std::sort(d.begin(), d.end());
    d.erase(std::remove(d.begin(), d.end(), Int(1)), d.end());
    return d;
}

inline std::string to_string(const Int& a) { return a.str(); }

}  // namespace unorm
