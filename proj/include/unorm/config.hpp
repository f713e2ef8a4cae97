#pragma once

#include "unorm/formal_product.hpp"
#include "unorm/integer.hpp"
#include "unorm/system.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace unorm {

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    for (std::string t; is >> t;) out.push_back(t);
    return out;
}

inline std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s)
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    out.push_back(cur);
    return out;
}

inline bool is_integer_token(const std::string& t) {
    std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
}

inline Int parse_int(const std::string& t, const std::string& where) {
    if (!is_integer_token(t)) throw ConfigError(where + ": expected an integer, got '" + t + "'");
    return Int(t[0] == '+' ? t.substr(1) : t);
}

inline long parse_long(const std::string& t, const std::string& where) {
    const Int v = parse_int(t, where);
    if (abs_int(v) > Int(1000000000L)) throw ConfigError(where + ": integer out of range");
    return static_cast<long>(v);
}

}  // namespace detail

/// Parses the configuration text format:
///
///     [primes]      names in the fixed total order
///     [orders]      name = n_1 n_2 ...       (tower |G_{x^k}|)
///     [frobenius]   name target = exponent   (every ordered pair)
///     [poly]        name = c_0 c_1 ...       (p(x;t) = sum c_i t^i)
///     [modulus]     M = value                (optional)
///
/// '#' starts a comment.
inline NormSystem parse_config(std::istream& in, const std::string& source = "config") {
    std::string section;
    std::vector<std::string> names;
    std::map<std::string, std::vector<long>> orders;
    std::map<std::pair<std::string, std::string>, long> frob;
    std::map<std::string, std::vector<Int>> polys;
    std::optional<Int> modulus;
    const std::set<std::string> known{"primes", "orders", "frobenius", "poly", "modulus"};
    std::set<std::string> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::string where = source + ":" + std::to_string(lineno);
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + ": malformed section header");
            section = detail::trim(line.substr(1, line.size() - 2));
            if (!known.count(section)) throw ConfigError(where + ": unknown section [" + section + "]");
            if (!seen.insert(section).second) throw ConfigError(where + ": duplicate section [" + section + "]");
            continue;
        }
        if (section.empty()) throw ConfigError(where + ": entry outside of any section");
        if (section == "primes") {
            for (auto& n : detail::split_ws(line)) {
                for (const auto& m : names)
                    if (m == n) throw ConfigError(where + ": [primes] duplicate prime '" + n + "'");
                names.push_back(n);
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": [" + section + "] expected 'key = value'");
        const auto key = detail::split_ws(line.substr(0, eq));
        const auto vals = detail::split_ws(line.substr(eq + 1));
        const std::string field = where + ": [" + section + "]";
        if (section == "modulus") {
            if (vals.size() != 1) throw ConfigError(field + " expected a single integer");
            modulus = detail::parse_int(vals[0], field);
            if (*modulus < 1) throw ConfigError(field + " modulus must be positive");
            continue;
        }
        if (section == "frobenius") {
            if (key.size() != 2) throw ConfigError(field + " expected 'prime target = exponent'");
            if (vals.size() != 1) throw ConfigError(field + " " + key[0] + " " + key[1] + ": expected one exponent");
            if (!frob.emplace(std::pair{key[0], key[1]}, detail::parse_long(vals[0], field + " " + key[0] + " " + key[1]))
                     .second)
                throw ConfigError(field + " duplicate entry " + key[0] + " " + key[1]);
            continue;
        }
        if (key.size() != 1) throw ConfigError(field + " expected a single prime name before '='");
        const std::string& name = key[0];
        if (vals.empty()) throw ConfigError(field + " " + name + ": no values");
        if (section == "orders") {
            std::vector<long> t;
            for (const auto& v : vals) t.push_back(detail::parse_long(v, field + " " + name));
            if (!orders.emplace(name, std::move(t)).second) throw ConfigError(field + " duplicate entry " + name);
        } else {
            std::vector<Int> c;
            for (const auto& v : vals) c.push_back(detail::parse_int(v, field + " " + name));
            if (!polys.emplace(name, std::move(c)).second) throw ConfigError(field + " duplicate entry " + name);
        }
    }
    for (const char* s : {"primes", "orders", "frobenius", "poly"})
        if (!seen.count(s)) throw ConfigError(source + ": missing section [" + std::string(s) + "]");
    if (names.empty()) throw ConfigError(source + ": [primes] is empty");

    auto known_name = [&](const std::string& n, const std::string& sec) {
        for (const auto& m : names)
            if (m == n) return;
        throw ConfigError(source + ": [" + sec + "] unknown prime '" + n + "'");
    };
    for (const auto& [n, t] : orders) known_name(n, "orders");
    for (const auto& [n, c] : polys) known_name(n, "poly");
    for (const auto& [k, e] : frob) {
        known_name(k.first, "frobenius");
        known_name(k.second, "frobenius");
        if (k.first == k.second) throw ConfigError(source + ": [frobenius] entry " + k.first + " " + k.second + " pairs a prime with itself");
    }

    NormSystem sys;
    for (const auto& n : names) {
        if (!orders.count(n)) throw ConfigError(source + ": [orders] missing prime '" + n + "'");
        if (!polys.count(n)) throw ConfigError(source + ": [poly] missing prime '" + n + "'");
        sys.add_prime(n, orders[n], polys[n]);
    }
    for (PrimeId x : sys.primes())
        for (PrimeId t : sys.primes()) {
            if (x == t) continue;
            auto it = frob.find({sys.name(x), sys.name(t)});
            if (it == frob.end())
                throw ConfigError(source + ": [frobenius] missing entry '" + sys.name(x) + " " + sys.name(t) + "'");
            sys.set_frobenius(x, t, it->second);
        }
    sys.set_modulus(modulus);
    sys.validate();
    return sys;
}

inline NormSystem load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
    return parse_config(in, path);
}

/// Inverse of parse_config: writes a system in the configuration format.
inline std::string format_config(const NormSystem& sys) {
    std::ostringstream os;
    os << "[primes]\n";
    for (PrimeId x : sys.primes()) os << (x.index ? " " : "") << sys.name(x);
    os << "\n\n[orders]\n";
    for (PrimeId x : sys.primes()) {
        os << sys.name(x) << " =";
        for (long n : sys.tower(x)) os << ' ' << n;
        os << '\n';
    }
    os << "\n[frobenius]\n";
    for (PrimeId x : sys.primes())
        for (PrimeId t : sys.primes())
            if (x != t) os << sys.name(x) << ' ' << sys.name(t) << " = " << sys.frobenius_exponent(x, t) << '\n';
    os << "\n[poly]\n";
    for (PrimeId x : sys.primes()) {
        os << sys.name(x) << " =";
        for (const auto& c : sys.poly(x)) os << ' ' << c;
        os << '\n';
    }
    if (sys.modulus()) os << "\n[modulus]\nM = " << *sys.modulus() << '\n';
    return os.str();
}

/// Parses a target such as "x1^2*x2"; names containing '*' or '^' are
/// written in parentheses, e.g. "(T^2+1)*(T)^2". "1" is the unit.
inline FormalProduct parse_z(const NormSystem& sys, const std::string& text) {
    const std::string s = detail::trim(text);
    if (s.empty()) throw ConfigError("empty target");
    FormalProduct z;
    if (s == "1") return z;
    std::size_t i = 0;
    while (i < s.size()) {
        std::string name;
        if (s[i] == '(') {
            const auto close = s.find(')', i);
            if (close == std::string::npos) throw ConfigError("target '" + s + "': unbalanced parenthesis");
            name = s.substr(i + 1, close - i - 1);
            i = close + 1;
        } else {
            const auto end = s.find_first_of("*^", i);
            name = s.substr(i, end == std::string::npos ? std::string::npos : end - i);
            i = end == std::string::npos ? s.size() : end;
        }
        name = detail::trim(name);
        int e = 1;
        if (i < s.size() && s[i] == '^') {
            const auto end = s.find('*', i);
            const std::string t = detail::trim(s.substr(i + 1, end == std::string::npos ? std::string::npos : end - i - 1));
            e = static_cast<int>(detail::parse_long(t, "target '" + s + "' exponent"));
            if (e < 1) throw ConfigError("target '" + s + "': exponents must be positive");
            i = end == std::string::npos ? s.size() : end;
        }
        auto x = sys.find_prime(name);
        if (!x) throw ConfigError("target '" + s + "': unconfigured prime '" + name + "'");
        z.set(*x, z.valuation(*x) + e);
        if (i < s.size()) {
            if (s[i] != '*') throw ConfigError("target '" + s + "': expected '*'");
            ++i;
        }
    }
    sys.check_configured(z);
    return z;
}

inline std::string format_z(const NormSystem& sys, const FormalProduct& z) {
    if (z.is_unit()) return "1";
    std::string out;
    for (const auto& [x, e] : z.factors()) {
        if (!out.empty()) out += '*';
        const std::string& n = sys.name(x);
        out += n.find_first_of("*^()") == std::string::npos ? n : "(" + n + ")";
        if (e > 1) out += "^" + std::to_string(e);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Presets

namespace detail {

inline long pow_mod(long b, long e, long m) {
    __int128 r = 1 % m, x = mod_floor(b, m);
    for (; e > 0; e >>= 1, x = x * x % m)
        if (e & 1) r = r * x % m;
    return static_cast<long>(r);
}

/// Smallest generator of (Z/m)^x, assumed cyclic of order phi.
inline long primitive_root(long m, long phi) {
    if (phi == 1) return 1 % m == 0 ? 0 : 1;
    std::vector<long> qs;
    for (const auto& [q, e] : factorize(phi)) qs.push_back(static_cast<long>(q));
    for (long g = 2; g < m; ++g) {
        if (std::gcd(g, m) != 1) continue;
        bool ok = true;
        for (long q : qs)
            if (pow_mod(g, phi / q, m) == 1) ok = false;
        if (ok) return g;
    }
    throw ConfigError("no primitive root modulo " + std::to_string(m));
}

inline long discrete_log(long g, long a, long m, long phi) {
    long v = 1 % m;
    a = mod_floor(a, m);
    for (long k = 0; k < phi; ++k, v = static_cast<long>(static_cast<__int128>(v) * g % m))
        if (v == a) return k;
    throw ConfigError("discrete logarithm does not exist");
}

/// Ordinary distribution data of level N: a prime symbol for each p | N
/// with tower |(Z/p^k)^x| and Fr_p acting on G_{q^k} as p = g^f mod q^e.
inline NormSystem cyclotomic_groups(long n, const std::vector<Int>& poly) {
    if (n < 2 || n > 100000000L) throw ConfigError("cyclotomic level must be between 2 and 10^8");
    NormSystem sys;
    struct Level {
        long p, pe, phi, g;
    };
    std::vector<Level> levels;
    for (const auto& [q, e] : factorize(n)) {
        const long p = static_cast<long>(q);
        if (p == 2 && e > 2) throw ConfigError("(Z/2^k)^x is not cyclic for k > 2");
        std::vector<long> tower;
        long pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            tower.push_back(pk / p * (p - 1));
        }
        sys.add_prime(std::to_string(p), tower, poly);
        levels.push_back({p, pk, tower.back(), primitive_root(pk, tower.back())});
    }
    for (PrimeId x : sys.primes())
        for (PrimeId t : sys.primes())
            if (x != t) {
                const auto& lt = levels[t.index];
                sys.set_frobenius(x, t, lt.phi == 1 ? 0 : discrete_log(lt.g, levels[x.index].p, lt.pe, lt.phi));
            }
    sys.validate();
    return sys;
}

/// Polynomials over F_q, coefficients low to high, no trailing zeros.
using FqPoly = std::vector<long>;

inline void fq_trim(FqPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline FqPoly fq_mulmod(const FqPoly& a, const FqPoly& b, const FqPoly& f, long q) {
    FqPoly r(a.size() + b.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % q;
    fq_trim(r);
    // f is monic
    while (r.size() >= f.size()) {
        const long c = r.back();
        const std::size_t shift = r.size() - f.size();
        for (std::size_t i = 0; i < f.size(); ++i) r[shift + i] = mod_floor(r[shift + i] - c * f[i], q);
        fq_trim(r);
    }
    return r;
}

/// Parses "T^2+2T+1" (integer coefficients reduced mod q); result is monic.
inline FqPoly parse_fq_poly(const std::string& text, long q) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw ConfigError("empty polynomial");
    FqPoly out;
    std::size_t i = 0;
    while (i < s.size()) {
        long sign = 1;
        if (s[i] == '+' || s[i] == '-') sign = s[i++] == '-' ? -1 : 1;
        std::size_t j = i;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        long coeff = j > i ? std::stol(s.substr(i, j - i)) : 1;
        std::size_t deg = 0;
        if (j < s.size() && s[j] == 'T') {
            deg = 1;
            ++j;
            if (j < s.size() && s[j] == '^') {
                std::size_t k = ++j;
                while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
                if (j == k) throw ConfigError("polynomial '" + text + "': missing exponent");
                deg = std::stoul(s.substr(k, j - k));
            }
        } else if (j == i) {
            throw ConfigError("polynomial '" + text + "': unexpected character");
        }
        if (out.size() <= deg) out.resize(deg + 1, 0);
        out[deg] = mod_floor(out[deg] + sign * coeff, q);
        i = j;
    }
    fq_trim(out);
    if (out.size() < 2) throw ConfigError("polynomial '" + text + "' must have positive degree");
    if (out.back() != 1) throw ConfigError("polynomial '" + text + "' must be monic");
    return out;
}

inline bool fq_irreducible(const FqPoly& f, long q) {
    const std::size_t d = f.size() - 1;
    // trial division by every monic polynomial of degree 1 .. d/2
    for (std::size_t k = 1; 2 * k <= d; ++k) {
        FqPoly g(k + 1, 0);
        g[k] = 1;
        long count = 1;
        for (std::size_t i = 0; i < k; ++i) count *= q;
        for (long idx = 0; idx < count; ++idx) {
            long v = idx;
            for (std::size_t i = 0; i < k; ++i, v /= q) g[i] = v % q;
            // f mod g == 0 ?
            FqPoly r = f;
            while (r.size() >= g.size()) {
                const long c = r.back();
                const std::size_t shift = r.size() - g.size();
                for (std::size_t i = 0; i < g.size(); ++i) r[shift + i] = mod_floor(r[shift + i] - c * g[i], q);
                fq_trim(r);
            }
            if (r.empty()) return false;
        }
    }
    return true;
}

}  // namespace detail

/// Catalog entry for `presets`.
struct PresetInfo {
    std::string pattern;
    std::string description;
};

inline std::vector<PresetInfo> preset_catalog() {
    return {
        {"cyclotomic:N", "universal ordinary distribution of level N: primes p | N, towers |(Z/p^k)^x|, p(x;t) = 1 - t"},
        {"predistribution:N", "same groups as cyclotomic:N with p(x;t) = -t"},
        {"trivial:AxBx...", "one prime per factor with cyclic group orders A, B, ...; p(x;t) = 1, trivial Frobenius"},
        {"carlitz:q:P1,P2,...", "ordinary distribution over F_q[T] (q prime) for distinct monic irreducible P_i: "
                                "G_P = (F_q[T]/P)^x, Fr_P acting by multiplication by P, p(x;t) = 1 - t"},
    };
}

/// Builds a preset system; throws ConfigError for unknown names or bad parameters.
inline NormSystem preset(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw ConfigError("unknown preset '" + spec + "'");
    const std::string kind = spec.substr(0, colon), arg = spec.substr(colon + 1);
    if (kind == "cyclotomic" || kind == "predistribution") {
        const long n = detail::parse_long(arg, "preset '" + spec + "'");
        return detail::cyclotomic_groups(n, kind == "cyclotomic" ? std::vector<Int>{1, -1} : std::vector<Int>{0, -1});
    }
    if (kind == "trivial") {
        NormSystem sys;
        int i = 0;
        for (const auto& part : detail::split_on(arg, 'x')) {
            const long n = detail::parse_long(detail::trim(part), "preset '" + spec + "'");
            if (n < 1) throw ConfigError("preset '" + spec + "': orders must be positive");
            sys.add_prime("x" + std::to_string(++i), {n}, {1});
        }
        sys.validate();
        return sys;
    }
    if (kind == "carlitz") {
        const auto c2 = arg.find(':');
        if (c2 == std::string::npos) throw ConfigError("preset '" + spec + "': expected carlitz:q:P1,P2,...");
        const long q = detail::parse_long(arg.substr(0, c2), "preset '" + spec + "' field size");
        if (q < 2 || !is_prime(q)) throw ConfigError("preset '" + spec + "': q must be prime");
        std::vector<detail::FqPoly> ps;
        std::vector<std::string> names;
        NormSystem sys;
        for (const auto& part : detail::split_on(arg.substr(c2 + 1), ',')) {
            auto f = detail::parse_fq_poly(part, q);
            if (!detail::fq_irreducible(f, q)) throw ConfigError("preset '" + spec + "': '" + part + "' is reducible");
            for (const auto& g : ps)
                if (g == f) throw ConfigError("preset '" + spec + "': repeated polynomial '" + part + "'");
            long order = 1;
            for (std::size_t i = 1; i < f.size(); ++i) order *= q;
            if (order > 100000) throw ConfigError("preset '" + spec + "': residue field too large");
            sys.add_prime(detail::trim(part), {order - 1}, {1, -1});
            ps.push_back(std::move(f));
        }
        // Fr_P on G_{P'} = multiplication by P mod P'; exponent w.r.t. a generator
        for (PrimeId t : sys.primes()) {
            const auto& f = ps[t.index];
            const long n = sys.order(t, 1);
            auto power = [&](const detail::FqPoly& g, long e) {
                detail::FqPoly r{1}, b = g;
                for (; e > 0; e >>= 1, b = detail::fq_mulmod(b, b, f, q))
                    if (e & 1) r = detail::fq_mulmod(r, b, f, q);
                return r;
            };
            std::vector<long> qs;
            for (const auto& [p, e] : factorize(n)) qs.push_back(static_cast<long>(p));
            std::optional<detail::FqPoly> gen;
            const long total = n + 1;
            for (long idx = 1; idx < total && !gen; ++idx) {
                detail::FqPoly g;
                for (long v = idx; v > 0; v /= q) g.push_back(v % q);
                detail::fq_trim(g);
                bool ok = true;
                for (long p : qs)
                    if (power(g, n / p) == detail::FqPoly{1}) ok = false;
                if (ok) gen = g;
            }
            for (PrimeId x : sys.primes()) {
                if (x == t) continue;
                const detail::FqPoly a = detail::fq_mulmod(ps[x.index], {1}, f, q);
                detail::FqPoly v{1};
                long k = 0;
                while (v != a) {
                    v = detail::fq_mulmod(v, *gen, f, q);
                    if (++k > n) throw ConfigError("preset '" + spec + "': discrete logarithm failed");
                }
                sys.set_frobenius(x, t, k);
            }
        }
        sys.validate();
        return sys;
    }
    throw ConfigError("unknown preset '" + spec + "'");
}

inline bool is_preset_name(const std::string& s) {
    for (const char* k : {"cyclotomic:", "predistribution:", "trivial:", "carlitz:"})
        if (s.rfind(k, 0) == 0) return true;
    return false;
}

/// A preset name or a configuration file path.
inline NormSystem load_system(const std::string& source) {
    return is_preset_name(source) ? preset(source) : load_config(source);
}

}  // namespace unorm
