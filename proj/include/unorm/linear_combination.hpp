#pragma once

#include <functional>
#include <map>
#include <utility>

namespace unorm {

/// Finite formal sum of basis symbols with exact coefficients. Zero
/// coefficients are never stored, so `empty()` means the zero vector.
template <class Key, class R>
class LinearCombination {
public:
    using map_type = std::map<Key, R>;
    using const_iterator = typename map_type::const_iterator;

    LinearCombination() = default;
    explicit LinearCombination(const Key& k, R c = R(1)) { add(k, std::move(c)); }

    void add(const Key& k, const R& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(k, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    void add(const LinearCombination& other, const R& scale = R(1)) {
        if (scale == 0) return;
        for (const auto& [k, c] : other.terms_) add(k, c * scale);
    }

    LinearCombination& operator+=(const LinearCombination& o) {
        add(o);
        return *this;
    }
    LinearCombination& operator-=(const LinearCombination& o) {
        add(o, R(-1));
        return *this;
    }
    LinearCombination& operator*=(const R& s) {
        if (s == 0) {
            terms_.clear();
        } else {
            for (auto& [k, c] : terms_) c *= s;
        }
        return *this;
    }
    friend LinearCombination operator+(LinearCombination a, const LinearCombination& b) { return a += b; }
    friend LinearCombination operator-(LinearCombination a, const LinearCombination& b) { return a -= b; }
    friend LinearCombination operator*(const R& s, LinearCombination a) { return a *= s; }

    R coefficient(const Key& k) const {
        auto it = terms_.find(k);
        return it == terms_.end() ? R(0) : it->second;
    }

    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    const_iterator begin() const { return terms_.begin(); }
    const_iterator end() const { return terms_.end(); }
    const map_type& terms() const { return terms_; }

    /// Linear extension of a map on basis symbols.
    template <class Key2, class F>
    LinearCombination<Key2, R> map_linear(F&& f) const {
        LinearCombination<Key2, R> out;
        for (const auto& [k, c] : terms_) out.add(f(k), c);
        return out;
    }

    /// Keep only terms satisfying the predicate.
    template <class P>
    LinearCombination filtered(P&& keep) const {
        LinearCombination out;
        for (const auto& [k, c] : terms_)
            if (keep(k)) out.terms_.emplace(k, c);
        return out;
    }

    template <class R2>
    LinearCombination<Key, R2> cast() const {
        LinearCombination<Key, R2> out;
        for (const auto& [k, c] : terms_) out.add(k, R2(c));
        return out;
    }

    bool operator==(const LinearCombination& o) const { return terms_ == o.terms_; }

private:
    map_type terms_;
};

/// Apply a symbol-level linear operator to a whole combination.
template <class Key, class R, class Op>
LinearCombination<Key, R> apply(const Op& op, const LinearCombination<Key, R>& v) {
    LinearCombination<Key, R> out;
    for (const auto& [k, c] : v) out.add(op(k), c);
    return out;
}

}  // namespace unorm
