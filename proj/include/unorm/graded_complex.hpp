#pragma once

#include "unorm/homology.hpp"
#include "unorm/linear_combination.hpp"
#include "unorm/sparse_matrix.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace unorm {

/// Position of every symbol of an ordered basis.
template <class Key>
class BasisIndex {
public:
    BasisIndex() = default;
    explicit BasisIndex(const std::vector<Key>& basis) {
        for (std::size_t i = 0; i < basis.size(); ++i) pos_.emplace(basis[i], i);
    }
    std::optional<std::size_t> find(const Key& k) const {
        auto it = pos_.find(k);
        if (it == pos_.end()) return std::nullopt;
        return it->second;
    }
    std::size_t at(const Key& k) const {
        auto it = pos_.find(k);
        if (it == pos_.end()) throw std::out_of_range("symbol outside the basis");
        return it->second;
    }
    std::size_t size() const { return pos_.size(); }

private:
    std::map<Key, std::size_t> pos_;
};

/// Matrix of a symbol-level linear map between ordered bases. Image terms
/// rejected by `keep` are dropped; all other terms must lie in the target.
template <class Key, class Key2, class Op, class Keep>
SparseMatrix<Int> matrix_of(const std::vector<Key>& source, const std::vector<Key2>& target, const Op& op,
                            const Keep& keep) {
    const BasisIndex<Key2> index(target);
    SparseMatrix<Int> m(target.size(), source.size());
    for (std::size_t j = 0; j < source.size(); ++j) {
        SparseVector<Int> col;
        for (const auto& [k, c] : op(source[j])) {
            if (!keep(k)) continue;
            auto i = index.find(k);
            if (!i) throw std::logic_error("matrix_of: image symbol outside the target basis");
            col.emplace_back(static_cast<int>(*i), c);
        }
        std::sort(col.begin(), col.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        m.set_column(j, std::move(col));
    }
    return m;
}

template <class Key, class Key2, class Op>
SparseMatrix<Int> matrix_of(const std::vector<Key>& source, const std::vector<Key2>& target, const Op& op) {
    return matrix_of(source, target, op, [](const Key2&) { return true; });
}

/// Cochain complex: ordered basis symbols per degree and differentials
/// d^n : C^n -> C^{n+1} as exact sparse matrices.
template <class Key>
class GradedComplex {
public:
    void set_basis(int n, std::vector<Key> basis) { basis_[n] = std::move(basis); }

    const std::vector<Key>& basis(int n) const {
        static const std::vector<Key> empty;
        auto it = basis_.find(n);
        return it == basis_.end() ? empty : it->second;
    }
    std::size_t dimension(int n) const { return basis(n).size(); }

    std::vector<int> degrees() const {
        std::vector<int> out;
        for (const auto& [n, b] : basis_) out.push_back(n);
        return out;
    }
    int min_degree() const { return basis_.empty() ? 0 : basis_.begin()->first; }
    int max_degree() const { return basis_.empty() ? 0 : basis_.rbegin()->first; }

    void set_differential(int n, SparseMatrix<Int> d) {
        if (d.cols() != dimension(n) || d.rows() != dimension(n + 1))
            throw std::invalid_argument("GradedComplex: differential of degree " + std::to_string(n) + " has wrong shape");
        diff_[n] = std::move(d);
    }
    /// d^n; the zero map when nothing was set.
    SparseMatrix<Int> differential(int n) const {
        auto it = diff_.find(n);
        return it == diff_.end() ? SparseMatrix<Int>(dimension(n + 1), dimension(n)) : it->second;
    }

    /// Throws DifferentialError at the first degree with d^{n+1} d^n != 0.
    void verify(const Ring& ring = {}) const {
        for (const auto& [n, d] : diff_) {
            auto next = diff_.find(n + 1);
            if (next == diff_.end()) continue;
            SparseMatrix<Int> comp = next->second * d;
            if (!ring.is_integers()) comp = comp.reduced_mod(ring.modulus);
            if (!comp.is_zero()) throw DifferentialError("d^2 != 0 starting in degree " + std::to_string(n));
        }
    }

    HomologyGroup homology(int n, const Ring& ring = {}) const {
        return homology_at(differential(n - 1), differential(n), ring);
    }

private:
    std::map<int, std::vector<Key>> basis_;
    std::map<int, SparseMatrix<Int>> diff_;
};

/// Builds a complex from graded bases and a symbol-level differential of
/// degree +1. Degrees missing from `bases` are treated as zero, which is how
/// truncated complexes end.
template <class Key, class Op, class DegreeOf>
GradedComplex<Key> assemble(std::map<int, std::vector<Key>> bases, const Op& op, const DegreeOf& degree_of) {
    GradedComplex<Key> c;
    for (auto& [n, b] : bases) c.set_basis(n, std::move(b));
    for (int n : c.degrees()) {
        if (c.dimension(n + 1) == 0) continue;
        c.set_differential(n, matrix_of(c.basis(n), c.basis(n + 1), op,
                                        [&](const Key& k) {
                                            if (degree_of(k) != n + 1)
                                                throw DifferentialError("assemble: differential does not raise degree by one");
                                            return true;
                                        }));
    }
    return c;
}

}  // namespace unorm
