#pragma once

#include "unorm/integer.hpp"

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace unorm {

/// Sparse entries of one column (or row), sorted by index, no stored zeros.
template <class R>
using SparseVector = std::vector<std::pair<int, R>>;

/// v += s * w for sorted sparse vectors.
template <class R>
void axpy(SparseVector<R>& v, const R& s, const SparseVector<R>& w) {
    if (s == 0 || w.empty()) return;
    SparseVector<R> out;
    out.reserve(v.size() + w.size());
    std::size_t i = 0, j = 0;
    while (i < v.size() || j < w.size()) {
        if (j == w.size() || (i < v.size() && v[i].first < w[j].first)) {
            out.push_back(std::move(v[i++]));
        } else if (i == v.size() || w[j].first < v[i].first) {
            out.emplace_back(w[j].first, s * w[j].second);
            ++j;
        } else {
            R c = v[i].second + s * w[j].second;
            if (c != 0) out.emplace_back(v[i].first, std::move(c));
            ++i;
            ++j;
        }
    }
    v = std::move(out);
}

/// Column-major sparse matrix with exact entries.
template <class R = Int>
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(cols) {}

    static SparseMatrix identity(std::size_t n) {
        SparseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.data_[i].emplace_back(static_cast<int>(i), R(1));
        return m;
    }

    static SparseMatrix from_dense(const std::vector<std::vector<R>>& a) {
        const std::size_t r = a.size(), c = r ? a[0].size() : 0;
        SparseMatrix m(r, c);
        for (std::size_t j = 0; j < c; ++j)
            for (std::size_t i = 0; i < r; ++i)
                if (a[i][j] != 0) m.data_[j].emplace_back(static_cast<int>(i), a[i][j]);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    /// Adds v at (r, c).
    void add(std::size_t r, std::size_t c, const R& v) {
        if (r >= rows_ || c >= cols_) throw std::out_of_range("SparseMatrix::add");
        if (v == 0) return;
        auto& col = data_[c];
        auto it = std::lower_bound(col.begin(), col.end(), static_cast<int>(r),
                                   [](const auto& e, int key) { return e.first < key; });
        if (it != col.end() && it->first == static_cast<int>(r)) {
            it->second += v;
            if (it->second == 0) col.erase(it);
        } else {
            col.insert(it, {static_cast<int>(r), v});
        }
    }

    R at(std::size_t r, std::size_t c) const {
        const auto& col = data_.at(c);
        auto it = std::lower_bound(col.begin(), col.end(), static_cast<int>(r),
                                   [](const auto& e, int key) { return e.first < key; });
        return (it != col.end() && it->first == static_cast<int>(r)) ? it->second : R(0);
    }

    const SparseVector<R>& column(std::size_t c) const { return data_.at(c); }
    void set_column(std::size_t c, SparseVector<R> v) { data_.at(c) = std::move(v); }

    std::size_t nonzeros() const {
        std::size_t n = 0;
        for (const auto& c : data_) n += c.size();
        return n;
    }
    bool is_zero() const {
        for (const auto& c : data_)
            if (!c.empty()) return false;
        return true;
    }

    SparseMatrix transpose() const {
        SparseMatrix t(cols_, rows_);
        for (std::size_t j = 0; j < cols_; ++j)
            for (const auto& [i, v] : data_[j]) t.data_[i].emplace_back(static_cast<int>(j), v);
        return t;
    }

    std::vector<std::vector<R>> to_dense() const {
        std::vector<std::vector<R>> a(rows_, std::vector<R>(cols_, R(0)));
        for (std::size_t j = 0; j < cols_; ++j)
            for (const auto& [i, v] : data_[j]) a[i][j] = v;
        return a;
    }

    /// Entries reduced into [0, m).
    SparseMatrix reduced_mod(const Int& m) const {
        SparseMatrix out(rows_, cols_);
        for (std::size_t j = 0; j < cols_; ++j)
            for (const auto& [i, v] : data_[j]) {
                R r = mod_floor(v, m);
                if (r != 0) out.data_[j].emplace_back(i, r);
            }
        return out;
    }

    /// Horizontal concatenation [this | other].
    SparseMatrix hconcat(const SparseMatrix& o) const {
        if (o.rows_ != rows_) throw std::invalid_argument("hconcat: row mismatch");
        SparseMatrix out(rows_, cols_ + o.cols_);
        for (std::size_t j = 0; j < cols_; ++j) out.data_[j] = data_[j];
        for (std::size_t j = 0; j < o.cols_; ++j) out.data_[cols_ + j] = o.data_[j];
        return out;
    }

    friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("SparseMatrix product: dimension mismatch");
        SparseMatrix out(a.rows_, b.cols_);
        for (std::size_t j = 0; j < b.cols_; ++j) {
            SparseVector<R> acc;
            for (const auto& [k, v] : b.data_[j]) axpy(acc, v, a.data_[k]);
            out.data_[j] = std::move(acc);
        }
        return out;
    }
    friend SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("SparseMatrix sum: dimension mismatch");
        SparseMatrix out = a;
        for (std::size_t j = 0; j < a.cols_; ++j) axpy(out.data_[j], R(1), b.data_[j]);
        return out;
    }
    friend SparseMatrix operator-(const SparseMatrix& a) {
        SparseMatrix out = a;
        for (auto& col : out.data_)
            for (auto& e : col) e.second = -e.second;
        return out;
    }
    friend SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b) { return a + (-b); }

    bool operator==(const SparseMatrix&) const = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<SparseVector<R>> data_;
};

template <class R = Int>
using DenseMatrix = std::vector<std::vector<R>>;

}  // namespace unorm
