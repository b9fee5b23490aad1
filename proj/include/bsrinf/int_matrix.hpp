#pragma once

#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bsrinf/errors.hpp"

namespace bsrinf {

using Int = boost::multiprecision::cpp_int;

/// Dense integer matrix with exact arbitrary-precision entries, row-major.
class IntMatrix {
public:
    IntMatrix() : rows_(0), cols_(0) {}

    IntMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols) {}

    IntMatrix(std::initializer_list<std::initializer_list<Int>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        entries_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_)
                throw dimension_mismatch("ragged initializer for IntMatrix");
            for (const auto& x : r) entries_.push_back(x);
        }
    }

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }
    bool is_square() const { return rows_ == cols_; }

    Int& at(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const Int& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    const std::vector<Int>& entries() const { return entries_; }

    std::vector<Int> row(std::size_t i) const {
        return {entries_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                entries_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)};
    }

    std::vector<Int> column(std::size_t j) const {
        std::vector<Int> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = at(i, j);
        return c;
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < cols_; ++j) std::swap(at(a, j), at(b, j));
    }

    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < rows_; ++i) std::swap(at(i, a), at(i, b));
    }

    /// row[dst] += q * row[src]
    void add_row_multiple(std::size_t dst, std::size_t src, const Int& q) {
        for (std::size_t j = 0; j < cols_; ++j) at(dst, j) += q * at(src, j);
    }

    /// col[dst] += q * col[src]
    void add_col_multiple(std::size_t dst, std::size_t src, const Int& q) {
        for (std::size_t i = 0; i < rows_; ++i) at(i, dst) += q * at(i, src);
    }

    void negate_row(std::size_t i) {
        for (std::size_t j = 0; j < cols_; ++j) at(i, j) = -at(i, j);
    }

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
        if (a.cols_ != b.rows_)
            throw dimension_mismatch("matrix product shape mismatch");
        IntMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Int& aik = a.at(i, k);
                if (aik == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    c.at(i, j) += aik * b.at(k, j);
            }
        return c;
    }

    friend IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw dimension_mismatch("matrix sum shape mismatch");
        IntMatrix c(a.rows_, a.cols_);
        for (std::size_t i = 0; i < a.entries_.size(); ++i)
            c.entries_[i] = a.entries_[i] + b.entries_[i];
        return c;
    }

    friend IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw dimension_mismatch("matrix difference shape mismatch");
        IntMatrix c(a.rows_, a.cols_);
        for (std::size_t i = 0; i < a.entries_.size(); ++i)
            c.entries_[i] = a.entries_[i] - b.entries_[i];
        return c;
    }

    std::vector<Int> apply(const std::vector<Int>& v) const {
        if (v.size() != cols_)
            throw dimension_mismatch("matrix-vector shape mismatch");
        std::vector<Int> out(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            Int acc = 0;
            for (std::size_t j = 0; j < cols_; ++j) acc += at(i, j) * v[j];
            out[i] = std::move(acc);
        }
        return out;
    }

    friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
    }
    friend bool operator!=(const IntMatrix& a, const IntMatrix& b) { return !(a == b); }

    friend std::ostream& operator<<(std::ostream& os, const IntMatrix& m) {
        os << "[";
        for (std::size_t i = 0; i < m.rows_; ++i) {
            os << (i ? "; " : "");
            for (std::size_t j = 0; j < m.cols_; ++j)
                os << (j ? " " : "") << m.at(i, j);
        }
        return os << "]";
    }

    std::string str() const {
        std::ostringstream os;
        os << *this;
        return os.str();
    }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Int> entries_;
};

/// Exact determinant via fraction-free (Bareiss) elimination.
inline Int determinant(const IntMatrix& m) {
    if (!m.is_square()) throw not_square("determinant of non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    IntMatrix a = m;
    Int sign = 1;
    Int prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a.at(k, k) == 0) {
            std::size_t sw = k;
            while (sw < n && a.at(sw, k) == 0) ++sw;
            if (sw == n) return 0;
            a.swap_rows(k, sw);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                a.at(i, j) = (a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j)) / prev;
        prev = a.at(k, k);
    }
    return sign * a.at(n - 1, n - 1);
}

} // namespace bsrinf
