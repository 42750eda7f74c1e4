#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "error.hpp"
#include "rational.hpp"

namespace algchar {

template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T(0)) : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

    static Matrix identity(std::size_t n)
    {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = T(1);
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
    const std::vector<T>& data() const { return a_; }

    friend Matrix operator*(const Matrix& x, const Matrix& y)
    {
        if (x.cols_ != y.rows_) {
            throw InternalError("matrix shape mismatch");
        }
        Matrix r(x.rows_, y.cols_);
        for (std::size_t i = 0; i < x.rows_; ++i) {
            for (std::size_t k = 0; k < x.cols_; ++k) {
                if (x(i, k) == T(0)) {
                    continue;
                }
                for (std::size_t j = 0; j < y.cols_; ++j) {
                    r(i, j) += x(i, k) * y(k, j);
                }
            }
        }
        return r;
    }

    friend bool operator==(const Matrix& x, const Matrix& y)
    {
        return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
    }
    friend bool operator<(const Matrix& x, const Matrix& y) { return x.a_ < y.a_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> a_;
};

using RationalMatrix = Matrix<Rational>;

// Reduced row echelon form in place; returns the pivot columns.
inline std::vector<std::size_t> row_reduce(RationalMatrix& m)
{
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t p = row;
        while (p < m.rows() && m(p, col) == 0) {
            ++p;
        }
        if (p == m.rows()) {
            continue;
        }
        if (p != row) {
            for (std::size_t j = 0; j < m.cols(); ++j) {
                std::swap(m(p, j), m(row, j));
            }
        }
        Rational inv = 1 / m(row, col);
        for (std::size_t j = col; j < m.cols(); ++j) {
            m(row, j) *= inv;
        }
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || m(i, col) == 0) {
                continue;
            }
            Rational f = m(i, col);
            for (std::size_t j = col; j < m.cols(); ++j) {
                m(i, j) -= f * m(row, j);
            }
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

inline std::size_t rank(RationalMatrix m) { return row_reduce(m).size(); }

// Solves A x = b. Free variables are set to zero; nullopt if inconsistent.
inline std::optional<std::vector<Rational>> solve(const RationalMatrix& a, const std::vector<Rational>& b)
{
    if (b.size() != a.rows()) {
        throw InternalError("solve: right-hand side has wrong length");
    }
    RationalMatrix aug(a.rows(), a.cols() + 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            aug(i, j) = a(i, j);
        }
        aug(i, a.cols()) = b[i];
    }
    auto pivots = row_reduce(aug);
    if (!pivots.empty() && pivots.back() == a.cols()) {
        return std::nullopt;
    }
    std::vector<Rational> x(a.cols());
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        x[pivots[r]] = aug(r, a.cols());
    }
    return x;
}

} // namespace algchar
