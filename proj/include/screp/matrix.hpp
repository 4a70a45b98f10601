#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "screp/errors.hpp"

namespace screp {

// Dense row-major matrix of doubles. Deliberately minimal: the network
// code mostly works on raw rows, this type just keeps shapes honest.
class Matrix2D {
public:
    Matrix2D() : rows_(0), cols_(0) {}
    Matrix2D(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    double* row(std::size_t r) { return data_.data() + r * cols_; }
    const double* row(std::size_t r) const { return data_.data() + r * cols_; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    std::vector<double>& values() { return data_; }
    const std::vector<double>& values() const { return data_; }

    void fill(double v) { data_.assign(data_.size(), v); }

    bool all_finite() const {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    bool operator==(const Matrix2D& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    std::size_t rows_, cols_;
    std::vector<double> data_;
};

// y += W * x, skipping exact-zero entries of x. Adding a term whose factor
// is 0.0 never changes a finite partial sum, so the skip is bit-exact with
// the dense loop while making one-hot inputs cheap.
inline void add_matvec(const Matrix2D& w, const double* x, double* y) {
    const std::size_t rows = w.rows(), cols = w.cols();
    for (std::size_t j = 0; j < cols; ++j) {
        const double xj = x[j];
        if (xj == 0.0) continue;
        const double* col = w.data() + j;
        for (std::size_t i = 0; i < rows; ++i)
            y[i] += col[i * cols] * xj;
    }
}

// y += W^T * d  (W is rows x cols, d has rows entries, y has cols entries).
inline void add_matvec_transposed(const Matrix2D& w, const double* d, double* y) {
    const std::size_t rows = w.rows(), cols = w.cols();
    for (std::size_t i = 0; i < rows; ++i) {
        const double di = d[i];
        if (di == 0.0) continue;
        const double* r = w.row(i);
        for (std::size_t j = 0; j < cols; ++j)
            y[j] += r[j] * di;
    }
}

// W += d * x^T (outer product accumulate), skipping zero entries of x.
inline void add_outer(Matrix2D& w, const double* d, const double* x) {
    const std::size_t rows = w.rows(), cols = w.cols();
    for (std::size_t j = 0; j < cols; ++j) {
        const double xj = x[j];
        if (xj == 0.0) continue;
        double* col = w.data() + j;
        for (std::size_t i = 0; i < rows; ++i)
            col[i * cols] += d[i] * xj;
    }
}

} // namespace screp
