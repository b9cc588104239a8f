#pragma once

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace systolic {

/// Dense row-major matrix of doubles. Never empty.
class Matrix {
public:
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(checked_size(rows, cols), fill) {}

    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != checked_size(rows, cols)) {
            throw std::invalid_argument("Matrix: data length " + std::to_string(data_.size()) +
                                        " != rows*cols " + std::to_string(rows * cols));
        }
    }

    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
        if (rows.size() == 0 || rows.begin()->size() == 0) {
            throw std::invalid_argument("Matrix: empty matrix");
        }
        const std::size_t cols = rows.begin()->size();
        std::vector<double> data;
        data.reserve(rows.size() * cols);
        for (const auto& row : rows) {
            if (row.size() != cols) throw std::invalid_argument("Matrix: ragged rows");
            data.insert(data.end(), row.begin(), row.end());
        }
        return Matrix(rows.size(), cols, std::move(data));
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    const std::vector<double>& data() const noexcept { return data_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    static std::size_t checked_size(std::size_t rows, std::size_t cols) {
        if (rows == 0 || cols == 0) throw std::invalid_argument("Matrix: empty matrix");
        if (cols > static_cast<std::size_t>(-1) / rows) throw std::overflow_error("Matrix: too large");
        return rows * cols;
    }

    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

inline void require_conformable(const Matrix& w, const Matrix& i) {
    if (w.cols() != i.rows()) {
        throw std::invalid_argument("dimension mismatch: W is " + std::to_string(w.rows()) + "x" +
                                    std::to_string(w.cols()) + " but I is " + std::to_string(i.rows()) +
                                    "x" + std::to_string(i.cols()));
    }
}

/// Triple-loop O = W * I. This is the correctness oracle for the simulator.
inline Matrix reference_matmul(const Matrix& w, const Matrix& i) {
    require_conformable(w, i);
    Matrix out(w.rows(), i.cols());
    for (std::size_t r = 0; r < w.rows(); ++r) {
        for (std::size_t c = 0; c < i.cols(); ++c) {
            double acc = 0.0;
            for (std::size_t k = 0; k < w.cols(); ++k) acc += w(r, k) * i(k, c);
            out(r, c) = acc;
        }
    }
    return out;
}

}  // namespace systolic
