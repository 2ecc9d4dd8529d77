#ifndef TABSIM_MATRIX_HPP
#define TABSIM_MATRIX_HPP

#include <cassert>
#include <cstddef>
#include <vector>

namespace tabsim {

using Vec = std::vector<double>;

/// Dense row-major matrix of doubles. Desk-scale circuits keep these small
/// (a few hundred rows), so no sparsity anywhere.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) {
        assert(r < rows_ && c < cols_);
        return data_[r * cols_ + c];
    }
    double operator()(std::size_t r, std::size_t c) const {
        assert(r < rows_ && c < cols_);
        return data_[r * cols_ + c];
    }

    const std::vector<double>& data() const { return data_; }

    bool operator==(const Matrix& other) const = default;

    /// max_i sum_j |a_ij|
    double infinity_norm() const;
    /// largest |a_ij|
    double max_abs() const;

    Vec multiply(const Vec& x) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

double max_abs(const Vec& v);
double max_abs_diff(const Vec& a, const Vec& b);

}  // namespace tabsim

#endif
