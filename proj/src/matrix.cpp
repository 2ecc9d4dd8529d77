#include "tabsim/matrix.hpp"

#include <cmath>
#include <cstdlib>

namespace tabsim {

double Matrix::infinity_norm() const {
    double worst = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) {
        double sum = 0.0;
        for (std::size_t c = 0; c < cols_; ++c) sum += std::abs((*this)(r, c));
        if (sum > worst) worst = sum;
    }
    return worst;
}

double Matrix::max_abs() const {
    double worst = 0.0;
    for (double v : data_) worst = std::max(worst, std::abs(v));
    return worst;
}

Vec Matrix::multiply(const Vec& x) const {
    assert(x.size() == cols_);
    Vec y(rows_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
        double sum = 0.0;
        for (std::size_t c = 0; c < cols_; ++c) sum += (*this)(r, c) * x[c];
        y[r] = sum;
    }
    return y;
}

double max_abs(const Vec& v) {
    double worst = 0.0;
    for (double x : v) worst = std::max(worst, std::abs(x));
    return worst;
}

double max_abs_diff(const Vec& a, const Vec& b) {
    assert(a.size() == b.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

}  // namespace tabsim
