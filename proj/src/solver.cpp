#include "tabsim/solver.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace tabsim {

LuFactorization factor(const Matrix& a, SingularContext context) {
    if (a.rows() != a.cols())
        throw DimensionMismatch("factor: matrix must be square");

    const std::size_t n = a.rows();
    LuFactorization f;
    f.original_ = a;
    f.lu_ = a;
    f.perm_.resize(n);
    std::iota(f.perm_.begin(), f.perm_.end(), std::size_t{0});

    const double threshold = LuFactorization::kRelativePivotThreshold * a.max_abs();
    Matrix& lu = f.lu_;
    double smallest = 0.0;

    for (std::size_t k = 0; k < n; ++k) {
        // Partial pivoting: first row with the largest magnitude in column k.
        std::size_t best = k;
        double best_mag = std::abs(lu(k, k));
        for (std::size_t r = k + 1; r < n; ++r) {
            double mag = std::abs(lu(r, k));
            if (mag > best_mag) {
                best_mag = mag;
                best = r;
            }
        }
        if (best_mag <= threshold)
            throw SingularSystem(context, static_cast<int>(k));

        if (best != k) {
            for (std::size_t c = 0; c < n; ++c)
                std::swap(lu(k, c), lu(best, c));
            std::swap(f.perm_[k], f.perm_[best]);
        }

        smallest = k == 0 ? best_mag : std::min(smallest, best_mag);

        const double pivot = lu(k, k);
        for (std::size_t r = k + 1; r < n; ++r) {
            const double m = lu(r, k) / pivot;
            lu(r, k) = m;
            if (m == 0.0) continue;
            for (std::size_t c = k + 1; c < n; ++c) lu(r, c) -= m * lu(k, c);
        }
    }

    f.smallest_pivot_ = smallest;
    return f;
}

Vec solve(const LuFactorization& f, const Vec& rhs) {
    const std::size_t n = f.dimension();
    if (rhs.size() != n)
        throw DimensionMismatch("solve: right-hand side has length " +
                                std::to_string(rhs.size()) + ", expected " +
                                std::to_string(n));

    const Matrix& lu = f.packed();
    Vec x(n, 0.0);

    // Forward substitution with the row permutation applied on the fly.
    for (std::size_t r = 0; r < n; ++r) {
        double sum = rhs[f.row_permutation()[r]];
        for (std::size_t c = 0; c < r; ++c) sum -= lu(r, c) * x[c];
        x[r] = sum;
    }
    // Back substitution.
    for (std::size_t ri = n; ri-- > 0;) {
        double sum = x[ri];
        for (std::size_t c = ri + 1; c < n; ++c) sum -= lu(ri, c) * x[c];
        x[ri] = sum / lu(ri, ri);
    }

    // No iterative refinement; a missed residual bound is escalated instead.
    Vec residual = f.original().multiply(x);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        worst = std::max(worst, std::abs(residual[i] - rhs[i]));
    const double bound =
        LuFactorization::kRelativeResidualBound * std::max(1.0, max_abs(rhs));
    if (worst > bound)
        throw VerificationError("solver residual " + std::to_string(worst) +
                                " exceeds bound " + std::to_string(bound));
    return x;
}

}  // namespace tabsim
