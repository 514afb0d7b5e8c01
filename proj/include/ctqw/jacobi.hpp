#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "error.hpp"
#include "matrix.hpp"

namespace ctqw {

struct JacobiOptions {
    /// Converged once the off-diagonal Frobenius norm drops below
    /// relative_tolerance * ||m||_F.
    double relative_tolerance = 1e-13;
    int max_sweeps = 100;
};

/// Raw eigen-decomposition: eigenvalues ascending, eigenvectors as columns
/// (vectors[k] pairs with values[k]).
struct EigenDecomposition {
    RVector values;
    std::vector<RVector> vectors;
    int sweeps = 0;
};

namespace detail {

inline double off_diagonal_norm(const Matrix &a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (i != j) {
                s += a(i, j) * a(i, j);
            }
        }
    }
    return std::sqrt(s);
}

} // namespace detail

/// Cyclic Jacobi eigensolver for a dense real symmetric matrix.
inline EigenDecomposition jacobi_eigen(const SymMatrix &m, const JacobiOptions &opt = {}) {
    detail::require(m.is_symmetric(), "jacobi_eigen requires a symmetric matrix");
    const std::size_t n = m.size();
    Matrix a = m;
    Matrix v = Matrix::identity(n);
    const double target = opt.relative_tolerance * m.frobenius_norm();

    int sweep = 0;
    double off = detail::off_diagonal_norm(a);
    while (off > target) {
        if (sweep == opt.max_sweeps) {
            throw NumericFailure("jacobi_eigen: no convergence after " +
                                 std::to_string(opt.max_sweeps) +
                                 " sweeps, off-diagonal residual " + std::to_string(off));
        }
        ++sweep;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) {
                    continue;
                }
                // Rotation angle zeroing a(p,q); t = tan(theta), smaller root.
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                a(p, p) -= t * apq;
                a(q, q) += t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r != p && r != q) {
                        const double arp = a(r, p);
                        const double arq = a(r, q);
                        a(r, p) = arp - s * (arq + tau * arp);
                        a(p, r) = a(r, p);
                        a(r, q) = arq + s * (arp - tau * arq);
                        a(q, r) = a(r, q);
                    }
                    const double vrp = v(r, p);
                    const double vrq = v(r, q);
                    v(r, p) = vrp - s * (vrq + tau * vrp);
                    v(r, q) = vrq + s * (vrp - tau * vrq);
                }
            }
        }
        off = detail::off_diagonal_norm(a);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

    EigenDecomposition out;
    out.sweeps = sweep;
    for (std::size_t k : order) {
        out.values.push_back(a(k, k));
        RVector col(n);
        for (std::size_t r = 0; r < n; ++r) {
            col[r] = v(r, k);
        }
        out.vectors.push_back(std::move(col));
    }
    return out;
}

} // namespace ctqw
