#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "error.hpp"

namespace ctqw {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;
using RVector = std::vector<double>;

/// Dense square real matrix, row-major. Laplacians and their powers live
/// here; the library never needs anything but square operators.
class Matrix {
  public:
    Matrix() = default;
    explicit Matrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    [[nodiscard]] std::size_t size() const noexcept { return n_; }

    double &operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

    [[nodiscard]] std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * n_, n_};
    }

    [[nodiscard]] bool operator==(const Matrix &) const = default;

    friend Matrix operator*(const Matrix &a, const Matrix &b) {
        detail::require(a.n_ == b.n_, "matrix dimension mismatch");
        Matrix c(a.n_);
        for (std::size_t i = 0; i < a.n_; ++i) {
            for (std::size_t k = 0; k < a.n_; ++k) {
                const double aik = a(i, k);
                if (aik == 0.0) {
                    continue;
                }
                for (std::size_t j = 0; j < a.n_; ++j) {
                    c(i, j) += aik * b(k, j);
                }
            }
        }
        return c;
    }

    friend Matrix operator-(Matrix a, const Matrix &b) {
        detail::require(a.n_ == b.n_, "matrix dimension mismatch");
        for (std::size_t i = 0; i < a.data_.size(); ++i) {
            a.data_[i] -= b.data_[i];
        }
        return a;
    }

    friend Matrix operator*(double s, Matrix a) {
        for (double &x : a.data_) {
            x *= s;
        }
        return a;
    }

    [[nodiscard]] double frobenius_norm() const {
        double s = 0.0;
        for (double x : data_) {
            s += x * x;
        }
        return std::sqrt(s);
    }

    [[nodiscard]] bool is_symmetric() const {
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = i + 1; j < n_; ++j) {
                if ((*this)(i, j) != (*this)(j, i)) {
                    return false;
                }
            }
        }
        return true;
    }

    [[nodiscard]] CVector apply(std::span<const Complex> v) const {
        detail::require(v.size() == n_, "vector length does not match matrix");
        CVector out(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            Complex acc{};
            for (std::size_t j = 0; j < n_; ++j) {
                acc += (*this)(i, j) * v[j];
            }
            out[i] = acc;
        }
        return out;
    }

  private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

/// Symmetric matrices share the representation; symmetry is a
/// construction-time guarantee checked where it matters.
using SymMatrix = Matrix;

inline Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
    Complex acc{};
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += std::conj(a[i]) * b[i];
    }
    return acc;
}

inline double norm2(std::span<const Complex> v) {
    double s = 0.0;
    for (const Complex &z : v) {
        s += std::norm(z);
    }
    return std::sqrt(s);
}

inline CVector to_complex(std::span<const double> v) { return {v.begin(), v.end()}; }

} // namespace ctqw
