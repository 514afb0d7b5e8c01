#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "graph.hpp"
#include "jacobi.hpp"
#include "matrix.hpp"

namespace ctqw {

/// Relative tolerance under which two eigenvalues are one level.
inline constexpr double kLevelMergeTolerance = 1e-8;

/// Which basis vector of a degenerate top level to use, and (for the cycle)
/// whether degenerate pairs are represented by complex plane waves or by
/// their real cos/sin combinations.
struct EigvecChoice {
    enum class Kind { complex_plus, complex_minus, real_cos, real_sin, indexed };

    Kind kind = Kind::complex_plus;
    /// 1-based position inside the top level; only read for Kind::indexed.
    std::size_t index = 1;

    static EigvecChoice complex_plus() { return {Kind::complex_plus, 1}; }
    static EigvecChoice complex_minus() { return {Kind::complex_minus, 1}; }
    static EigvecChoice real_cos() { return {Kind::real_cos, 1}; }
    static EigvecChoice real_sin() { return {Kind::real_sin, 1}; }
    static EigvecChoice indexed(std::size_t l) { return {Kind::indexed, l}; }

    [[nodiscard]] bool real_basis() const {
        return kind == Kind::real_cos || kind == Kind::real_sin;
    }

    /// 0-based slot of the selected vector in the top level.
    [[nodiscard]] std::size_t top_slot() const {
        switch (kind) {
        case Kind::complex_plus:
        case Kind::real_cos: return 0;
        case Kind::complex_minus:
        case Kind::real_sin: return 1;
        case Kind::indexed: return index == 0 ? static_cast<std::size_t>(-1) : index - 1;
        }
        return 0;
    }

    bool operator==(const EigvecChoice &) const = default;
};

inline std::string to_string(const EigvecChoice &c) {
    switch (c.kind) {
    case EigvecChoice::Kind::complex_plus: return "plus";
    case EigvecChoice::Kind::complex_minus: return "minus";
    case EigvecChoice::Kind::real_cos: return "cos";
    case EigvecChoice::Kind::real_sin: return "sin";
    case EigvecChoice::Kind::indexed: return "index" + std::to_string(c.index);
    }
    return "?";
}

struct Level {
    double value = 0.0;
    std::vector<CVector> vectors;

    [[nodiscard]] std::size_t multiplicity() const noexcept { return vectors.size(); }
};

/// Eigen-decomposition grouped into levels, ascending.
class Spectrum {
  public:
    Spectrum() = default;
    Spectrum(std::size_t dimension, std::vector<Level> levels)
        : dim_(dimension), levels_(std::move(levels)) {
        std::size_t total = 0;
        for (const Level &l : levels_) {
            total += l.multiplicity();
            for (const CVector &v : l.vectors) {
                detail::require(v.size() == dim_, "eigenvector length mismatch");
            }
        }
        detail::require(total == dim_, "multiplicities do not sum to the dimension");
        for (std::size_t i = 1; i < levels_.size(); ++i) {
            detail::require(levels_[i - 1].value < levels_[i].value,
                            "levels must be strictly ascending");
        }
    }

    [[nodiscard]] std::size_t dimension() const noexcept { return dim_; }
    [[nodiscard]] const std::vector<Level> &levels() const noexcept { return levels_; }
    [[nodiscard]] const Level &lowest() const { return levels_.front(); }
    [[nodiscard]] const Level &highest() const { return levels_.back(); }

    /// Every eigenvalue repeated by multiplicity, ascending.
    [[nodiscard]] RVector eigenvalues() const {
        RVector out;
        for (const Level &l : levels_) {
            out.insert(out.end(), l.multiplicity(), l.value);
        }
        return out;
    }

    /// Visits (eigenvalue, eigenvector) in ascending order.
    template <class Fn>
    void for_each_pair(Fn &&fn) const {
        for (const Level &l : levels_) {
            for (const CVector &v : l.vectors) {
                fn(l.value, v);
            }
        }
    }

  private:
    std::size_t dim_ = 0;
    std::vector<Level> levels_;
};

namespace detail {

inline double merge_tolerance(double scale) {
    return kLevelMergeTolerance * std::max(1.0, scale);
}

/// Groups ascending (value, vector) pairs into levels; consecutive values
/// closer than `tol` share a level whose value is their mean.
inline std::vector<Level> group_levels(std::vector<std::pair<double, CVector>> pairs, double tol) {
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const auto &a, const auto &b) { return a.first < b.first; });
    std::vector<Level> levels;
    double sum = 0.0;
    double last = 0.0;
    for (auto &[value, vec] : pairs) {
        if (levels.empty() || value - last >= tol) {
            if (!levels.empty()) {
                levels.back().value = sum / static_cast<double>(levels.back().multiplicity());
            }
            levels.push_back(Level{value, {}});
            sum = 0.0;
        }
        sum += value;
        last = value;
        levels.back().vectors.push_back(std::move(vec));
    }
    if (!levels.empty()) {
        levels.back().value = sum / static_cast<double>(levels.back().multiplicity());
    }
    return levels;
}

inline CVector uniform_vector(std::size_t n) {
    return CVector(n, Complex(1.0 / std::sqrt(static_cast<double>(n)), 0.0));
}

inline CVector unit(std::size_t n, std::size_t k) {
    CVector v(n, Complex{});
    v[k] = 1.0;
    return v;
}

inline double cycle_angle(std::size_t n, std::size_t k, std::size_t order) {
    // Reduce n*k modulo N before scaling: keeps the phase exact for large products.
    return 2.0 * std::numbers::pi * static_cast<double>((n * k) % order) /
           static_cast<double>(order);
}

inline std::vector<Level> cycle_levels(std::size_t order, const EigvecChoice &choice) {
    const double sqrt_n = std::sqrt(static_cast<double>(order));
    const auto plane_wave = [&](std::size_t n) {
        CVector v(order);
        for (std::size_t k = 0; k < order; ++k) {
            v[k] = std::polar(1.0 / sqrt_n, -cycle_angle(n, k, order));
        }
        return v;
    };
    std::vector<Level> levels;
    for (std::size_t n = 0; 2 * n <= order; ++n) {
        const double value =
            2.0 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(n) /
                                  static_cast<double>(order)));
        Level level{n == 0 ? 0.0 : value, {}};
        if (n == 0) {
            level.vectors.push_back(uniform_vector(order));
        } else if (2 * n == order) {
            CVector v(order);
            for (std::size_t k = 0; k < order; ++k) {
                v[k] = (k % 2 == 0 ? 1.0 : -1.0) / sqrt_n;
            }
            level.value = 4.0;
            level.vectors.push_back(std::move(v));
        } else if (choice.real_basis()) {
            // Built from the partner index N-n so that on the odd-N top level
            // the pair is (-1)^k cos(pi k/N), (-1)^k sin(pi k/N).
            const std::size_t m = order - n;
            CVector c(order), s(order);
            const double amp = std::sqrt(2.0 / static_cast<double>(order));
            for (std::size_t k = 0; k < order; ++k) {
                const double a = cycle_angle(m, k, order);
                c[k] = amp * std::cos(a);
                s[k] = amp * std::sin(a);
            }
            level.vectors.push_back(std::move(c));
            level.vectors.push_back(std::move(s));
        } else {
            // e_n then e_{N-n}; on the odd-N top level these carry the
            // e^{+i pi k/N} and e^{-i pi k/N} phases respectively.
            level.vectors.push_back(plane_wave(n));
            level.vectors.push_back(plane_wave(order - n));
        }
        levels.push_back(std::move(level));
    }
    return levels;
}

/// (1/sqrt(l(l+1))) (sum_{k=first}^{first+l-1} |k> - l |first+l>)
inline CVector helmert_vector(std::size_t order, std::size_t first, std::size_t l) {
    CVector v(order, Complex{});
    const double norm = 1.0 / std::sqrt(static_cast<double>(l * (l + 1)));
    for (std::size_t k = first; k < first + l; ++k) {
        v[k] = norm;
    }
    v[first + l] = -static_cast<double>(l) * norm;
    return v;
}

} // namespace detail

/// Tabulated spectra of the cycle, complete and star Laplacians.
inline Spectrum spectrum_closed_form(const GraphFamily &family, const EigvecChoice &choice = {}) {
    const std::size_t n = family.order;
    detail::require(n >= family.minimum_order(), "invalid order for closed-form spectrum");
    std::vector<Level> levels;
    switch (family.kind) {
    case FamilyKind::cycle:
        levels = detail::cycle_levels(n, choice);
        break;
    case FamilyKind::complete: {
        levels.push_back(Level{0.0, {detail::uniform_vector(n)}});
        if (n > 1) {
            Level top{static_cast<double>(n), {}};
            for (std::size_t l = 1; l < n; ++l) {
                top.vectors.push_back(detail::helmert_vector(n, 0, l));
            }
            levels.push_back(std::move(top));
        }
        break;
    }
    case FamilyKind::star: {
        levels.push_back(Level{0.0, {detail::uniform_vector(n)}});
        if (n > 2) {
            Level mid{1.0, {}};
            for (std::size_t l = 1; l + 1 < n; ++l) {
                mid.vectors.push_back(detail::helmert_vector(n, 1, l));
            }
            levels.push_back(std::move(mid));
        }
        CVector hub(n, Complex(-1.0, 0.0));
        hub[0] = static_cast<double>(n - 1);
        const double norm = 1.0 / std::sqrt(static_cast<double>(n * (n - 1)));
        for (Complex &z : hub) {
            z *= norm;
        }
        levels.push_back(Level{static_cast<double>(n), {std::move(hub)}});
        break;
    }
    default:
        throw UnsupportedScenario("no closed-form spectrum for " +
                                  std::string(to_string(family.kind)) + " graphs");
    }
    return Spectrum(n, std::move(levels));
}

/// Full numeric eigen-decomposition (cyclic Jacobi) grouped into levels.
inline Spectrum spectrum_numeric(const SymMatrix &m, const JacobiOptions &opt = {}) {
    EigenDecomposition eig = jacobi_eigen(m, opt);
    double scale = 0.0;
    for (double v : eig.values) {
        scale = std::max(scale, std::abs(v));
    }
    std::vector<std::pair<double, CVector>> pairs;
    for (std::size_t k = 0; k < eig.values.size(); ++k) {
        pairs.emplace_back(eig.values[k], to_complex(eig.vectors[k]));
    }
    return Spectrum(m.size(), detail::group_levels(std::move(pairs), detail::merge_tolerance(scale)));
}

/// Spectrum of the complementary graph's Laplacian from that of L: the
/// uniform vector keeps eigenvalue 0 and every other eigenvector maps mu to
/// N - mu.
inline Spectrum complement_spectrum(const Spectrum &s) {
    const std::size_t n = s.dimension();
    const double big_n = static_cast<double>(n);
    const double tol = detail::merge_tolerance(big_n);
    detail::require(!s.levels().empty() && std::abs(s.lowest().value) <= tol,
                    "complement_spectrum: spectrum has no zero eigenvalue");

    // Rotate the zero level so the uniform vector is its first member.
    const CVector u = detail::uniform_vector(n);
    std::vector<CVector> rest;
    for (CVector v : s.lowest().vectors) {
        const Complex overlap = inner(u, v);
        for (std::size_t k = 0; k < n; ++k) {
            v[k] -= overlap * u[k];
        }
        rest.push_back(std::move(v));
    }
    std::stable_sort(rest.begin(), rest.end(),
                     [](const CVector &a, const CVector &b) { return norm2(a) > norm2(b); });
    std::vector<CVector> orthonormal;
    for (CVector &v : rest) {
        for (const CVector &w : orthonormal) {
            const Complex overlap = inner(w, v);
            for (std::size_t k = 0; k < n; ++k) {
                v[k] -= overlap * w[k];
            }
        }
        const double nv = norm2(v);
        if (orthonormal.size() + 1 < s.lowest().multiplicity() && nv > 1e-6) {
            for (Complex &z : v) {
                z /= nv;
            }
            orthonormal.push_back(std::move(v));
        }
    }
    detail::require(orthonormal.size() + 1 == s.lowest().multiplicity(),
                    "complement_spectrum: zero level does not contain the uniform vector");

    std::vector<std::pair<double, CVector>> pairs;
    pairs.emplace_back(0.0, u);
    for (CVector &v : orthonormal) {
        pairs.emplace_back(big_n, std::move(v));
    }
    for (std::size_t i = 1; i < s.levels().size(); ++i) {
        const Level &level = s.levels()[i];
        for (const CVector &v : level.vectors) {
            pairs.emplace_back(big_n - level.value, v);
        }
    }
    std::vector<Level> levels = detail::group_levels(std::move(pairs), tol);
    if (std::abs(levels.front().value) <= tol) {
        levels.front().value = 0.0;
    }
    return Spectrum(n, std::move(levels));
}

struct MaxQfiVerdict {
    bool is_max = false;
    /// Largest Laplacian eigenvalue from the numeric solver.
    double mu_max = 0.0;
};

/// A graph reaches the largest possible Laplacian eigenvalue N (and hence
/// the largest QFI N^4 t^2) iff its complement is disconnected. The
/// combinatorial verdict is cross-checked against the numeric spectrum.
inline MaxQfiVerdict max_qfi_graph_predicate(const Graph &g) {
    const bool disconnected = connected_component_count(complement(g)) >= 2;
    const double mu = spectrum_numeric(laplacian(g)).highest().value;
    const bool at_bound = std::abs(mu - static_cast<double>(g.order())) <= 1e-8;
    if (disconnected != at_bound) {
        throw NumericFailure("max_qfi_graph_predicate: complement connectivity and top "
                             "eigenvalue disagree (mu_max = " +
                             std::to_string(mu) + ")");
    }
    return {disconnected, mu};
}

} // namespace ctqw
