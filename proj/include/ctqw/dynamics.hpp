#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "graph.hpp"
#include "spectrum.hpp"
#include "walk.hpp"

namespace ctqw {

/// omega_N(lambda) = N (1 + lambda N) / 2; vanishes at lambda* = -1/N.
inline double angular_frequency(double n, double lambda) { return 0.5 * n * (1.0 + lambda * n); }

/// lambda* = -1/N, where the complete-graph Hamiltonian is null.
inline double critical_lambda(std::size_t n) { return -1.0 / static_cast<double>(n); }

/// Minimum of the cycle's short-time position variance.
inline constexpr double kCycleVarianceLambda0 = -0.2;

/// Evaluates the analytic probability P_j(k, t | lambda) of the cycle,
/// complete and star graphs without any eigen-solve. On the star, j = 0 is
/// the hub and every j >= 1 an outer vertex.
inline double closed_form_probability(FamilyKind family, std::size_t n, double lambda, Vertex j,
                                      Vertex k, double t) {
    detail::require(j < n && k < n, "vertex out of range");
    const double big_n = static_cast<double>(n);
    const auto complete_like = [&](bool at_start) {
        const double s = std::sin(angular_frequency(big_n, lambda) * t);
        const double s2 = s * s;
        return at_start ? 1.0 - 4.0 * (big_n - 1.0) / (big_n * big_n) * s2
                        : 4.0 / (big_n * big_n) * s2;
    };

    switch (family) {
    case FamilyKind::cycle: {
        detail::require(n >= 3, "cycle needs N >= 3");
        std::vector<double> energy(n);
        for (std::size_t m = 0; m < n; ++m) {
            const double eps =
                2.0 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(m) / big_n));
            energy[m] = eps + lambda * eps * eps;
        }
        // 1/N + 2/N^2 sum_{n<m} cos[(E_n - E_m) t - 2 pi (n - m)(j - k)/N]
        const long long shift = static_cast<long long>(j) - static_cast<long long>(k);
        double acc = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) {
                const long long phase_index =
                    ((static_cast<long long>(a) - static_cast<long long>(b)) * shift) %
                    static_cast<long long>(n);
                acc += std::cos((energy[a] - energy[b]) * t -
                                2.0 * std::numbers::pi * static_cast<double>(phase_index) / big_n);
            }
        }
        return 1.0 / big_n + 2.0 / (big_n * big_n) * acc;
    }
    case FamilyKind::complete:
        return complete_like(j == k);
    case FamilyKind::star: {
        if (j == 0) {
            return complete_like(k == 0);
        }
        const double w_n = angular_frequency(big_n, lambda);
        const double w_1 = angular_frequency(1.0, lambda);
        const auto sin2 = [](double x) {
            const double s = std::sin(x);
            return s * s;
        };
        const double s_n = sin2(w_n * t);
        const double s_1 = sin2(w_1 * t);
        const double s_d = sin2((w_n - w_1) * t);
        if (k == 0) {
            return 4.0 / (big_n * big_n) * s_n;
        }
        if (k == j) {
            return 1.0 - 4.0 / (big_n * (big_n - 1.0)) *
                             ((big_n - 2.0) * s_1 + (big_n - 2.0) / (big_n - 1.0) * s_d +
                              s_n / big_n);
        }
        return 4.0 / (big_n * (big_n - 1.0)) *
               (s_1 + s_d / (big_n - 1.0) - s_n / big_n);
    }
    default:
        throw UnsupportedScenario("no closed-form probability for " +
                                  std::string(to_string(family)) + " graphs");
    }
}

/// Long-time average of P(k, t): only pairs of eigenvectors with equal
/// perturbed energy E = eps + lambda eps^2 survive the average.
inline ProbDist average_probability(const PerturbedWalk &walk, const WalkerState &psi0) {
    detail::require(psi0.size() == walk.order(), "state/graph size mismatch");
    std::vector<std::pair<double, CVector>> projected;
    double scale = 0.0;
    walk.spectrum().for_each_pair([&](double eps, const CVector &v) {
        const double e = walk.energy(eps);
        scale = std::max(scale, std::abs(e));
        const Complex c = inner(v, psi0.amplitudes());
        CVector component(v.size());
        for (std::size_t k = 0; k < v.size(); ++k) {
            component[k] = c * v[k];
        }
        projected.emplace_back(e, std::move(component));
    });
    // Accidental degeneracies created by lambda are pooled here.
    const auto groups = detail::group_levels(std::move(projected), detail::merge_tolerance(scale));
    RVector p(walk.order(), 0.0);
    for (const Level &g : groups) {
        for (std::size_t k = 0; k < p.size(); ++k) {
            Complex amp{};
            for (const CVector &comp : g.vectors) {
                amp += comp[k];
            }
            p[k] += std::norm(amp);
        }
    }
    return ProbDist(std::move(p));
}

/// Inverse participation ratio sum_k p_k^2, in [1/N, 1].
inline double ipr(const ProbDist &p) {
    double s = 0.0;
    for (double x : p.values()) {
        s += x * x;
    }
    return s;
}

struct IprBound {
    double value = 0.0;
    /// true for the N <= 4 branch (exact uniform mixing is reached).
    bool uniform_mixing = false;
    std::string times;

    /// l-th time at which the minimum is attained for a given lambda, or
    /// nullopt at lambda* where the walker never moves.
    [[nodiscard]] std::optional<double> attaining_time(std::size_t n, double lambda,
                                                       std::size_t l = 0) const {
        const double big_n = static_cast<double>(n);
        const double rate = std::abs(big_n + lambda * big_n * big_n);
        if (rate == 0.0) {
            return std::nullopt;
        }
        const double phase = uniform_mixing ? std::asin(std::sqrt(big_n) / 2.0)
                                            : std::numbers::pi / 2.0;
        return 2.0 * (phase + std::numbers::pi * static_cast<double>(l)) / rate;
    }
};

/// Minimum over time of the complete-graph IPR for a walker started on a
/// vertex. The two branches coincide at N = 4.
inline IprBound complete_ipr_bound(std::size_t n) {
    detail::require(n >= 2, "complete_ipr_bound needs N >= 2");
    const double big_n = static_cast<double>(n);
    if (n <= 4) {
        return {1.0 / big_n, true, "t_l = 2[+-arcsin(sqrt(N)/2) + pi l]/(N + lambda N^2)"};
    }
    return {1.0 - 8.0 / big_n + 24.0 / (big_n * big_n) - 16.0 / (big_n * big_n * big_n), false,
            "t_l = 2 pi (1/2 + l)/(N + lambda N^2)"};
}

/// l1-norm coherence of the pure state |psi><psi| in the vertex basis:
/// sum_{j != k} |psi_j||psi_k| = (sum_j |psi_j|)^2 - 1.
inline double coherence(const WalkerState &psi) {
    double s = 0.0;
    for (const Complex &z : psi.amplitudes()) {
        s += std::abs(z);
    }
    return std::max(0.0, s * s - 1.0);
}

struct CycleVariance {
    double empirical = 0.0;
    /// [40 (lambda + 1/5)^2 + 2/5] t^2
    double short_time_model = 0.0;
    /// Probability mass reached vertices 0 or N-1; the model no longer applies.
    bool wavefront_warning = false;
};

/// Threshold on P(0) + P(N-1) above which the cycle variance is flagged.
inline constexpr double kWavefrontMass = 1e-9;

inline double cycle_variance_model(double lambda, double t) {
    const double d = lambda - kCycleVarianceLambda0;
    return (40.0 * d * d + 0.4) * t * t;
}

/// Position variance on an even cycle, using the vertex index as position.
inline CycleVariance cycle_variance(const PerturbedWalk &walk, double t,
                                    std::optional<Vertex> start = std::nullopt) {
    const std::size_t n = walk.order();
    detail::require(n % 2 == 0, "cycle_variance requires an even number of vertices");
    detail::require(t >= 0.0, "cycle_variance requires t >= 0");
    const Vertex j = start.value_or(n / 2);
    const ProbDist p = probability_distribution(evolve(walk, WalkerState::localized(n, j), t));
    double m1 = 0.0;
    double m2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double x = static_cast<double>(k);
        m1 += x * p[k];
        m2 += x * x * p[k];
    }
    CycleVariance out;
    out.empirical = t == 0.0 ? 0.0 : m2 - m1 * m1;
    out.short_time_model = cycle_variance_model(walk.lambda(), t);
    out.wavefront_warning = p[0] + p[n - 1] > kWavefrontMass;
    return out;
}

/// First-order coherence growth 4(|lambda| + |1 + 4 lambda|) t on the cycle;
/// meaningful for t <= 0.05.
inline double cycle_coherence_short_time(double lambda, double t) {
    return 4.0 * (std::abs(lambda) + std::abs(1.0 + 4.0 * lambda)) * t;
}

} // namespace ctqw
