#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>

#include "dynamics.hpp"
#include "error.hpp"

namespace ctqw {

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    [[nodiscard]] double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Rational &) const = default;
};

inline std::string to_string(const Rational &r) {
    return r.den == 1 ? std::to_string(r.num) : std::to_string(r.num) + "/" + std::to_string(r.den);
}

inline constexpr std::int64_t kMaxDenominator = 1'000'000;
inline constexpr double kRationalTolerance = 1e-9;

/// Continued-fraction reconstruction of x >= 0: the first convergent h/k
/// with |x - h/k| <= tol * max(1, x), provided k <= max_den.
inline std::optional<Rational> rational_approximation(double x,
                                                      std::int64_t max_den = kMaxDenominator,
                                                      double tol = kRationalTolerance) {
    if (!std::isfinite(x) || x < 0.0) {
        return std::nullopt;
    }
    const double target = tol * std::max(1.0, x);
    // h_{-1}/k_{-1} = 1/0, h_{-2}/k_{-2} = 0/1
    std::int64_t h_prev = 1, h_prev2 = 0;
    std::int64_t k_prev = 0, k_prev2 = 1;
    double rest = x;
    for (int iter = 0; iter < 64; ++iter) {
        const double a_f = std::floor(rest);
        if (a_f > 9.0e15) {
            return std::nullopt;
        }
        const auto a = static_cast<std::int64_t>(a_f);
        const std::int64_t h = a * h_prev + h_prev2;
        const std::int64_t k = a * k_prev + k_prev2;
        if (k > max_den) {
            return std::nullopt;
        }
        if (std::abs(x - static_cast<double>(h) / static_cast<double>(k)) <= target) {
            return Rational{h, k};
        }
        const double frac = rest - a_f;
        if (frac <= 0.0) {
            return std::nullopt;
        }
        rest = 1.0 / frac;
        h_prev2 = h_prev;
        h_prev = h;
        k_prev2 = k_prev;
        k_prev = k;
    }
    return std::nullopt;
}

enum class PeriodSpecialCase { omega1_zero, omegaN_zero, omegaN_equals_omega1 };

inline const char *to_string(PeriodSpecialCase c) {
    switch (c) {
    case PeriodSpecialCase::omega1_zero: return "omega_1=0";
    case PeriodSpecialCase::omegaN_zero: return "omega_N=0";
    case PeriodSpecialCase::omegaN_equals_omega1: return "omega_N=omega_1";
    }
    return "?";
}

/// Periods of sin^2(omega t) for the three star frequencies omega_1,
/// omega_N and omega_N - omega_1. A vanishing frequency gives +inf.
struct StarPeriods {
    double t1 = 0.0;
    double tn = 0.0;
    double tn1 = 0.0;
};

inline StarPeriods star_periods(std::size_t n, double lambda) {
    const double big_n = static_cast<double>(n);
    const auto period = [](double omega) {
        return omega == 0.0 ? std::numeric_limits<double>::infinity()
                            : std::numbers::pi / std::abs(omega);
    };
    const double w1 = angular_frequency(1.0, lambda);
    const double wn = angular_frequency(big_n, lambda);
    return {period(w1), period(wn), period(wn - w1)};
}

struct PeriodReport {
    std::optional<Rational> p;
    std::optional<Rational> q;
    bool periodic = false;
    std::optional<double> period;
    std::optional<PeriodSpecialCase> special_case;
};

/// Tolerance for recognizing lambda in {-1, -1/N, -1/(N+1)}.
inline constexpr double kSpecialLambdaTolerance = 1e-12;

/// Commensurability analysis of the star distribution from an outer vertex.
/// p = T_1/T_N and q = T_{N,1}/T_N; the walk is periodic iff both are
/// rational, with period lcm(a, b)/c * T_N for p = a/c, q = b/c.
inline PeriodReport star_periodicity(std::size_t n, double lambda) {
    detail::require(n >= 2, "star_periodicity needs N >= 2");
    detail::require(std::isfinite(lambda), "lambda must be finite");
    const double big_n = static_cast<double>(n);
    const StarPeriods per = star_periods(n, lambda);
    PeriodReport r;

    const auto special = [&](PeriodSpecialCase tag, double period) {
        r.special_case = tag;
        r.periodic = true;
        r.period = period;
        return r;
    };
    const double tol = kSpecialLambdaTolerance;
    if (std::abs(1.0 + lambda) <= tol) {
        return special(PeriodSpecialCase::omega1_zero, per.tn);
    }
    if (std::abs(1.0 + lambda * big_n) <= tol) {
        return special(PeriodSpecialCase::omegaN_zero, per.t1);
    }
    if (std::abs(1.0 + lambda * (big_n + 1.0)) <= tol) {
        return special(PeriodSpecialCase::omegaN_equals_omega1, per.t1);
    }

    r.p = rational_approximation(per.t1 / per.tn);
    r.q = rational_approximation(per.tn1 / per.tn);
    if (!r.p || !r.q || r.p->num == 0 || r.q->num == 0) {
        return r;
    }
    __extension__ typedef __int128 wide;
    const auto gcd = [](wide x, wide y) {
        while (y != 0) {
            x = std::exchange(y, x % y);
        }
        return x;
    };
    const wide pd = r.p->den;
    const wide qd = r.q->den;
    const wide c = pd / gcd(pd, qd) * qd;
    const wide a = static_cast<wide>(r.p->num) * (c / pd);
    const wide b = static_cast<wide>(r.q->num) * (c / qd);
    const wide l = a / gcd(a, b) * b;
    r.periodic = true;
    r.period = static_cast<double>(static_cast<long double>(l) / static_cast<long double>(c) *
                                   static_cast<long double>(per.tn));
    return r;
}

} // namespace ctqw
