#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "error.hpp"
#include "fisher.hpp"
#include "parallel.hpp"
#include "walk.hpp"

namespace ctqw {

struct CRBReport {
    std::size_t n_samples = 0;
    std::size_t n_trials = 0;
    double t = 0.0;
    double lambda_true = 0.0;
    double estimator_mean = 0.0;
    double estimator_variance = 0.0;
    /// 1/(n F_c) and 1/(n F_q).
    double crb_classical = 0.0;
    double crb_quantum = 0.0;
    double fisher = 0.0;
    double qfi = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    /// Trials whose estimate sits within one grid step of the bracket edge.
    std::size_t boundary_hits = 0;
    std::uint64_t seed = 0;
};

inline std::uint64_t splitmix64(std::uint64_t &state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Uniform on [0, 1) from the top 53 bits.
inline double uniform01(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Vertex-outcome distribution of a fixed probe as a function of lambda.
class PositionModel {
  public:
    PositionModel(const PerturbedWalk &walk, const WalkerState &psi0, double t) : t_(t) {
        detail::require(psi0.size() == walk.order(), "state/graph size mismatch");
        for (const Level &level : walk.spectrum().levels()) {
            CVector comp(walk.order(), Complex{});
            for (const CVector &v : level.vectors) {
                const Complex c = inner(v, psi0.amplitudes());
                for (std::size_t k = 0; k < comp.size(); ++k) {
                    comp[k] += c * v[k];
                }
            }
            eps_.push_back(level.value);
            comp_.push_back(std::move(comp));
        }
    }

    [[nodiscard]] RVector probabilities(double lambda) const {
        CVector amp(comp_.front().size(), Complex{});
        for (std::size_t a = 0; a < eps_.size(); ++a) {
            const Complex ph = std::polar(1.0, -(eps_[a] + lambda * eps_[a] * eps_[a]) * t_);
            for (std::size_t k = 0; k < amp.size(); ++k) {
                amp[k] += ph * comp_[a][k];
            }
        }
        RVector p(amp.size());
        for (std::size_t k = 0; k < p.size(); ++k) {
            p[k] = std::norm(amp[k]);
        }
        return p;
    }

    [[nodiscard]] double log_likelihood(const std::vector<std::size_t> &counts, double lambda) const {
        const RVector p = probabilities(lambda);
        double ll = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k) {
            if (counts[k] > 0) {
                ll += static_cast<double>(counts[k]) * std::log(std::max(p[k], 1e-300));
            }
        }
        return ll;
    }

  private:
    double t_;
    RVector eps_;
    std::vector<CVector> comp_;
};

inline constexpr double kRegularFisherFloor = 1e-6;
inline constexpr std::size_t kMleGridPoints = 201;
/// Largest share of the FI allowed on outcomes with P below the FI floor.
inline constexpr double kBoundaryInformationShare = 1e-9;

/// Maximizes the log-likelihood on [lo, hi]: grid scan, then golden-section
/// refinement around the best grid point.
inline double maximize_likelihood(const PositionModel &model, const std::vector<std::size_t> &counts,
                                  double lo, double hi) {
    const double step = (hi - lo) / static_cast<double>(kMleGridPoints - 1);
    std::size_t best = 0;
    double best_ll = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < kMleGridPoints; ++i) {
        const double ll = model.log_likelihood(counts, lo + step * static_cast<double>(i));
        if (ll > best_ll) {
            best_ll = ll;
            best = i;
        }
    }
    double a = lo + step * static_cast<double>(best == 0 ? 0 : best - 1);
    double b = lo + step * static_cast<double>(std::min(best + 1, kMleGridPoints - 1));
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = model.log_likelihood(counts, x1);
    double f2 = model.log_likelihood(counts, x2);
    for (int iter = 0; iter < 100 && b - a > 1e-14 * std::max(1.0, std::abs(a)); ++iter) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = model.log_likelihood(counts, x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = model.log_likelihood(counts, x1);
        }
    }
    const double mid = 0.5 * (a + b);
    // The grid optimum may sit on the bracket edge, outside the golden interval's interior.
    const double edge = lo + step * static_cast<double>(best);
    return model.log_likelihood(counts, mid) >= best_ll ? mid : edge;
}

/// Maximum-likelihood estimation of lambda from n_samples position outcomes
/// per trial, repeated n_trials times. Trial i draws from mt19937_64 seeded
/// by splitmix64(seed + i); results are reduced in trial order.
inline CRBReport crb_monte_carlo(const PerturbedWalk &walk, const ProbeSpec &probe, double t,
                                 double lambda_true, std::size_t n_samples, std::size_t n_trials,
                                 std::uint64_t seed) {
    detail::require(t > 0.0, "crb_monte_carlo requires t > 0");
    detail::require(n_samples >= 1000, "crb_monte_carlo requires at least 1000 samples");
    detail::require(n_trials >= 2, "crb_monte_carlo requires at least 2 trials");
    const WalkerState psi0 = prepare_probe(walk, probe);
    const detail::FisherParts parts = detail::fisher_parts(
        detail::propagate(walk.spectrum(), lambda_true, psi0.amplitudes(), t),
        detail::propagate(walk.spectrum(), lambda_true, psi0.amplitudes(), t, true));
    const double fisher = parts.regular + parts.boundary;
    if (!(parts.regular > kRegularFisherFloor)) {
        throw NonRegularPoint("Fisher information " + std::to_string(parts.regular) +
                              " at lambda " + std::to_string(lambda_true) +
                              " is below the regularity floor");
    }
    if (parts.boundary > kBoundaryInformationShare * fisher) {
        throw NonRegularPoint("at lambda " + std::to_string(lambda_true) +
                              " an outcome of vanishing probability carries information");
    }
    const PositionModel model(walk, psi0, t);
    const RVector p = model.probabilities(lambda_true);
    RVector cdf(p.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        acc += p[k];
        cdf[k] = acc;
    }
    for (double &c : cdf) {
        c /= acc;
    }

    const double big_n = static_cast<double>(walk.order());
    const double half_width = 0.5 / (t * big_n * big_n);
    const double lo = lambda_true - half_width;
    const double hi = lambda_true + half_width;
    const double grid_step = (hi - lo) / static_cast<double>(kMleGridPoints - 1);

    std::vector<double> estimates(n_trials);
    parallel_for(n_trials, [&](std::size_t trial) {
        std::uint64_t state = seed + trial;
        std::mt19937_64 rng(splitmix64(state));
        std::vector<std::size_t> counts(p.size(), 0);
        for (std::size_t s = 0; s < n_samples; ++s) {
            const double u = uniform01(rng);
            const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
            ++counts[std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), p.size() - 1)];
        }
        estimates[trial] = maximize_likelihood(model, counts, lo, hi);
    });

    CRBReport r;
    r.n_samples = n_samples;
    r.n_trials = n_trials;
    r.t = t;
    r.lambda_true = lambda_true;
    r.fisher = fisher;
    r.qfi = qfi_variance_formula(walk, psi0, t);
    r.crb_classical = 1.0 / (static_cast<double>(n_samples) * fisher);
    r.crb_quantum = 1.0 / (static_cast<double>(n_samples) * r.qfi);
    r.bracket_lo = lo;
    r.bracket_hi = hi;
    r.seed = seed;
    double sum = 0.0;
    for (double e : estimates) {
        sum += e;
        if (e - lo < grid_step || hi - e < grid_step) {
            ++r.boundary_hits;
        }
    }
    r.estimator_mean = sum / static_cast<double>(n_trials);
    double ss = 0.0;
    for (double e : estimates) {
        ss += (e - r.estimator_mean) * (e - r.estimator_mean);
    }
    r.estimator_variance = ss / static_cast<double>(n_trials - 1);
    return r;
}

} // namespace ctqw
