#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "graph.hpp"
#include "matrix.hpp"
#include "spectrum.hpp"

namespace ctqw {

/// Normalized amplitude vector over the vertices at a given time.
class WalkerState {
  public:
    static constexpr double kNormTolerance = 1e-12;

    WalkerState() = default;

    /// Throws unless ||amplitudes|| = 1 within kNormTolerance.
    explicit WalkerState(CVector amplitudes, double time = 0.0)
        : amp_(std::move(amplitudes)), time_(time) {
        detail::require(!amp_.empty(), "walker state must have at least one vertex");
        const double norm = norm2(amp_);
        detail::require(std::abs(norm - 1.0) <= kNormTolerance,
                        "walker state is not normalized (norm " + std::to_string(norm) + ")");
    }

    /// Rescales to unit norm first; for hand-built superpositions.
    static WalkerState normalized(CVector amplitudes, double time = 0.0) {
        const double norm = norm2(amplitudes);
        detail::require(norm > 0.0, "cannot normalize the zero vector");
        for (Complex &z : amplitudes) {
            z /= norm;
        }
        return WalkerState(std::move(amplitudes), time);
    }

    static WalkerState localized(std::size_t n, Vertex v) {
        detail::require(v < n, "vertex " + std::to_string(v) + " out of range");
        CVector amp(n, Complex{});
        amp[v] = 1.0;
        return WalkerState(std::move(amp));
    }

    [[nodiscard]] const CVector &amplitudes() const noexcept { return amp_; }
    [[nodiscard]] double time() const noexcept { return time_; }
    [[nodiscard]] std::size_t size() const noexcept { return amp_.size(); }

  private:
    CVector amp_;
    double time_ = 0.0;
};

/// Vertex probabilities: non-negative, summing to one.
class ProbDist {
  public:
    static constexpr double kClampFloor = -1e-14;
    static constexpr double kSumTolerance = 1e-10;

    ProbDist() = default;

    /// Entries in [kClampFloor, 0) are clamped to 0; anything more negative,
    /// or a sum off by more than kSumTolerance, is rejected.
    explicit ProbDist(RVector p) : p_(std::move(p)) {
        double sum = 0.0;
        for (double &x : p_) {
            detail::require(x >= kClampFloor, "negative probability " + std::to_string(x));
            x = std::max(x, 0.0);
            sum += x;
        }
        detail::require(std::abs(sum - 1.0) <= kSumTolerance,
                        "probabilities sum to " + std::to_string(sum));
    }

    [[nodiscard]] const RVector &values() const noexcept { return p_; }
    [[nodiscard]] std::size_t size() const noexcept { return p_.size(); }
    double operator[](std::size_t k) const { return p_[k]; }

  private:
    RVector p_;
};

/// Walk with Hamiltonian H = L + lambda L^2 (hopping fixed to 1). Carries the
/// spectrum of L it evolves with; the spectrum is checked against the graph
/// on construction.
class PerturbedWalk {
  public:
    static constexpr double kResidualTolerance = 1e-10;

    PerturbedWalk(Graph graph, Spectrum spectrum, double lambda)
        : graph_(std::move(graph)), spectrum_(std::move(spectrum)), lambda_(lambda),
          lap_(laplacian(graph_)) {
        if (spectrum_.dimension() != graph_.order()) {
            throw InvalidInput("spectrum/graph mismatch: dimension " +
                               std::to_string(spectrum_.dimension()) + " vs order " +
                               std::to_string(graph_.order()));
        }
        spectrum_.for_each_pair([&](double value, const CVector &v) {
            const CVector lv = lap_.apply(v);
            double residual = 0.0;
            for (std::size_t k = 0; k < lv.size(); ++k) {
                residual = std::max(residual, std::abs(lv[k] - value * v[k]));
            }
            if (residual > kResidualTolerance * std::max(1.0, value)) {
                throw InvalidInput("spectrum/graph mismatch: eigen-residual " +
                                   std::to_string(residual));
            }
        });
    }

    /// Closed-form spectrum of a named family (cycle, complete, star).
    static PerturbedWalk closed_form(const GraphFamily &family, double lambda,
                                     const EigvecChoice &choice = {}) {
        return {build_family(family), spectrum_closed_form(family, choice), lambda};
    }

    /// Any graph, numeric spectrum.
    static PerturbedWalk numeric(const Graph &graph, double lambda) {
        return {graph, spectrum_numeric(laplacian(graph)), lambda};
    }

    [[nodiscard]] PerturbedWalk with_lambda(double lambda) const {
        PerturbedWalk copy = *this;
        copy.lambda_ = lambda;
        return copy;
    }

    [[nodiscard]] const Graph &graph() const noexcept { return graph_; }
    [[nodiscard]] const Spectrum &spectrum() const noexcept { return spectrum_; }
    [[nodiscard]] const SymMatrix &laplacian_matrix() const noexcept { return lap_; }
    [[nodiscard]] double lambda() const noexcept { return lambda_; }
    [[nodiscard]] std::size_t order() const noexcept { return graph_.order(); }

    /// E = eps + lambda eps^2.
    [[nodiscard]] double energy(double eps) const noexcept { return eps + lambda_ * eps * eps; }

  private:
    Graph graph_;
    Spectrum spectrum_;
    double lambda_ = 0.0;
    SymMatrix lap_;
};

namespace detail {

/// sum_n exp(-i E_n t) <e_n|in> |e_n>, with E_n = eps_n + lambda eps_n^2.
/// With `derivative` set, returns d/dlambda of that vector instead, which
/// carries an extra factor -i eps_n^2 t per term.
inline CVector propagate(const Spectrum &s, double lambda, const CVector &in, double t,
                         bool derivative = false) {
    CVector out(in.size(), Complex{});
    s.for_each_pair([&](double eps, const CVector &v) {
        Complex c = std::polar(1.0, -(eps + lambda * eps * eps) * t) * inner(v, in);
        if (derivative) {
            c *= Complex(0.0, -eps * eps * t);
        }
        for (std::size_t k = 0; k < out.size(); ++k) {
            out[k] += c * v[k];
        }
    });
    return out;
}

} // namespace detail

/// |psi(t)> = sum_n exp(-i E_n t) <e_n|psi0> |e_n>.
inline WalkerState evolve(const PerturbedWalk &walk, const WalkerState &psi0, double t) {
    if (psi0.size() != walk.order()) {
        throw InvalidInput("spectrum/graph mismatch: state has " + std::to_string(psi0.size()) +
                           " amplitudes for a graph of order " + std::to_string(walk.order()));
    }
    return WalkerState(detail::propagate(walk.spectrum(), walk.lambda(), psi0.amplitudes(), t),
                       psi0.time() + t);
}

inline ProbDist probability_distribution(const WalkerState &psi) {
    RVector p(psi.size());
    double sum = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        p[k] = std::norm(psi.amplitudes()[k]);
        sum += p[k];
    }
    for (double &x : p) {
        x /= sum;
    }
    return ProbDist(std::move(p));
}

} // namespace ctqw
