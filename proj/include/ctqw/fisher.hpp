#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dynamics.hpp"
#include "error.hpp"
#include "graph.hpp"
#include "spectrum.hpp"
#include "walk.hpp"

namespace ctqw {

/// Initial state of an estimation protocol.
struct ProbeSpec {
    enum class Kind { localized, max_qfi };

    Kind kind = Kind::localized;
    Vertex vertex = 0;
    EigvecChoice choice{};
    /// Relative phase of the top component, in [0, 2 pi).
    double phase = 0.0;

    static ProbeSpec localized(Vertex v) { return {Kind::localized, v, {}, 0.0}; }
    static ProbeSpec max_qfi(EigvecChoice c = {}, double phi = 0.0) {
        return {Kind::max_qfi, 0, c, phi};
    }
};

inline std::string to_string(const ProbeSpec &p) {
    if (p.kind == ProbeSpec::Kind::localized) {
        return "localized(" + std::to_string(p.vertex) + ")";
    }
    return "max(" + to_string(p.choice) + (p.phase != 0.0 ? ",phi=" + std::to_string(p.phase) : "") +
           ")";
}

struct FisherRecord {
    double t = 0.0;
    double lambda = 0.0;
    double qfi = 0.0;
    double fi = 0.0;
    ProbeSpec scenario{};
};

/// (|e_min> + e^{i phi} |e_max>)/sqrt(2), with |e_min> the first vector of
/// the lowest level and |e_max> the top-level vector selected by `choice`.
inline WalkerState max_qfi_probe(const Spectrum &s, const EigvecChoice &choice = {},
                                 double phi = 0.0) {
    detail::require(s.levels().size() >= 2, "max_qfi_probe: spectrum has a single level");
    detail::require(phi >= 0.0 && phi < 2.0 * std::numbers::pi, "phase must lie in [0, 2 pi)");
    const Level &top = s.highest();
    const std::size_t slot = choice.top_slot();
    detail::require(slot < top.multiplicity(),
                    "eigenvector choice '" + to_string(choice) + "' invalid for a top level of "
                    "multiplicity " + std::to_string(top.multiplicity()));
    const CVector &lo = s.lowest().vectors.front();
    const CVector &hi = top.vectors[slot];
    const Complex rot = std::polar(1.0, phi);
    CVector amp(lo.size());
    for (std::size_t k = 0; k < amp.size(); ++k) {
        amp[k] = (lo[k] + rot * hi[k]) / std::numbers::sqrt2;
    }
    return WalkerState::normalized(std::move(amp));
}

inline WalkerState prepare_probe(const PerturbedWalk &walk, const ProbeSpec &probe) {
    if (probe.kind == ProbeSpec::Kind::localized) {
        return WalkerState::localized(walk.order(), probe.vertex);
    }
    return max_qfi_probe(walk.spectrum(), probe.choice, probe.phase);
}

/// 4 t^2 (<L^4> - <L^2>^2) for the commuting perturbation H_1 = L^2. Uses
/// <L^2> = ||L psi||^2 and <L^4> = ||L^2 psi||^2, exact for integer L and
/// vertex-localized states.
inline double qfi_variance_formula(const PerturbedWalk &walk, const WalkerState &psi0, double t) {
    detail::require(psi0.size() == walk.order(), "state/graph size mismatch");
    const CVector l1 = walk.laplacian_matrix().apply(psi0.amplitudes());
    const CVector l2 = walk.laplacian_matrix().apply(l1);
    const double n1 = norm2(l1);
    const double n2 = norm2(l2);
    const double second = n1 * n1;
    const double fourth = n2 * n2;
    return 4.0 * t * t * std::max(0.0, fourth - second * second);
}

struct FidelityQfi {
    double value = 0.0;
    bool reliable = true;
    /// Step actually used (after a possible retry).
    double delta = 0.0;
};

namespace detail {

/// 1 - |<psi_lambda|psi_{lambda+delta}>| from the level weights. The overlap is
/// sum_a w_a exp(-i delta eps_a^2 t); 1 - |z|^2 = 4 sum_{a<b} w_a w_b
/// sin^2(delta t (eps_a^2 - eps_b^2)/2) avoids the cancellation in 1 - |z|.
inline double infidelity(const std::vector<std::pair<double, double>> &weights, double delta,
                         double t) {
    double one_minus_sq = 0.0;
    for (std::size_t a = 0; a < weights.size(); ++a) {
        for (std::size_t b = a + 1; b < weights.size(); ++b) {
            const double ea = weights[a].first * weights[a].first;
            const double eb = weights[b].first * weights[b].first;
            const double s = std::sin(0.5 * delta * t * (ea - eb));
            one_minus_sq += weights[a].second * weights[b].second * s * s;
        }
    }
    one_minus_sq *= 4.0;
    const double abs_z = std::sqrt(std::max(0.0, 1.0 - one_minus_sq));
    return one_minus_sq / (1.0 + abs_z);
}

inline std::vector<std::pair<double, double>> level_weights(const Spectrum &s, const CVector &psi) {
    std::vector<std::pair<double, double>> out;
    for (const Level &level : s.levels()) {
        double w = 0.0;
        for (const CVector &v : level.vectors) {
            w += std::norm(inner(v, psi));
        }
        out.emplace_back(level.value, w);
    }
    return out;
}

} // namespace detail

/// Floor on 1 - |overlap| below which the quotient is treated as cancelled.
inline constexpr double kInfidelityFloor = 1e-13;

/// lim 8 (1 - |<psi_lambda|psi_{lambda+delta}>|)/delta^2, Richardson
/// extrapolated from delta and delta/2. The QFI is lambda-independent, so
/// the overlap depends on the walk only through the spectrum of L. With
/// delta = 0 the step defaults to 1e-3/(t eps_max^2).
inline FidelityQfi qfi_fidelity_limit(const PerturbedWalk &walk, const WalkerState &psi0, double t,
                                      double delta = 0.0) {
    detail::require(psi0.size() == walk.order(), "state/graph size mismatch");
    detail::require(delta >= 0.0, "fidelity step must be positive (0 selects the default)");
    if (t == 0.0) {
        return {0.0, true, delta};
    }
    const double top = walk.spectrum().highest().value;
    if (delta == 0.0) {
        delta = 1e-3 / (std::abs(t) * std::max(1.0, top * top));
    }
    const auto weights = detail::level_weights(walk.spectrum(), psi0.amplitudes());
    const auto quotient = [&](double d) { return 8.0 * detail::infidelity(weights, d, t) / (d * d); };

    FidelityQfi out;
    out.delta = delta;
    if (detail::infidelity(weights, delta, t) < kInfidelityFloor) {
        out.delta = delta * 10.0;
        if (detail::infidelity(weights, out.delta, t) < kInfidelityFloor) {
            out.reliable = false;
        }
    }
    const double coarse = quotient(out.delta);
    const double fine = quotient(0.5 * out.delta);
    out.value = (4.0 * fine - coarse) / 3.0;
    return out;
}

struct ParthasarathyM {
    double m = 1.0;
    /// Width of the smallest arc holding every phase.
    double arc = 0.0;
    /// Phases do not fit in an arc shorter than pi: <psi|W|psi> can vanish.
    bool zero_branch = false;
};

/// Minimum over unit psi of |<psi|W|psi>|^2 for a unitary W with distinct
/// eigenphases theta_j: min_{i != j} cos^2((theta_i - theta_j)/2) when all
/// phases lie in an open half circle, 0 otherwise. The second member of each
/// pair is the eigenspace dimension; empty eigenspaces are ignored.
inline ParthasarathyM parthasarathy_m(const std::vector<std::pair<double, std::size_t>> &phases) {
    std::vector<double> theta;
    for (const auto &[angle, dim] : phases) {
        if (dim > 0) {
            theta.push_back(std::remainder(angle, 2.0 * std::numbers::pi));
        }
    }
    detail::require(!theta.empty(), "parthasarathy_m needs at least one eigenphase");
    if (theta.size() == 1) {
        return {1.0, 0.0, false};
    }
    // Largest empty circular gap; the occupied arc is its complement.
    std::sort(theta.begin(), theta.end());
    double gap = theta.front() + 2.0 * std::numbers::pi - theta.back();
    for (std::size_t i = 1; i < theta.size(); ++i) {
        gap = std::max(gap, theta[i] - theta[i - 1]);
    }
    const double arc = 2.0 * std::numbers::pi - gap;
    if (arc >= std::numbers::pi) {
        return {0.0, arc, true};
    }
    const double c = std::cos(0.5 * arc);
    return {c * c, arc, false};
}

/// Eigenphases -delta t eps^2 of exp(-i delta L^2 t) per distinct level.
inline std::vector<std::pair<double, std::size_t>> parthasarathy_phases(const Spectrum &s,
                                                                        double delta, double t) {
    std::vector<std::pair<double, std::size_t>> out;
    for (const Level &level : s.levels()) {
        out.emplace_back(-delta * t * level.value * level.value, level.multiplicity());
    }
    return out;
}

/// Largest QFI reachable on the spectrum: lim 8 (1 - sqrt(m))/delta^2 with m
/// from the Parthasarathy bound; equals t^2 (eps_max^2 - eps_min^2)^2.
inline double parthasarathy_max_qfi(const Spectrum &s, double t, double delta = 0.0) {
    if (t == 0.0 || s.levels().size() < 2) {
        return 0.0;
    }
    const double top = s.highest().value;
    if (delta <= 0.0) {
        delta = 1e-3 / (std::abs(t) * std::max(1.0, top * top));
    }
    const auto quotient = [&](double d) {
        const ParthasarathyM pm = parthasarathy_m(parthasarathy_phases(s, d, t));
        // 1 - sqrt(m) = 1 - cos(arc/2) = 2 sin^2(arc/4)
        const double sn = std::sin(0.25 * pm.arc);
        return 16.0 * sn * sn / (d * d);
    };
    return (4.0 * quotient(0.5 * delta) - quotient(delta)) / 3.0;
}

enum class FiMode { analytic, finite_difference, exact };

inline const char *to_string(FiMode m) {
    switch (m) {
    case FiMode::analytic: return "analytic";
    case FiMode::finite_difference: return "finite_difference";
    case FiMode::exact: return "exact";
    }
    return "?";
}

inline FiMode fi_mode_from_string(const std::string &s) {
    if (s == "analytic") return FiMode::analytic;
    if (s == "finite_difference" || s == "fd") return FiMode::finite_difference;
    if (s == "exact") return FiMode::exact;
    throw InvalidInput("unknown FI mode '" + s + "'");
}

/// Probabilities below this use the continuous limit 4 |d psi_k / d lambda|^2
/// of (dP_k)^2/P_k instead of the quotient.
inline constexpr double kFiProbabilityFloor = 1e-12;

namespace detail {

/// FI split into outcomes with P >= floor and the continuous-limit share of
/// outcomes below it. A nonzero `boundary` means information sits on an
/// outcome of vanishing probability: the model is not regular there.
struct FisherParts {
    double regular = 0.0;
    double boundary = 0.0;
};

inline FisherParts fisher_parts(const CVector &psi, const CVector &dpsi) {
    FisherParts f;
    for (std::size_t k = 0; k < psi.size(); ++k) {
        const double p = std::norm(psi[k]);
        if (p < kFiProbabilityFloor) {
            f.boundary += 4.0 * std::norm(dpsi[k]);
        } else {
            const double dp = 2.0 * std::real(std::conj(psi[k]) * dpsi[k]);
            f.regular += dp * dp / p;
        }
    }
    return f;
}

inline double fisher_from_amplitudes(const CVector &psi, const CVector &dpsi) {
    const FisherParts f = fisher_parts(psi, dpsi);
    return f.regular + f.boundary;
}

/// d psi/d lambda by central differences on amplitudes with one Richardson
/// level: (4 D(h/2) - D(h))/3, h = 1e-6 max(1, |lambda|).
inline CVector amplitude_derivative_fd(const Spectrum &s, double lambda, const CVector &in,
                                       double t) {
    const double h = 1e-6 * std::max(1.0, std::abs(lambda));
    const auto central = [&](double step) {
        CVector plus = propagate(s, lambda + step, in, t);
        const CVector minus = propagate(s, lambda - step, in, t);
        for (std::size_t k = 0; k < plus.size(); ++k) {
            plus[k] = (plus[k] - minus[k]) / (2.0 * step);
        }
        return plus;
    };
    CVector coarse = central(h);
    const CVector fine = central(0.5 * h);
    for (std::size_t k = 0; k < coarse.size(); ++k) {
        coarse[k] = (4.0 * fine[k] - coarse[k]) / 3.0;
    }
    return coarse;
}

} // namespace detail

/// Position-measurement FI sum_k (d_lambda P_k)^2 / P_k for an arbitrary
/// initial state, evaluated numerically at `lambda`.
inline double fi_state(const PerturbedWalk &walk, const WalkerState &psi0, double t, double lambda,
                       FiMode mode = FiMode::exact) {
    detail::require(psi0.size() == walk.order(), "state/graph size mismatch");
    detail::require(mode != FiMode::analytic, "analytic FI needs a named scenario");
    const CVector psi = detail::propagate(walk.spectrum(), lambda, psi0.amplitudes(), t);
    const CVector dpsi =
        mode == FiMode::exact
            ? detail::propagate(walk.spectrum(), lambda, psi0.amplitudes(), t, true)
            : detail::amplitude_derivative_fd(walk.spectrum(), lambda, psi0.amplitudes(), t);
    return detail::fisher_from_amplitudes(psi, dpsi);
}

/// A probe on a named family, the unit of the closed-form FI catalogue.
struct FisherScenario {
    FamilyKind family = FamilyKind::complete;
    std::size_t n = 0;
    ProbeSpec probe{};
};

namespace detail {

inline double sin2(double x) {
    const double s = std::sin(x);
    return s * s;
}

inline double cos2(double x) {
    const double c = std::cos(x);
    return c * c;
}

/// 2 t^2 eps^4 sin^2(a) sum_i v_i^2 / (N v_i^2 + 2 sqrt(N) v_i cos(a) + 1),
/// a = E t - phi, for the probe (|uniform> + e^{i phi}|v>)/sqrt(2) with v
/// real. A vanishing denominator forces sin(a) = 0; the term's limit is v_i^2.
inline double phase_shifted_sum(const RVector &v, double eps, double energy, double t, double phi) {
    const double big_n = static_cast<double>(v.size());
    const double a = energy * t - phi;
    const double s2 = sin2(a);
    const double c = std::cos(a);
    double acc = 0.0;
    for (double vi : v) {
        const double den = big_n * vi * vi + 2.0 * std::sqrt(big_n) * vi * c + 1.0;
        acc += den <= 1e-300 ? vi * vi : vi * vi * s2 / den;
    }
    const double eps2 = eps * eps;
    return 2.0 * t * t * eps2 * eps2 * acc;
}

inline RVector real_top_vector(const Spectrum &s, const EigvecChoice &choice) {
    const Level &top = s.highest();
    const std::size_t slot = choice.top_slot();
    detail::require(slot < top.multiplicity(), "eigenvector choice '" + to_string(choice) +
                                                   "' invalid for the top level");
    RVector out;
    for (const Complex &z : top.vectors[slot]) {
        if (std::abs(z.imag()) > 1e-12) {
            throw UnsupportedScenario("phase-shifted FI needs a real top eigenvector");
        }
        out.push_back(z.real());
    }
    return out;
}

} // namespace detail

/// Closed-form position FI for the analytically solved scenarios; throws
/// UnsupportedScenario for anything else. The evaluator maps (t, lambda) to FI.
inline std::function<double(double, double)> closed_form_fisher(const FisherScenario &sc) {
    const std::size_t n = sc.n;
    const double big_n = static_cast<double>(n);
    detail::require(n >= GraphFamily::of(sc.family, n).minimum_order(), "invalid order");
    const auto unsupported = [&]() -> std::function<double(double, double)> {
        throw UnsupportedScenario("no closed-form FI for " + to_string(sc.probe) + " on " +
                                  std::string(to_string(sc.family)) + " graphs");
    };
    const bool localized = sc.probe.kind == ProbeSpec::Kind::localized;
    if (localized) {
        detail::require(sc.probe.vertex < n, "vertex out of range");
    }

    // Complete graph, and star from its centre, with the walker on a vertex.
    const auto complete_localized = [big_n](double t, double lambda) {
        if (big_n == 2.0) {
            return 16.0 * t * t;
        }
        const double w = angular_frequency(big_n, lambda) * t;
        return 4.0 * std::pow(big_n, 4) * (big_n - 1.0) * t * t * detail::cos2(w) /
               (big_n * big_n - 4.0 * (big_n - 1.0) * detail::sin2(w));
    };
    // Top vector with one entry of weight N-1: complete l = N-1 and star.
    const auto lopsided = [big_n](double t, double lambda) {
        if (big_n == 2.0) {
            return 16.0 * t * t;
        }
        const double w = 2.0 * angular_frequency(big_n, lambda) * t;
        return 4.0 * std::pow(big_n, 4) * (big_n - 1.0) * t * t * detail::sin2(w) /
               (big_n * big_n - 4.0 * (big_n - 1.0) * detail::cos2(w));
    };
    const auto balanced = [big_n](double t, double lambda) {
        if (big_n == 2.0) {
            return 16.0 * t * t;
        }
        const double w = 2.0 * angular_frequency(big_n, lambda) * t;
        return 4.0 * std::pow(big_n, 4) * (big_n + 2.0) * t * t * detail::sin2(w) /
               ((big_n + 2.0) * (big_n + 2.0) - 8.0 * big_n * detail::cos2(w));
    };
    const auto phase_shifted = [&](const GraphFamily &fam) {
        const Spectrum s = spectrum_closed_form(fam, sc.probe.choice);
        const RVector v = detail::real_top_vector(s, sc.probe.choice);
        const double eps = s.highest().value;
        const double phi = sc.probe.phase;
        return std::function<double(double, double)>([v, eps, phi](double t, double lambda) {
            return detail::phase_shifted_sum(v, eps, eps + lambda * eps * eps, t, phi);
        });
    };

    switch (sc.family) {
    case FamilyKind::complete:
        if (localized) {
            return complete_localized;
        }
        if (sc.probe.phase == 0.0 && sc.probe.choice.kind == EigvecChoice::Kind::indexed) {
            if (sc.probe.choice.index == n - 1) {
                return lopsided;
            }
            if (sc.probe.choice.index == 1) {
                return balanced;
            }
        }
        return phase_shifted(GraphFamily::of(FamilyKind::complete, n));
    case FamilyKind::star:
        if (localized) {
            if (sc.probe.vertex == 0) {
                return complete_localized;
            }
            return unsupported();
        }
        if (sc.probe.phase == 0.0) {
            return lopsided;
        }
        return phase_shifted(GraphFamily::of(FamilyKind::star, n));
    case FamilyKind::cycle: {
        if (localized) {
            return unsupported();
        }
        const double eps = n % 2 == 0 ? 4.0 : 2.0 * (1.0 + std::cos(std::numbers::pi / big_n));
        const double eps4 = eps * eps * eps * eps;
        if (n % 2 == 0 || !sc.probe.choice.real_basis()) {
            // Position measurement is optimal: FI = QFI.
            return [eps4](double t, double) { return eps4 * t * t; };
        }
        if (sc.probe.phase != 0.0) {
            return phase_shifted(GraphFamily::of(FamilyKind::cycle, n));
        }
        const bool use_cos = sc.probe.choice.kind == EigvecChoice::Kind::real_cos;
        return [n, big_n, eps, eps4, use_cos](double t, double lambda) {
            const double energy = eps + lambda * eps * eps;
            const double c = std::cos(energy * t);
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                const double theta = std::numbers::pi * static_cast<double>(k) / big_n;
                const double ck = use_cos ? std::cos(theta) : std::sin(theta);
                const double sign = k % 2 == 0 ? 1.0 : -1.0;
                const double den = 1.0 + 2.0 * std::numbers::sqrt2 * sign * ck * c + 2.0 * ck * ck;
                acc += den <= 1e-300 ? 0.5 * ck * ck : ck * ck * detail::sin2(energy * t) / den;
            }
            return 4.0 * eps4 * t * t / big_n * acc;
        };
    }
    default:
        return unsupported();
    }
}

/// Position FI of a probe on a walk at `lambda`. Analytic mode needs the
/// walk's graph to carry its family tag.
inline double fi_position(const PerturbedWalk &walk, const ProbeSpec &probe, double t,
                          double lambda, FiMode mode = FiMode::exact) {
    if (mode == FiMode::analytic) {
        const auto &family = walk.graph().family();
        if (!family) {
            throw UnsupportedScenario("analytic FI needs a named graph family");
        }
        return closed_form_fisher({family->kind, walk.order(), probe})(t, lambda);
    }
    return fi_state(walk, prepare_probe(walk, probe), t, lambda, mode);
}

/// Position FI of the phase-shifted probe (|e_min> + e^{i phi}|e_max>)/sqrt(2) with a real
/// top eigenvector; phi = 0 recovers the unshifted FI.
inline double fi_phase_shifted(const PerturbedWalk &walk, const EigvecChoice &choice, double phi,
                               double t, double lambda) {
    detail::require(phi >= 0.0 && phi < 2.0 * std::numbers::pi, "phase must lie in [0, 2 pi)");
    const Spectrum &s = walk.spectrum();
    detail::require(s.levels().size() >= 2, "spectrum has a single level");
    detail::require(s.lowest().multiplicity() == 1, "phase-shifted FI needs a connected graph");
    const RVector v = detail::real_top_vector(s, choice);
    const double eps = s.highest().value;
    return detail::phase_shifted_sum(v, eps, eps + lambda * eps * eps, t, phi);
}

/// Reference QFI values: 136 t^2 (cycle, N >= 5), 4 N^2 (N-1) t^2 (complete,
/// and star from the centre), 4 (N^2 + N - 2) t^2 (star, outer vertex) for
/// localized probes; eps_max^4 t^2 for maximum-QFI probes.
inline double qfi_closed_form(const FisherScenario &sc, double t) {
    const double big_n = static_cast<double>(sc.n);
    const double t2 = t * t;
    if (sc.probe.kind == ProbeSpec::Kind::max_qfi) {
        double eps = big_n;
        if (sc.family == FamilyKind::cycle) {
            eps = sc.n % 2 == 0 ? 4.0 : 2.0 * (1.0 + std::cos(std::numbers::pi / big_n));
        } else if (sc.family != FamilyKind::complete && sc.family != FamilyKind::star) {
            throw UnsupportedScenario("no closed-form QFI for this family");
        }
        return eps * eps * eps * eps * t2;
    }
    switch (sc.family) {
    case FamilyKind::cycle:
        detail::require(sc.n >= 5, "cycle localized QFI closed form needs N >= 5");
        return 136.0 * t2;
    case FamilyKind::complete:
        return 4.0 * big_n * big_n * (big_n - 1.0) * t2;
    case FamilyKind::star:
        if (sc.probe.vertex == 0) {
            return 4.0 * big_n * big_n * (big_n - 1.0) * t2;
        }
        return 4.0 * (big_n * big_n + big_n - 2.0) * t2;
    default:
        throw UnsupportedScenario("no closed-form QFI for this family");
    }
}

} // namespace ctqw
