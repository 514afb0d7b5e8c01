#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include <gtest/gtest.h>

#include "ctqw/crb.hpp"
#include "ctqw/parallel.hpp"

using namespace ctqw;

namespace {

PerturbedWalk complete5(double lambda) {
    return PerturbedWalk::closed_form(GraphFamily::of(FamilyKind::complete, 5), lambda);
}

class ScopedThreads {
  public:
    explicit ScopedThreads(const char *value) {
        if (const char *old = std::getenv("CTQW_THREADS")) {
            saved_ = old;
            had_ = true;
        }
        setenv("CTQW_THREADS", value, 1);
    }
    ~ScopedThreads() {
        if (had_) {
            setenv("CTQW_THREADS", saved_.c_str(), 1);
        } else {
            unsetenv("CTQW_THREADS");
        }
    }

  private:
    std::string saved_;
    bool had_ = false;
};

} // namespace

TEST(Splitmix64, ReferenceSequence) {
    std::uint64_t state = 0;
    EXPECT_EQ(splitmix64(state), 0xe220a8397b1dcdafULL);
    EXPECT_EQ(splitmix64(state), 0x6e789e6aa1b965f4ULL);
    EXPECT_EQ(splitmix64(state), 0x06c45d188009454fULL);
}

TEST(Uniform01, StaysInHalfOpenUnitInterval) {
    std::mt19937_64 rng(1);
    double lo = 1.0, hi = 0.0, sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = uniform01(rng);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        sum += u;
    }
    EXPECT_GE(lo, 0.0);
    EXPECT_LT(hi, 1.0);
    EXPECT_NEAR(sum / 100000.0, 0.5, 0.01);
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i].fetch_add(1); });
    for (const auto &h : hits) {
        EXPECT_EQ(h.load(), 1);
    }
    parallel_for(0, [](std::size_t) { FAIL(); });
}

TEST(ParallelFor, RethrowsLowestFailingIndex) {
    for (const char *threads : {"1", "4"}) {
        ScopedThreads scope(threads);
        try {
            parallel_for(100, [](std::size_t i) {
                if (i == 17 || i == 60 || i == 99) {
                    throw std::runtime_error(std::to_string(i));
                }
            });
            FAIL() << "no exception";
        } catch (const std::runtime_error &e) {
            EXPECT_STREQ(e.what(), "17");
        }
    }
}

TEST(ParallelFor, WorkerCountHonoursCap) {
    {
        ScopedThreads scope("1");
        EXPECT_EQ(worker_count(), 1u);
    }
    {
        ScopedThreads scope("junk");
        EXPECT_GE(worker_count(), 1u);
    }
}

TEST(CrbMonteCarlo, DeterministicForFixedSeedAndAnyThreadCount) {
    const PerturbedWalk w = complete5(0.2);
    CRBReport serial;
    {
        ScopedThreads scope("1");
        serial = crb_monte_carlo(w, ProbeSpec::localized(0), 0.2, 0.2, 2000, 40, 7);
    }
    CRBReport parallel;
    {
        ScopedThreads scope("8");
        parallel = crb_monte_carlo(w, ProbeSpec::localized(0), 0.2, 0.2, 2000, 40, 7);
    }
    CRBReport again = crb_monte_carlo(w, ProbeSpec::localized(0), 0.2, 0.2, 2000, 40, 7);
    for (const CRBReport *r : std::initializer_list<const CRBReport *>{&parallel, &again}) {
        EXPECT_EQ(r->estimator_mean, serial.estimator_mean);
        EXPECT_EQ(r->estimator_variance, serial.estimator_variance);
        EXPECT_EQ(r->boundary_hits, serial.boundary_hits);
    }
    const CRBReport other = crb_monte_carlo(w, ProbeSpec::localized(0), 0.2, 0.2, 2000, 40, 8);
    EXPECT_NE(other.estimator_variance, serial.estimator_variance);
    EXPECT_EQ(serial.seed, 7u);
}

TEST(CrbMonteCarlo, ReportFields) {
    const PerturbedWalk w = complete5(0.2);
    const CRBReport r = crb_monte_carlo(w, ProbeSpec::localized(0), 0.2, 0.2, 1000, 10, 1);
    EXPECT_EQ(r.n_samples, 1000u);
    EXPECT_EQ(r.n_trials, 10u);
    EXPECT_NEAR(r.qfi, 400.0 * 0.04, 1e-9);
    EXPECT_NEAR(r.crb_quantum, 1.0 / (1000.0 * r.qfi), 1e-15);
    EXPECT_NEAR(r.crb_classical, 1.0 / (1000.0 * r.fisher), 1e-15);
    EXPECT_LE(r.fisher, r.qfi + 1e-8);
    EXPECT_NEAR(r.bracket_hi - r.bracket_lo, 1.0 / (0.2 * 25.0), 1e-12);
}

TEST(CrbMonteCarlo, Validation) {
    const PerturbedWalk w = complete5(0.2);
    EXPECT_THROW(crb_monte_carlo(w, ProbeSpec::localized(0), 0.2, 0.2, 999, 10, 1), InvalidInput);
    EXPECT_THROW(crb_monte_carlo(w, ProbeSpec::localized(0), 0.2, 0.2, 1000, 1, 1), InvalidInput);
    EXPECT_THROW(crb_monte_carlo(w, ProbeSpec::localized(0), 0.0, 0.2, 1000, 10, 1), InvalidInput);
}

TEST(CrbMonteCarlo, RejectsNonRegularPoints) {
    // Complete graph at lambda*: the walker never leaves vertex 0.
    EXPECT_THROW(crb_monte_carlo(complete5(-0.2), ProbeSpec::localized(0), 0.3, -0.2, 1000, 10, 1),
                 NonRegularPoint);
    // Star at lambda*: the centre is never visited from an outer vertex.
    const PerturbedWalk star = PerturbedWalk::closed_form(GraphFamily::of(FamilyKind::star, 5), -0.2);
    EXPECT_THROW(crb_monte_carlo(star, ProbeSpec::localized(1), 0.3, -0.2, 1000, 10, 1), NonRegularPoint);
    // Vanishing FI: omega_N t = pi/2 stalls dP/d lambda on the complete graph.
    const double t = std::numbers::pi / 10.0;
    EXPECT_THROW(crb_monte_carlo(complete5(0.2), ProbeSpec::localized(0), t, 0.2, 1000, 10, 1),
                 NonRegularPoint);
}

TEST(CrbMonteCarlo, AttainsBoundAtRegularPoint) {
    const PerturbedWalk w = complete5(0.2);
    const CRBReport r = crb_monte_carlo(w, ProbeSpec::localized(0), 0.1, 0.2, 10'000, 200, 2024);
    const double ratio = r.estimator_variance / r.crb_classical;
    // 99.9% chi-square band for 199 degrees of freedom.
    EXPECT_GT(ratio, 0.76);
    EXPECT_LT(ratio, 1.28);
    EXPECT_LT(std::abs(r.estimator_mean - 0.2), 4.0 * std::sqrt(r.estimator_variance / 200.0));
    EXPECT_EQ(r.boundary_hits, 0u);
}

TEST(CrbMonteCarlo, VarianceScalesAsOneOverN) {
    const PerturbedWalk w = complete5(0.2);
    std::vector<double> logn, logv;
    for (std::size_t n : {1000u, 4000u, 16000u, 64000u}) {
        const CRBReport r = crb_monte_carlo(w, ProbeSpec::localized(0), 0.1, 0.2, n, 200, 99);
        logn.push_back(std::log(static_cast<double>(n)));
        logv.push_back(std::log(r.estimator_variance));
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < logn.size(); ++i) {
        mx += logn[i] / 4.0;
        my += logv[i] / 4.0;
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < logn.size(); ++i) {
        sxy += (logn[i] - mx) * (logv[i] - my);
        sxx += (logn[i] - mx) * (logn[i] - mx);
    }
    EXPECT_NEAR(sxy / sxx, -1.0, 0.1);
}

TEST(PositionModel, LikelihoodPeaksAtTruthForExpectedCounts) {
    const PerturbedWalk w = complete5(0.2);
    const PositionModel model(w, WalkerState::localized(5, 0), 0.1);
    const RVector p = model.probabilities(0.2);
    std::vector<std::size_t> counts;
    for (double x : p) {
        counts.push_back(static_cast<std::size_t>(std::llround(x * 1e8)));
    }
    const double lo = 0.2 - 0.5 / (0.1 * 25.0);
    const double hi = 0.2 + 0.5 / (0.1 * 25.0);
    EXPECT_NEAR(maximize_likelihood(model, counts, lo, hi), 0.2, 1e-6);
}
