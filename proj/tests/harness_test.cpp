#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "ctqw/harness.hpp"

using namespace ctqw;

namespace {

ScenarioConfig family(FamilyKind kind, std::size_t n) {
    ScenarioConfig cfg;
    cfg.family = kind;
    cfg.n = n;
    return cfg;
}

std::string csv_text(const RecordSet &rs) {
    std::ostringstream out;
    write_csv(rs, out);
    return out.str();
}

std::string meta(const RecordSet &rs, const std::string &key) {
    for (const auto &[k, v] : rs.metadata()) {
        if (k == key) {
            return v;
        }
    }
    return "<missing>";
}

class ScopedThreads {
  public:
    explicit ScopedThreads(const char *value) { setenv("CTQW_THREADS", value, 1); }
    ~ScopedThreads() { unsetenv("CTQW_THREADS"); }
};

} // namespace

TEST(Range, ValuesAndValidation) {
    const std::vector<double> v = Range{0.0, 1.0, 0.25}.values();
    ASSERT_EQ(v.size(), 5u);
    EXPECT_DOUBLE_EQ(v.back(), 1.0);
    EXPECT_EQ(Range::single(3.0).values(), std::vector<double>{3.0});
    // Rounding in (max - min) / step must not drop the last point.
    EXPECT_EQ((Range{0.0, 0.3, 0.1}.values().size()), 4u);
    EXPECT_THROW((Range{0.0, 1.0, 0.0}.values()), InvalidInput);
    EXPECT_THROW((Range{0.0, 1.0, -0.1}.values()), InvalidInput);
    EXPECT_THROW((Range{1.0, 0.0, 0.1}.values()), InvalidInput);
    EXPECT_THROW((Range{0.0, INFINITY, 0.1}.values()), InvalidInput);
    EXPECT_THROW((Range{0.0, 1.0, 1e-9}.values()), InvalidInput);
}

TEST(Harness, GraphSelectionValidation) {
    ScenarioConfig none;
    EXPECT_THROW(run_scenario("frobenius", none), InvalidInput);
    ScenarioConfig both = family(FamilyKind::cycle, 5);
    both.edges_path = "whatever.txt";
    EXPECT_THROW(run_scenario("frobenius", both), InvalidInput);
    EXPECT_THROW(run_scenario("frobenius", family(FamilyKind::cycle, 2)), InvalidInput);
    EXPECT_THROW(run_scenario("nonsense", family(FamilyKind::cycle, 5)), InvalidInput);
    ScenarioConfig bip = family(FamilyKind::complete_bipartite, 0);
    EXPECT_THROW(run_scenario("frobenius", bip), InvalidInput);
    bip.part_a = 2;
    bip.part_b = 3;
    EXPECT_EQ(run_scenario("frobenius", bip).number(0, "n"), 5.0);
    bip.n = 6;
    EXPECT_THROW(run_scenario("frobenius", bip), InvalidInput);
}

TEST(Harness, FrobeniusRow) {
    ScenarioConfig cfg = family(FamilyKind::cycle, 5);
    cfg.command_line = "ctqw frobenius --family cycle --n 5";
    const RecordSet rs = run_scenario("frobenius", cfg);
    EXPECT_EQ(rs.columns(), (std::vector<std::string>{"graph", "n", "frobenius"}));
    ASSERT_EQ(rs.rows().size(), 1u);
    EXPECT_EQ(std::get<std::string>(rs.rows()[0][0]), "cycle");
    EXPECT_EQ(rs.number(0, "n"), 5.0);
    EXPECT_NEAR(rs.number(0, "frobenius"), 2.0, 1e-12);
    EXPECT_EQ(meta(rs, "command"), "frobenius");
    EXPECT_EQ(meta(rs, "version"), kVersion);
    EXPECT_EQ(meta(rs, "command_line"), cfg.command_line);
}

TEST(Harness, EdgeListGraph) {
    const std::filesystem::path path =
        std::filesystem::temp_directory_path() / "ctqw_harness_test_cycle5.txt";
    {
        std::ofstream out(path);
        out << "5\n0 1\n1 2\n2 3\n3 4\n0 4\n";
    }
    ScenarioConfig cfg;
    cfg.edges_path = path.string();
    const RecordSet fro = run_scenario("frobenius", cfg);
    EXPECT_EQ(std::get<std::string>(fro.rows()[0][0]), "edge_list");
    EXPECT_NEAR(fro.number(0, "frobenius"), 2.0, 1e-12);
    const RecordSet levels = run_scenario("spectrum", cfg);
    EXPECT_EQ(meta(levels, "method"), "numeric");
    EXPECT_EQ(levels.rows().size(), 3u);
    std::filesystem::remove(path);
}

TEST(Harness, QfiMaxProbeOnStar) {
    ScenarioConfig cfg = family(FamilyKind::star, 5);
    cfg.probe = ProbeSpec::max_qfi(EigvecChoice::complex_plus());
    cfg.t = Range::single(1.0);
    const RecordSet rs = run_scenario("qfi", cfg);
    EXPECT_EQ(rs.columns(), (std::vector<std::string>{"t", "qfi", "qfi_fidelity", "fidelity_reliable"}));
    ASSERT_EQ(rs.rows().size(), 1u);
    EXPECT_NEAR(rs.number(0, "qfi"), 625.0, 1e-9);
    EXPECT_NEAR(rs.number(0, "qfi_fidelity"), 625.0, 1e-3);
    EXPECT_EQ(rs.number(0, "fidelity_reliable"), 1.0);
}

TEST(Harness, SpectrumMethodAndLevels) {
    const RecordSet closed = run_scenario("spectrum", family(FamilyKind::star, 5));
    EXPECT_EQ(meta(closed, "method"), "closed_form");
    ASSERT_EQ(closed.rows().size(), 3u);
    EXPECT_NEAR(closed.number(0, "eigenvalue"), 0.0, 1e-12);
    EXPECT_NEAR(closed.number(1, "eigenvalue"), 1.0, 1e-12);
    EXPECT_EQ(closed.number(1, "multiplicity"), 3.0);
    EXPECT_NEAR(closed.number(2, "eigenvalue"), 5.0, 1e-12);
    ScenarioConfig cfg = family(FamilyKind::star, 5);
    cfg.numeric = true;
    const RecordSet numeric = run_scenario("spectrum", cfg);
    EXPECT_EQ(meta(numeric, "method"), "numeric");
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_NEAR(numeric.number(i, "eigenvalue"), closed.number(i, "eigenvalue"), 1e-10);
        EXPECT_EQ(numeric.number(i, "multiplicity"), closed.number(i, "multiplicity"));
    }
}

TEST(Harness, ProbRowOrderIsTimeVertexLambda) {
    ScenarioConfig cfg = family(FamilyKind::complete, 5);
    cfg.t = Range{0.0, 0.2, 0.1};
    cfg.lambda = Range{-0.2, 0.2, 0.2};
    cfg.offset = 1;
    const RecordSet rs = run_scenario("prob", cfg);
    ASSERT_EQ(rs.rows().size(), 3u * 5u * 3u);
    std::size_t row = 0;
    for (int it = 0; it < 3; ++it) {
        for (int v = 0; v < 5; ++v) {
            for (int il = 0; il < 3; ++il, ++row) {
                EXPECT_NEAR(rs.number(row, "t"), 0.1 * it, 1e-15);
                EXPECT_EQ(rs.number(row, "vertex"), v + 1.0);
                EXPECT_NEAR(rs.number(row, "lambda"), -0.2 + 0.2 * il, 1e-15);
            }
        }
    }
    EXPECT_EQ(meta(rs, "vertex_offset"), "1");
    // Complete graph at lambda* stays localized.
    EXPECT_NEAR(rs.number(3 * 5 * 2 + 0, "probability"), 1.0, 1e-12);
}

TEST(Harness, EvolveAmplitudesMatchProbabilities) {
    ScenarioConfig cfg = family(FamilyKind::cycle, 6);
    cfg.t = Range{0.0, 1.0, 0.5};
    cfg.lambda = Range::single(0.3);
    const RecordSet amp = run_scenario("evolve", cfg);
    const RecordSet prob = run_scenario("prob", cfg);
    ASSERT_EQ(amp.rows().size(), prob.rows().size());
    for (std::size_t i = 0; i < amp.rows().size(); ++i) {
        const double re = amp.number(i, "re"), im = amp.number(i, "im");
        EXPECT_NEAR(re * re + im * im, prob.number(i, "probability"), 1e-14);
    }
}

TEST(Harness, ScalarSweeps) {
    ScenarioConfig cfg = family(FamilyKind::complete, 5);
    cfg.t = Range::single(std::numbers::pi / 10.0);
    cfg.lambda = Range::single(0.2);
    const RecordSet coh = run_scenario("coherence", cfg);
    EXPECT_EQ(coh.columns(), (std::vector<std::string>{"t", "lambda", "coherence"}));
    EXPECT_NEAR(coh.number(0, "coherence"), 3.84, 1e-12);
    cfg.t = Range::single(0.0);
    const RecordSet ip = run_scenario("ipr", cfg);
    EXPECT_NEAR(ip.number(0, "ipr"), 1.0, 1e-14);
}

TEST(Harness, AverageProbability) {
    ScenarioConfig cfg = family(FamilyKind::complete, 5);
    cfg.lambda = Range::single(0.2);
    const RecordSet rs = run_scenario("avg-prob", cfg);
    ASSERT_EQ(rs.rows().size(), 5u);
    EXPECT_NEAR(rs.number(0, "probability"), 17.0 / 25.0, 1e-12);
    EXPECT_NEAR(rs.number(1, "probability"), 2.0 / 25.0, 1e-12);
}

TEST(Harness, VarianceIsCycleOnlyAndWarnsAtWavefront) {
    EXPECT_THROW(run_scenario("variance", family(FamilyKind::star, 5)), InvalidInput);
    ScenarioConfig cfg = family(FamilyKind::cycle, 20);
    const RecordSet early = run_scenario("variance", cfg);
    EXPECT_EQ(early.rows().size(), 51u);
    EXPECT_EQ(meta(early, "start"), "10");
    cfg.t = Range{0.0, 20.0, 1.0};
    const RecordSet late = run_scenario("variance", cfg);
    ASSERT_FALSE(late.warnings().empty());
    EXPECT_NE(late.warnings()[0].find("wavefront"), std::string::npos);
    EXPECT_EQ(late.number(late.rows().size() - 1, "wavefront"), 1.0);
}

TEST(Harness, PeriodRows) {
    EXPECT_THROW(run_scenario("period", family(FamilyKind::cycle, 5)), InvalidInput);
    ScenarioConfig cfg = family(FamilyKind::star, 5);
    cfg.lambda = Range::single(-3.0 / 23.0);
    const RecordSet rs = run_scenario("period", cfg);
    ASSERT_EQ(rs.rows().size(), 1u);
    EXPECT_EQ(rs.number(0, "periodic"), 1.0);
    EXPECT_EQ(std::get<std::string>(rs.rows()[0][rs.column_index("p")]), "2");
    EXPECT_EQ(std::get<std::string>(rs.rows()[0][rs.column_index("q")]), "2");
    EXPECT_NEAR(rs.number(0, "period"), 23.0 * std::numbers::pi / 10.0, 1e-12);
    EXPECT_EQ(std::get<std::string>(rs.rows()[0][rs.column_index("special_case")]), "none");
}

TEST(Harness, FiFlagsNonRegularPoints) {
    ScenarioConfig cfg = family(FamilyKind::complete, 5);
    cfg.t = Range{0.1, 0.3, 0.1};
    cfg.lambda = Range::single(0.2);
    const RecordSet regular = run_scenario("fi", cfg);
    EXPECT_TRUE(regular.warnings().empty());
    for (std::size_t i = 0; i < regular.rows().size(); ++i) {
        EXPECT_LE(regular.number(i, "fi"), regular.number(i, "qfi") + 1e-9);
    }
    cfg.t = Range::single(std::numbers::pi / 10.0);
    const RecordSet stalled = run_scenario("fi", cfg);
    ASSERT_EQ(stalled.warnings().size(), 1u);
    EXPECT_NE(stalled.warnings()[0].find("non-regular"), std::string::npos);
}

TEST(Harness, MaxQfiCheck) {
    const RecordSet complete = run_scenario("maxqfi-check", family(FamilyKind::complete, 5));
    EXPECT_EQ(complete.number(0, "is_max"), 1.0);
    EXPECT_NEAR(complete.number(0, "max_qfi_over_t2"), 625.0, 1e-9);
    const RecordSet cycle = run_scenario("maxqfi-check", family(FamilyKind::cycle, 5));
    EXPECT_EQ(cycle.number(0, "is_max"), 0.0);
    EXPECT_EQ(cycle.number(0, "complement_components"), 1.0);
}

TEST(Harness, EstimateRecordsSeedAndRejectsRanges) {
    ScenarioConfig cfg = family(FamilyKind::complete, 5);
    cfg.t = Range::single(0.1);
    cfg.lambda = Range::single(0.2);
    cfg.samples = 1000;
    cfg.trials = 20;
    cfg.seed = 11;
    const RecordSet a = run_scenario("estimate", cfg);
    EXPECT_EQ(meta(a, "seed"), "11");
    EXPECT_NE(meta(a, "bracket"), "<missing>");
    EXPECT_EQ(csv_text(a), csv_text(run_scenario("estimate", cfg)));
    cfg.t = Range{0.1, 0.2, 0.1};
    EXPECT_THROW(run_scenario("estimate", cfg), InvalidInput);
    cfg.t = Range::single(0.3);
    cfg.lambda = Range::single(-0.2);
    EXPECT_THROW(run_scenario("estimate", cfg), NonRegularPoint);
}

TEST(Harness, EveryFigureRunsOnAShortGrid) {
    for (const auto &fig : detail::figure_catalogue()) {
        ScenarioConfig cfg;
        cfg.figure = fig.id;
        cfg.t = Range{0.0, 0.5, 0.25};
        cfg.lambda = Range{-0.5, 0.5, 0.5};
        const RecordSet rs = run_scenario("figure", cfg);
        EXPECT_FALSE(rs.rows().empty()) << fig.id;
        EXPECT_EQ(meta(rs, "figure"), fig.id);
        EXPECT_EQ(meta(rs, "description"), fig.description);
    }
    ScenarioConfig bad;
    bad.figure = "fig99";
    EXPECT_THROW(run_scenario("figure", bad), InvalidInput);
}

TEST(Harness, Fig4IsIprAtLambdaPointTwo) {
    ScenarioConfig cfg;
    cfg.figure = "fig4";
    cfg.t = Range::single(0.0);
    const RecordSet rs = run_scenario("figure", cfg);
    EXPECT_EQ(rs.columns(), (std::vector<std::string>{"n", "t", "ipr"}));
    EXPECT_EQ(rs.rows().size(), detail::kFigureOrders.size());
    for (std::size_t i = 0; i < rs.rows().size(); ++i) {
        EXPECT_NEAR(rs.number(i, "ipr"), 1.0, 1e-14);
    }
}

TEST(Harness, OutputIndependentOfThreadCount) {
    ScenarioConfig cfg = family(FamilyKind::cycle, 7);
    cfg.t = Range{0.0, 2.0, 0.05};
    cfg.lambda = Range{-0.3, 0.3, 0.1};
    std::string serial, parallel;
    {
        ScopedThreads scope("1");
        serial = csv_text(run_scenario("prob", cfg)) + csv_text(run_scenario("fi", cfg));
    }
    {
        ScopedThreads scope("6");
        parallel = csv_text(run_scenario("prob", cfg)) + csv_text(run_scenario("fi", cfg));
    }
    EXPECT_EQ(serial, parallel);
}

TEST(Harness, SubcommandListIsComplete) {
    for (const std::string &name : subcommands()) {
        ScenarioConfig cfg = name == "variance" ? family(FamilyKind::cycle, 6) : family(FamilyKind::star, 5);
        cfg.t = Range::single(0.1);
        cfg.lambda = Range::single(0.2);
        cfg.samples = 1000;
        cfg.trials = 10;
        cfg.figure = "fig9";
        EXPECT_NO_THROW(run_scenario(name, cfg)) << name;
    }
}
