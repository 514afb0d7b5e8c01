#include <cmath>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "ctqw/edge_list.hpp"
#include "ctqw/graph.hpp"
#include "ctqw/spectrum.hpp"
#include "oracles.hpp"

using namespace ctqw;

namespace {

std::vector<Edge> edges_of(std::initializer_list<Edge> e) { return e; }

} // namespace

TEST(BuildFamily, CompleteThree) {
    const Graph g = build_family(FamilyKind::complete, 3);
    EXPECT_EQ(g.edges(), edges_of({{0, 1}, {0, 2}, {1, 2}}));
}

TEST(BuildFamily, StarFiveHubIsVertexZero) {
    const Graph g = build_family(FamilyKind::star, 5);
    EXPECT_EQ(g.edges(), edges_of({{0, 1}, {0, 2}, {0, 3}, {0, 4}}));
    EXPECT_EQ(g.degree(0), 4u);
    for (Vertex i = 1; i < 5; ++i) {
        EXPECT_EQ(g.degree(i), 1u);
    }
}

TEST(BuildFamily, CycleFiveRingOrder) {
    const Graph g = build_family(FamilyKind::cycle, 5);
    EXPECT_EQ(g.edges(), edges_of({{0, 1}, {0, 4}, {1, 2}, {2, 3}, {3, 4}}));
}

TEST(BuildFamily, WheelAndBipartite) {
    const Graph w = build_family(FamilyKind::wheel, 6);
    EXPECT_EQ(w.edges().size(), 10u);
    EXPECT_EQ(w.degree(0), 5u);
    const Graph b = build_family(GraphFamily::bipartite(2, 3));
    EXPECT_EQ(b.order(), 5u);
    EXPECT_EQ(b.edges().size(), 6u);
    EXPECT_FALSE(b.adjacent(0, 1));
    EXPECT_TRUE(b.adjacent(1, 4));
    const Graph p = build_family(FamilyKind::path, 4);
    EXPECT_EQ(p.edges(), edges_of({{0, 1}, {1, 2}, {2, 3}}));
}

TEST(BuildFamily, RejectsOrdersBelowMinimum) {
    EXPECT_THROW(build_family(FamilyKind::cycle, 2), InvalidInput);
    EXPECT_THROW(build_family(FamilyKind::star, 1), InvalidInput);
    EXPECT_THROW(build_family(FamilyKind::wheel, 3), InvalidInput);
    EXPECT_THROW(build_family(FamilyKind::complete, 0), InvalidInput);
    EXPECT_THROW(build_family(GraphFamily::bipartite(0, 3)), InvalidInput);
    EXPECT_NO_THROW(build_family(FamilyKind::cycle, 3));
    EXPECT_NO_THROW(build_family(FamilyKind::star, 2));
}

TEST(Graph, FromEdgesRejectsMalformedInput) {
    EXPECT_THROW(Graph::from_edges(3, {{0, 0}}), InvalidInput);
    EXPECT_THROW(Graph::from_edges(3, {{0, 1}, {1, 0}}), InvalidInput);
    EXPECT_THROW(Graph::from_edges(3, {{0, 3}}), InvalidInput);
    EXPECT_THROW(Graph::from_edges(0, {}), InvalidInput);
    const Graph g = Graph::from_edges(3, {{2, 0}});
    EXPECT_EQ(g.edges(), edges_of({{0, 2}}));
}

TEST(Laplacian, CompleteThree) {
    const SymMatrix l = laplacian(build_family(FamilyKind::complete, 3));
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            EXPECT_EQ(l(i, j), i == j ? 2.0 : -1.0);
        }
    }
}

TEST(Laplacian, StarFive) {
    const SymMatrix l = laplacian(build_family(FamilyKind::star, 5));
    EXPECT_EQ(l(0, 0), 4.0);
    for (std::size_t i = 1; i < 5; ++i) {
        EXPECT_EQ(l(i, i), 1.0);
        EXPECT_EQ(l(0, i), -1.0);
        EXPECT_EQ(l(i, 0), -1.0);
    }
}

TEST(Laplacian, CycleFive) {
    const SymMatrix l = laplacian(build_family(FamilyKind::cycle, 5));
    for (std::size_t k = 0; k < 5; ++k) {
        EXPECT_EQ(l(k, k), 2.0);
        EXPECT_EQ(l(k, (k + 1) % 5), -1.0);
        EXPECT_EQ(l(k, (k + 4) % 5), -1.0);
        EXPECT_EQ(l(k, (k + 2) % 5), 0.0);
    }
}

TEST(Laplacian, RowSumsVanishAndUniformVectorIsKernel) {
    for (FamilyKind kind : {FamilyKind::cycle, FamilyKind::complete, FamilyKind::star,
                            FamilyKind::path, FamilyKind::wheel}) {
        for (std::size_t n = 4; n <= 20; ++n) {
            const SymMatrix l = laplacian(build_family(kind, n));
            const CVector u = detail::uniform_vector(n);
            const CVector lu = l.apply(u);
            for (std::size_t i = 0; i < n; ++i) {
                double row = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    row += l(i, j);
                }
                EXPECT_EQ(row, 0.0);
                EXPECT_LE(std::abs(lu[i]), 1e-12);
            }
        }
    }
}

TEST(Complement, CompleteIsEdgeless) {
    const Graph c = complement(build_family(FamilyKind::complete, 6));
    EXPECT_TRUE(c.edges().empty());
    EXPECT_EQ(connected_component_count(c), 6u);
}

TEST(Complement, StarFiveIsK4PlusIsolatedHub) {
    const Graph c = complement(build_family(FamilyKind::star, 5));
    EXPECT_EQ(c.edges(), edges_of({{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}}));
    EXPECT_EQ(c.degree(0), 0u);
    EXPECT_EQ(connected_component_count(c), 2u);
}

TEST(Complement, CycleFiveIsPentagram) {
    const Graph c = complement(build_family(FamilyKind::cycle, 5));
    // Ring 0-2-4-1-3-0.
    EXPECT_EQ(c.edges(), edges_of({{0, 2}, {0, 3}, {1, 3}, {1, 4}, {2, 4}}));
    EXPECT_EQ(connected_component_count(c), 1u);
}

TEST(Complement, InvolutionOnFamiliesUpToTwelve) {
    for (FamilyKind kind : {FamilyKind::cycle, FamilyKind::complete, FamilyKind::star,
                            FamilyKind::path, FamilyKind::wheel}) {
        for (std::size_t n = GraphFamily::of(kind, 1).minimum_order(); n <= 12; ++n) {
            const Graph g = build_family(kind, n);
            EXPECT_EQ(complement(complement(g)), g) << to_string(kind) << " " << n;
        }
    }
    for (std::size_t a = 1; a <= 6; ++a) {
        for (std::size_t b = 1; a + b <= 12; ++b) {
            const Graph g = build_family(GraphFamily::bipartite(a, b));
            EXPECT_EQ(complement(complement(g)), g);
        }
    }
}

TEST(Complement, MatchesPairEnumerationOnRandomGraphs) {
    oracle::Rng rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + rng.below(12);
        const Graph g = oracle::random_graph(rng, n, rng.uniform(0.0, 1.0));
        const auto expected = oracle::complement_edges(g);
        const Graph c = complement(g);
        EXPECT_EQ(std::set<Edge>(c.edges().begin(), c.edges().end()), expected);
        EXPECT_EQ(connected_component_count(g), oracle::components(n, {g.edges().begin(), g.edges().end()}));
        EXPECT_EQ(connected_component_count(c), oracle::components(n, expected));
    }
}

TEST(ConnectedComponents, Examples) {
    EXPECT_EQ(connected_component_count(build_family(FamilyKind::complete, 5)), 1u);
    EXPECT_EQ(connected_component_count(complement(build_family(FamilyKind::complete, 5))), 5u);
    EXPECT_EQ(connected_component_count(complement(build_family(FamilyKind::star, 5))), 2u);
    EXPECT_EQ(connected_component_count(complement(build_family(FamilyKind::cycle, 4))), 2u);
}

TEST(FrobeniusDelta, Examples) {
    EXPECT_NEAR(frobenius_delta(build_family(FamilyKind::complete, 5)), 0.0, 1e-12);
    EXPECT_NEAR(frobenius_delta(build_family(FamilyKind::cycle, 5)), 2.0, 1e-12);
    EXPECT_NEAR(frobenius_delta(build_family(FamilyKind::star, 5)), std::sqrt(1.92), 1e-12);
}

TEST(FrobeniusDelta, ClosedFormsOverOrders) {
    for (std::size_t n = 5; n <= 64; ++n) {
        const double big_n = static_cast<double>(n);
        const double cycle = std::sqrt(6.0 * big_n - 40.0 + 70.0 / big_n);
        const double star = std::sqrt(big_n - 4.0 + 5.0 / big_n - 2.0 / (big_n * big_n));
        EXPECT_NEAR(frobenius_delta(build_family(FamilyKind::cycle, n)) / cycle, 1.0, 1e-12);
        EXPECT_NEAR(frobenius_delta(build_family(FamilyKind::star, n)) / star, 1.0, 1e-12);
        EXPECT_NEAR(frobenius_delta(build_family(FamilyKind::complete, n)), 0.0, 1e-12);
    }
    for (std::size_t n = 2; n < 5; ++n) {
        const double big_n = static_cast<double>(n);
        const double star = std::sqrt(big_n - 4.0 + 5.0 / big_n - 2.0 / (big_n * big_n));
        EXPECT_NEAR(frobenius_delta(build_family(FamilyKind::star, n)), star, 1e-12);
    }
}

TEST(EdgeList, RoundTripIsByteIdentical) {
    oracle::Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const Graph g = oracle::random_graph(rng, 1 + rng.below(15), 0.4);
        std::ostringstream first;
        write_edge_list(g, first);
        std::istringstream in(first.str());
        const Graph back = read_edge_list(in);
        EXPECT_EQ(back, g);
        std::ostringstream second;
        write_edge_list(back, second);
        EXPECT_EQ(first.str(), second.str());
    }
}

TEST(EdgeList, CommentsAndBlankLines) {
    std::istringstream in("# a triangle\n\n3\n0 1   # first\n1 2\n\n0 2\n");
    const Graph g = read_edge_list(in);
    EXPECT_EQ(g, build_family(FamilyKind::complete, 3));
}

TEST(EdgeList, RejectsMalformedInput) {
    const auto parse = [](const std::string &text) {
        std::istringstream in(text);
        return read_edge_list(in);
    };
    EXPECT_THROW(parse(""), InvalidInput);
    EXPECT_THROW(parse("3\n1 1\n"), InvalidInput);
    EXPECT_THROW(parse("3\n1 0\n"), InvalidInput);
    EXPECT_THROW(parse("3\n0 1\n0 1\n"), InvalidInput);
    EXPECT_THROW(parse("3\n0 3\n"), InvalidInput);
    EXPECT_THROW(parse("3\n0 x\n"), InvalidInput);
    EXPECT_THROW(parse("3\n0 1 2\n"), InvalidInput);
    EXPECT_THROW(parse("3 4\n"), InvalidInput);
    EXPECT_THROW(parse("0\n"), InvalidInput);
    EXPECT_THROW(parse("3\n-1 2\n"), InvalidInput);
    EXPECT_EQ(parse("4\n").edges().size(), 0u);
}

TEST(EdgeList, MissingFileIsReported) {
    EXPECT_THROW(read_edge_list_file("/nonexistent/graph.txt"), InvalidInput);
}
