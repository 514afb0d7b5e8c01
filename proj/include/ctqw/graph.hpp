#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "error.hpp"
#include "matrix.hpp"

namespace ctqw {

using Vertex = std::size_t;
using Edge = std::pair<Vertex, Vertex>;

enum class FamilyKind { cycle, complete, star, path, wheel, complete_bipartite };

inline std::string_view to_string(FamilyKind kind) {
    switch (kind) {
    case FamilyKind::cycle: return "cycle";
    case FamilyKind::complete: return "complete";
    case FamilyKind::star: return "star";
    case FamilyKind::path: return "path";
    case FamilyKind::wheel: return "wheel";
    case FamilyKind::complete_bipartite: return "complete_bipartite";
    }
    return "unknown";
}

inline std::optional<FamilyKind> family_from_string(std::string_view name) {
    for (FamilyKind k : {FamilyKind::cycle, FamilyKind::complete, FamilyKind::star,
                         FamilyKind::path, FamilyKind::wheel, FamilyKind::complete_bipartite}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    return std::nullopt;
}

/// A named graph family plus its order. For complete_bipartite the two part
/// sizes are carried as well (order == part_a + part_b).
struct GraphFamily {
    FamilyKind kind = FamilyKind::complete;
    std::size_t order = 0;
    std::size_t part_a = 0;
    std::size_t part_b = 0;

    static GraphFamily of(FamilyKind kind, std::size_t n) { return {kind, n, 0, 0}; }
    static GraphFamily bipartite(std::size_t a, std::size_t b) {
        return {FamilyKind::complete_bipartite, a + b, a, b};
    }

    /// Smallest order the builder accepts.
    [[nodiscard]] std::size_t minimum_order() const {
        switch (kind) {
        case FamilyKind::cycle: return 3;
        case FamilyKind::star: return 2;
        case FamilyKind::wheel: return 4;
        case FamilyKind::complete_bipartite: return 2;
        case FamilyKind::complete:
        case FamilyKind::path: return 1;
        }
        return 1;
    }

    bool operator==(const GraphFamily &) const = default;
};

/// Undirected simple graph on vertices 0..n-1. Edges are stored normalized
/// (u < v) and sorted, so two graphs with the same edge set compare equal.
class Graph {
  public:
    Graph() = default;

    /// Validating constructor: loops, duplicates (in either orientation) and
    /// out-of-range endpoints are rejected.
    static Graph from_edges(std::size_t n, std::vector<Edge> edges) {
        detail::require(n >= 1, "graph needs at least one vertex");
        for (Edge &e : edges) {
            detail::require(e.first < n && e.second < n,
                            "edge endpoint out of range: (" + std::to_string(e.first) + "," +
                                std::to_string(e.second) + ")");
            detail::require(e.first != e.second,
                            "loop at vertex " + std::to_string(e.first));
            if (e.first > e.second) {
                std::swap(e.first, e.second);
            }
        }
        std::sort(edges.begin(), edges.end());
        const auto dup = std::adjacent_find(edges.begin(), edges.end());
        detail::require(dup == edges.end(),
                        dup == edges.end() ? std::string{}
                                           : "duplicate edge (" + std::to_string(dup->first) +
                                                 "," + std::to_string(dup->second) + ")");
        Graph g;
        g.n_ = n;
        g.edges_ = std::move(edges);
        return g;
    }

    [[nodiscard]] std::size_t order() const noexcept { return n_; }
    [[nodiscard]] const std::vector<Edge> &edges() const noexcept { return edges_; }
    [[nodiscard]] const std::optional<GraphFamily> &family() const noexcept { return family_; }

    [[nodiscard]] std::vector<std::size_t> degrees() const {
        std::vector<std::size_t> d(n_, 0);
        for (const auto &[u, v] : edges_) {
            ++d[u];
            ++d[v];
        }
        return d;
    }

    [[nodiscard]] std::size_t degree(Vertex v) const { return degrees().at(v); }

    [[nodiscard]] bool adjacent(Vertex u, Vertex v) const {
        if (u > v) {
            std::swap(u, v);
        }
        return std::binary_search(edges_.begin(), edges_.end(), Edge{u, v});
    }

    [[nodiscard]] std::vector<std::vector<Vertex>> adjacency_lists() const {
        std::vector<std::vector<Vertex>> adj(n_);
        for (const auto &[u, v] : edges_) {
            adj[u].push_back(v);
            adj[v].push_back(u);
        }
        return adj;
    }

    /// Equality is on (n, edge set); the family tag is informational.
    bool operator==(const Graph &other) const { return n_ == other.n_ && edges_ == other.edges_; }

    Graph &tag(GraphFamily family) {
        family_ = family;
        return *this;
    }

  private:
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::optional<GraphFamily> family_;
};

/// Canonical labelled member of a family: cycle in ring order, star and
/// wheel with hub 0, complete bipartite with parts {0..a-1} and {a..n-1}.
inline Graph build_family(const GraphFamily &family) {
    const std::size_t n = family.order;
    if (n < family.minimum_order()) {
        throw InvalidInput("invalid order " + std::to_string(n) + " for " +
                           std::string(to_string(family.kind)) + " graph (minimum " +
                           std::to_string(family.minimum_order()) + ")");
    }
    std::vector<Edge> edges;
    switch (family.kind) {
    case FamilyKind::cycle:
        for (Vertex k = 0; k < n; ++k) {
            edges.emplace_back(k, (k + 1) % n);
        }
        break;
    case FamilyKind::complete:
        for (Vertex j = 0; j < n; ++j) {
            for (Vertex k = j + 1; k < n; ++k) {
                edges.emplace_back(j, k);
            }
        }
        break;
    case FamilyKind::star:
        for (Vertex k = 1; k < n; ++k) {
            edges.emplace_back(0, k);
        }
        break;
    case FamilyKind::path:
        for (Vertex k = 0; k + 1 < n; ++k) {
            edges.emplace_back(k, k + 1);
        }
        break;
    case FamilyKind::wheel:
        for (Vertex k = 1; k < n; ++k) {
            edges.emplace_back(0, k);
            edges.emplace_back(k, k + 1 < n ? k + 1 : 1);
        }
        break;
    case FamilyKind::complete_bipartite:
        detail::require(family.part_a >= 1 && family.part_b >= 1 &&
                            family.part_a + family.part_b == n,
                        "complete bipartite parts must be >= 1 and sum to the order");
        for (Vertex u = 0; u < family.part_a; ++u) {
            for (Vertex v = family.part_a; v < n; ++v) {
                edges.emplace_back(u, v);
            }
        }
        break;
    }
    Graph g = Graph::from_edges(n, std::move(edges));
    g.tag(family);
    return g;
}

inline Graph build_family(FamilyKind kind, std::size_t n) {
    return build_family(GraphFamily::of(kind, n));
}

/// L = D - A.
inline SymMatrix laplacian(const Graph &g) {
    SymMatrix lap(g.order());
    for (const auto &[u, v] : g.edges()) {
        lap(u, v) = -1.0;
        lap(v, u) = -1.0;
        lap(u, u) += 1.0;
        lap(v, v) += 1.0;
    }
    return lap;
}

inline Graph complement(const Graph &g) {
    const std::size_t n = g.order();
    std::vector<Edge> edges;
    for (Vertex j = 0; j < n; ++j) {
        for (Vertex k = j + 1; k < n; ++k) {
            if (!g.adjacent(j, k)) {
                edges.emplace_back(j, k);
            }
        }
    }
    return Graph::from_edges(n, std::move(edges));
}

/// Number of connected components, by iterative depth-first traversal.
inline std::size_t connected_component_count(const Graph &g) {
    const auto adj = g.adjacency_lists();
    std::vector<bool> seen(g.order(), false);
    std::vector<Vertex> stack;
    std::size_t components = 0;
    for (Vertex root = 0; root < g.order(); ++root) {
        if (seen[root]) {
            continue;
        }
        ++components;
        seen[root] = true;
        stack.push_back(root);
        while (!stack.empty()) {
            const Vertex v = stack.back();
            stack.pop_back();
            for (Vertex w : adj[v]) {
                if (!seen[w]) {
                    seen[w] = true;
                    stack.push_back(w);
                }
            }
        }
    }
    return components;
}

/// Frobenius norm of L - L^2/N: how far the quadratic term is from a
/// rescaling of the free walk (zero exactly for the complete graph).
inline double frobenius_delta(const Graph &g) {
    const SymMatrix lap = laplacian(g);
    const SymMatrix delta = lap - (1.0 / static_cast<double>(g.order())) * (lap * lap);
    return delta.frobenius_norm();
}

} // namespace ctqw
