#pragma once

#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "error.hpp"
#include "graph.hpp"

namespace ctqw {

// Edge-list text format:
//   first content line      N
//   every further line      u v      (0 <= u < v < N)
// '#' starts a comment, blank lines are ignored. The writer emits exactly
// this form with edges in sorted order, so write(read(write(g))) is
// byte-identical to write(g).

inline Graph read_edge_list(std::istream &in) {
    std::string line;
    std::size_t line_no = 0;
    std::optional<std::size_t> order;
    std::vector<Edge> edges;

    const auto fail = [&](const std::string &what) {
        throw InvalidInput("edge list line " + std::to_string(line_no) + ": " + what);
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream fields(line);
        std::string token;
        std::vector<std::string> tokens;
        while (fields >> token) {
            tokens.push_back(token);
        }
        if (tokens.empty()) {
            continue;
        }
        std::vector<std::size_t> values;
        for (const std::string &tok : tokens) {
            if (tok.find_first_not_of("0123456789") != std::string::npos) {
                fail("expected non-negative integer, got '" + tok + "'");
            }
            try {
                values.push_back(std::stoull(tok));
            } catch (const std::exception &) {
                fail("integer out of range '" + tok + "'");
            }
        }
        if (!order) {
            if (values.size() != 1) {
                fail("first line must hold the vertex count only");
            }
            if (values[0] == 0) {
                fail("vertex count must be positive");
            }
            order = values[0];
            continue;
        }
        if (values.size() != 2) {
            fail("expected 'u v'");
        }
        if (!(values[0] < values[1])) {
            fail("edge endpoints must satisfy u < v");
        }
        if (values[1] >= *order) {
            fail("vertex " + std::to_string(values[1]) + " out of range");
        }
        edges.emplace_back(values[0], values[1]);
    }
    if (!order) {
        throw InvalidInput("edge list is empty");
    }
    return Graph::from_edges(*order, std::move(edges));
}

inline void write_edge_list(const Graph &g, std::ostream &out) {
    out << g.order() << '\n';
    for (const auto &[u, v] : g.edges()) {
        out << u << ' ' << v << '\n';
    }
}

inline Graph read_edge_list_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidInput("cannot open edge list '" + path + "'");
    }
    return read_edge_list(in);
}

inline void write_edge_list_file(const Graph &g, const std::string &path) {
    std::ofstream out(path);
    if (!out) {
        throw InvalidInput("cannot write edge list '" + path + "'");
    }
    write_edge_list(g, out);
    if (!out) {
        throw InvalidInput("write failed for '" + path + "'");
    }
}

} // namespace ctqw
