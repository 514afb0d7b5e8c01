#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "crb.hpp"
#include "dynamics.hpp"
#include "edge_list.hpp"
#include "error.hpp"
#include "fisher.hpp"
#include "graph.hpp"
#include "parallel.hpp"
#include "periodicity.hpp"
#include "records.hpp"
#include "spectrum.hpp"
#include "walk.hpp"

namespace ctqw {

/// Inclusive arithmetic grid min, min + step, ..., up to max.
struct Range {
    double min = 0.0;
    double max = 0.0;
    double step = 1.0;

    static Range single(double v) { return {v, v, 1.0}; }

    [[nodiscard]] std::vector<double> values() const {
        detail::require(std::isfinite(min) && std::isfinite(max) && std::isfinite(step),
                        "range bounds must be finite");
        detail::require(step > 0.0, "range step must be positive");
        detail::require(max >= min, "range is empty (max < min)");
        const auto count = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
        detail::require(count <= 10'000'000, "range has too many points");
        std::vector<double> out(count);
        for (std::size_t i = 0; i < count; ++i) {
            out[i] = min + step * static_cast<double>(i);
        }
        return out;
    }
};

inline const Range kDefaultTimeGrid{0.0, 10.0, 0.01};
inline const Range kDefaultLambdaGrid{-1.0, 1.0, 0.01};

struct ScenarioConfig {
    std::optional<FamilyKind> family;
    std::size_t n = 0;
    /// Part sizes for complete_bipartite.
    std::size_t part_a = 0;
    std::size_t part_b = 0;
    std::string edges_path;
    /// Force the numeric eigensolver even for families with a tabulated spectrum.
    bool numeric = false;

    std::optional<Range> lambda;
    std::optional<Range> t;
    ProbeSpec probe = ProbeSpec::localized(0);
    /// The localized probe vertex was given explicitly.
    bool vertex_given = false;
    FiMode mode = FiMode::exact;

    std::uint64_t seed = 0;
    std::size_t samples = 10'000;
    std::size_t trials = 200;
    /// Added to every vertex label on output.
    std::size_t offset = 0;

    std::string figure;
    std::string command_line;
};

namespace detail {

inline Graph scenario_graph(const ScenarioConfig &cfg) {
    if (!cfg.edges_path.empty()) {
        require(!cfg.family, "give either a family or an edge list, not both");
        return read_edge_list_file(cfg.edges_path);
    }
    require(cfg.family.has_value(), "a graph is required (--family or --edges)");
    if (*cfg.family == FamilyKind::complete_bipartite) {
        require(cfg.part_a >= 1 && cfg.part_b >= 1, "complete_bipartite needs --parts A B");
        require(cfg.n == 0 || cfg.n == cfg.part_a + cfg.part_b, "--n must equal the part sum");
        return build_family(GraphFamily::bipartite(cfg.part_a, cfg.part_b));
    }
    return build_family(GraphFamily::of(*cfg.family, cfg.n));
}

inline bool has_closed_form(FamilyKind k) {
    return k == FamilyKind::cycle || k == FamilyKind::complete || k == FamilyKind::star;
}

inline PerturbedWalk scenario_walk(const ScenarioConfig &cfg, double lambda = 0.0) {
    const Graph g = scenario_graph(cfg);
    if (g.family() && has_closed_form(g.family()->kind) && !cfg.numeric) {
        return {g, spectrum_closed_form(*g.family(), cfg.probe.choice), lambda};
    }
    return PerturbedWalk::numeric(g, lambda);
}

inline std::string graph_label(const Graph &g) {
    if (!g.family()) {
        return "edge_list";
    }
    return std::string(to_string(g.family()->kind));
}

inline void describe(RecordSet &rs, const std::string &command, const ScenarioConfig &cfg,
                     const Graph *g) {
    rs.set_meta("command", command);
    rs.set_meta("version", kVersion);
    if (!cfg.command_line.empty()) {
        rs.set_meta("command_line", cfg.command_line);
    }
    if (g) {
        rs.set_meta("graph", graph_label(*g));
        rs.set_meta("n", std::to_string(g->order()));
    }
    if (cfg.offset != 0) {
        rs.set_meta("vertex_offset", std::to_string(cfg.offset));
    }
}

inline double vertex_label(Vertex v, const ScenarioConfig &cfg) {
    return static_cast<double>(v + cfg.offset);
}

/// Evaluates fn(i) for i < count in parallel, results in index order.
template <class T, class Fn>
std::vector<T> grid_map(std::size_t count, Fn &&fn) {
    std::vector<T> out(count);
    parallel_for(count, [&](std::size_t i) { out[i] = fn(i); });
    return out;
}

/// Non-regular FI points are reported, never dropped.
inline void warn_non_regular(RecordSet &rs, std::size_t count, const std::string &where) {
    if (count > 0) {
        rs.add_warning(std::to_string(count) + " point(s) with FI below " +
                       format_double(kRegularFisherFloor) + " (non-regular model)" + where);
    }
}

// --- subcommands -----------------------------------------------------------

inline RecordSet run_spectrum(const ScenarioConfig &cfg) {
    const PerturbedWalk w = scenario_walk(cfg);
    RecordSet rs({"level", "eigenvalue", "multiplicity"});
    describe(rs, "spectrum", cfg, &w.graph());
    const bool closed = w.graph().family() && has_closed_form(w.graph().family()->kind) && !cfg.numeric;
    rs.set_meta("method", closed ? "closed_form" : "numeric");
    const auto &levels = w.spectrum().levels();
    for (std::size_t i = 0; i < levels.size(); ++i) {
        rs.add_row({static_cast<double>(i), levels[i].value,
                    static_cast<double>(levels[i].multiplicity())});
    }
    return rs;
}

/// Shared driver for per-(t, lambda) state quantities.
template <class Fn>
void state_sweep(const ScenarioConfig &cfg, const PerturbedWalk &w, Fn &&emit_rows) {
    const std::vector<double> ts = cfg.t.value_or(kDefaultTimeGrid).values();
    const std::vector<double> ls = cfg.lambda.value_or(Range::single(0.0)).values();
    const WalkerState psi0 = prepare_probe(w, cfg.probe);
    const auto states = grid_map<WalkerState>(ts.size() * ls.size(), [&](std::size_t i) {
        const double t = ts[i / ls.size()];
        const double lambda = ls[i % ls.size()];
        return WalkerState(propagate(w.spectrum(), lambda, psi0.amplitudes(), t), t);
    });
    emit_rows(ts, ls, states);
}

inline RecordSet run_evolve(const ScenarioConfig &cfg, bool probabilities) {
    const PerturbedWalk w = scenario_walk(cfg);
    RecordSet rs(probabilities ? std::vector<std::string>{"t", "vertex", "lambda", "probability"}
                               : std::vector<std::string>{"t", "vertex", "lambda", "re", "im"});
    describe(rs, probabilities ? "prob" : "evolve", cfg, &w.graph());
    rs.set_meta("probe", to_string(cfg.probe));
    state_sweep(cfg, w, [&](const auto &ts, const auto &ls, const auto &states) {
        for (std::size_t it = 0; it < ts.size(); ++it) {
            std::vector<ProbDist> dists;
            if (probabilities) {
                for (std::size_t il = 0; il < ls.size(); ++il) {
                    dists.push_back(probability_distribution(states[it * ls.size() + il]));
                }
            }
            for (Vertex v = 0; v < w.order(); ++v) {
                for (std::size_t il = 0; il < ls.size(); ++il) {
                    if (probabilities) {
                        rs.add_row({ts[it], vertex_label(v, cfg), ls[il], dists[il][v]});
                    } else {
                        const Complex z = states[it * ls.size() + il].amplitudes()[v];
                        rs.add_row({ts[it], vertex_label(v, cfg), ls[il], z.real(), z.imag()});
                    }
                }
            }
        }
    });
    return rs;
}

inline RecordSet run_scalar_sweep(const ScenarioConfig &cfg, const std::string &command,
                                  const std::string &column,
                                  const std::function<double(const WalkerState &)> &f) {
    const PerturbedWalk w = scenario_walk(cfg);
    RecordSet rs({"t", "lambda", column});
    describe(rs, command, cfg, &w.graph());
    rs.set_meta("probe", to_string(cfg.probe));
    state_sweep(cfg, w, [&](const auto &ts, const auto &ls, const auto &states) {
        for (std::size_t i = 0; i < states.size(); ++i) {
            rs.add_row({ts[i / ls.size()], ls[i % ls.size()], f(states[i])});
        }
    });
    return rs;
}

inline RecordSet run_avg_prob(const ScenarioConfig &cfg) {
    const PerturbedWalk w = scenario_walk(cfg);
    const std::vector<double> ls = cfg.lambda.value_or(Range::single(0.0)).values();
    RecordSet rs({"vertex", "lambda", "probability"});
    describe(rs, "avg-prob", cfg, &w.graph());
    rs.set_meta("probe", to_string(cfg.probe));
    const WalkerState psi0 = prepare_probe(w, cfg.probe);
    std::vector<ProbDist> dists;
    for (double lambda : ls) {
        dists.push_back(average_probability(w.with_lambda(lambda), psi0));
    }
    for (Vertex v = 0; v < w.order(); ++v) {
        for (std::size_t il = 0; il < ls.size(); ++il) {
            rs.add_row({vertex_label(v, cfg), ls[il], dists[il][v]});
        }
    }
    return rs;
}

inline RecordSet run_variance(const ScenarioConfig &cfg) {
    const PerturbedWalk w = scenario_walk(cfg);
    require(w.graph().family() && w.graph().family()->kind == FamilyKind::cycle,
            "variance is defined for the cycle family");
    const std::vector<double> ts = cfg.t.value_or(Range{0.0, 0.5, 0.01}).values();
    const std::vector<double> ls = cfg.lambda.value_or(Range::single(0.0)).values();
    std::optional<Vertex> start;
    if (cfg.probe.kind == ProbeSpec::Kind::localized && cfg.vertex_given) {
        start = cfg.probe.vertex;
    }
    RecordSet rs({"t", "lambda", "empirical", "model", "wavefront"});
    describe(rs, "variance", cfg, &w.graph());
    rs.set_meta("start", std::to_string(start.value_or(w.order() / 2) + cfg.offset));
    std::map<std::size_t, double> first_warning;
    const auto results = grid_map<CycleVariance>(ts.size() * ls.size(), [&](std::size_t i) {
        return cycle_variance(w.with_lambda(ls[i % ls.size()]), ts[i / ls.size()], start);
    });
    for (std::size_t i = 0; i < results.size(); ++i) {
        const CycleVariance &v = results[i];
        rs.add_row({ts[i / ls.size()], ls[i % ls.size()], v.empirical, v.short_time_model,
                    v.wavefront_warning ? 1.0 : 0.0});
        if (v.wavefront_warning && !first_warning.count(i % ls.size())) {
            first_warning[i % ls.size()] = ts[i / ls.size()];
        }
    }
    for (const auto &[il, t] : first_warning) {
        rs.add_warning("wavefront reached vertex 0 or N-1 from t = " + format_double(t) +
                       " at lambda = " + format_double(ls[il]) + "; short-time model invalid");
    }
    return rs;
}

inline RecordSet run_period(const ScenarioConfig &cfg) {
    require(cfg.family == FamilyKind::star, "period analysis is defined for the star family");
    require(cfg.n >= 2, "star needs N >= 2");
    const std::vector<double> ls = cfg.lambda.value_or(Range::single(0.0)).values();
    RecordSet rs({"lambda", "periodic", "p", "q", "period", "special_case"});
    describe(rs, "period", cfg, nullptr);
    rs.set_meta("graph", "star");
    rs.set_meta("n", std::to_string(cfg.n));
    for (double lambda : ls) {
        const PeriodReport r = star_periodicity(cfg.n, lambda);
        rs.add_row({lambda, r.periodic ? 1.0 : 0.0, r.p ? to_string(*r.p) : std::string("none"),
                    r.q ? to_string(*r.q) : std::string("none"),
                    r.period ? Cell(*r.period) : Cell(std::string("none")),
                    r.special_case ? std::string(to_string(*r.special_case)) : std::string("none")});
    }
    return rs;
}

inline RecordSet run_qfi(const ScenarioConfig &cfg) {
    const PerturbedWalk w = scenario_walk(cfg);
    const std::vector<double> ts = cfg.t.value_or(Range::single(1.0)).values();
    RecordSet rs({"t", "qfi", "qfi_fidelity", "fidelity_reliable"});
    describe(rs, "qfi", cfg, &w.graph());
    rs.set_meta("probe", to_string(cfg.probe));
    const WalkerState psi0 = prepare_probe(w, cfg.probe);
    std::size_t unreliable = 0;
    for (double t : ts) {
        const FidelityQfi f = qfi_fidelity_limit(w, psi0, t);
        unreliable += f.reliable ? 0 : 1;
        rs.add_row({t, qfi_variance_formula(w, psi0, t), f.value, f.reliable ? 1.0 : 0.0});
    }
    if (unreliable > 0) {
        rs.add_warning(std::to_string(unreliable) +
                       " fidelity-limit value(s) lost to cancellation (marked unreliable)");
    }
    return rs;
}

inline RecordSet run_fi(const ScenarioConfig &cfg) {
    const PerturbedWalk w = scenario_walk(cfg);
    const std::vector<double> ts = cfg.t.value_or(kDefaultTimeGrid).values();
    const std::vector<double> ls = cfg.lambda.value_or(Range::single(0.0)).values();
    RecordSet rs({"t", "lambda", "fi", "qfi"});
    describe(rs, "fi", cfg, &w.graph());
    rs.set_meta("probe", to_string(cfg.probe));
    rs.set_meta("mode", to_string(cfg.mode));
    const WalkerState psi0 = prepare_probe(w, cfg.probe);
    const auto fi = grid_map<double>(ts.size() * ls.size(), [&](std::size_t i) {
        return fi_position(w, cfg.probe, ts[i / ls.size()], ls[i % ls.size()], cfg.mode);
    });
    std::size_t non_regular = 0;
    for (std::size_t i = 0; i < fi.size(); ++i) {
        const double t = ts[i / ls.size()];
        if (t > 0.0 && fi[i] < kRegularFisherFloor) {
            ++non_regular;
        }
        rs.add_row({t, ls[i % ls.size()], fi[i], qfi_variance_formula(w, psi0, t)});
    }
    warn_non_regular(rs, non_regular, "");
    return rs;
}

inline RecordSet run_maxqfi_check(const ScenarioConfig &cfg) {
    const Graph g = scenario_graph(cfg);
    const MaxQfiVerdict v = max_qfi_graph_predicate(g);
    RecordSet rs({"graph", "n", "is_max", "mu_max", "complement_components", "max_qfi_over_t2"});
    describe(rs, "maxqfi-check", cfg, &g);
    const double mu2 = v.mu_max * v.mu_max;
    rs.add_row({graph_label(g), static_cast<double>(g.order()), v.is_max ? 1.0 : 0.0, v.mu_max,
                static_cast<double>(connected_component_count(complement(g))), mu2 * mu2});
    return rs;
}

inline RecordSet run_frobenius(const ScenarioConfig &cfg) {
    const Graph g = scenario_graph(cfg);
    RecordSet rs({"graph", "n", "frobenius"});
    describe(rs, "frobenius", cfg, &g);
    rs.add_row({graph_label(g), static_cast<double>(g.order()), frobenius_delta(g)});
    return rs;
}

inline RecordSet run_estimate(const ScenarioConfig &cfg) {
    const Range tr = cfg.t.value_or(Range::single(1.0));
    const Range lr = cfg.lambda.value_or(Range::single(0.0));
    require(tr.values().size() == 1 && lr.values().size() == 1,
            "estimate takes a single --t and --lambda");
    const PerturbedWalk w = scenario_walk(cfg);
    const CRBReport r = crb_monte_carlo(w, cfg.probe, tr.min, lr.min, cfg.samples, cfg.trials, cfg.seed);
    RecordSet rs({"t", "lambda", "n_samples", "n_trials", "estimator_mean", "estimator_variance",
                  "crb_classical", "crb_quantum", "variance_over_crb", "fi", "qfi",
                  "boundary_hits"});
    describe(rs, "estimate", cfg, &w.graph());
    rs.set_meta("probe", to_string(cfg.probe));
    rs.set_meta("seed", std::to_string(r.seed));
    rs.set_meta("bracket", format_double(r.bracket_lo) + " " + format_double(r.bracket_hi));
    rs.add_row({r.t, r.lambda_true, static_cast<double>(r.n_samples),
                static_cast<double>(r.n_trials), r.estimator_mean, r.estimator_variance,
                r.crb_classical, r.crb_quantum, r.estimator_variance / r.crb_classical, r.fisher,
                r.qfi, static_cast<double>(r.boundary_hits)});
    if (r.boundary_hits > 0) {
        rs.add_warning(std::to_string(r.boundary_hits) +
                       " estimate(s) at the edge of the search bracket");
    }
    return rs;
}

// --- figures ---------------------------------------------------------------

struct FigureInfo {
    const char *id;
    const char *description;
};

inline const std::vector<FigureInfo> &figure_catalogue() {
    static const std::vector<FigureInfo> figures = {
        {"fig2", "cycle N=5, lambda=0.2, walker from vertex 2: P(k,t)"},
        {"fig3", "cycle N=100, t=4, walker from vertex 50: P(k) over lambda"},
        {"fig4", "cycle IPR for several N, lambda=0.2"},
        {"fig5", "cycle N=5 coherence over (t, lambda)"},
        {"fig6", "complete N=5, lambda=0.2: P(start,t) and P(other,t)"},
        {"fig7", "complete IPR for several N, lambda=0.2"},
        {"fig8", "complete N=5 coherence over (t, lambda >= -1/N)"},
        {"fig9", "star N=5, lambda=0.2, walker from vertex 1: centre, start, other"},
        {"fig10", "star IPR for several N, lambda=0.2, walker from vertex 1"},
        {"fig11", "star N=5 coherence over (t, lambda), walker from vertex 1"},
        {"fig12", "cycle N=5 localized probe: QFI and FI"},
        {"fig13", "complete N=5 localized probe: QFI and FI"},
        {"fig14", "star N=5 outer-vertex probe: QFI and FI"},
        {"fig15", "cycle N=5 maximum-QFI probes with cos/sin top vectors: QFI and FI"},
        {"fig16", "complete N=5 probes l=1, l=N-1 and star maximum probe: QFI and FI"},
    };
    return figures;
}

inline const std::vector<double> kFigureLambdas = {-0.5, -0.2, 0.0, 0.2, 0.5};
inline const std::vector<std::size_t> kFigureOrders = {3, 4, 5, 8, 16, 32};

inline ScenarioConfig figure_base(const ScenarioConfig &cfg, FamilyKind family, std::size_t n) {
    ScenarioConfig out;
    out.family = family;
    out.n = n;
    out.t = cfg.t.value_or(kDefaultTimeGrid);
    out.offset = cfg.offset;
    return out;
}

inline RecordSet figure_ipr(const ScenarioConfig &cfg, FamilyKind family, Vertex start) {
    RecordSet rs({"n", "t", "ipr"});
    for (std::size_t n : kFigureOrders) {
        ScenarioConfig c = figure_base(cfg, family, n);
        c.lambda = Range::single(0.2);
        c.probe = ProbeSpec::localized(start);
        const RecordSet part =
            run_scalar_sweep(c, "ipr", "ipr", [](const WalkerState &s) { return ipr(probability_distribution(s)); });
        for (std::size_t i = 0; i < part.rows().size(); ++i) {
            rs.add_row({static_cast<double>(n), part.number(i, "t"), part.number(i, "ipr")});
        }
    }
    return rs;
}

inline RecordSet figure_coherence(const ScenarioConfig &cfg, FamilyKind family, Vertex start,
                                  double lambda_min) {
    ScenarioConfig c = figure_base(cfg, family, 5);
    const Range lg = cfg.lambda.value_or(kDefaultLambdaGrid);
    c.lambda = Range{std::max(lg.min, lambda_min), lg.max, lg.step};
    c.probe = ProbeSpec::localized(start);
    return run_scalar_sweep(c, "coherence", "coherence",
                            [](const WalkerState &s) { return coherence(s); });
}

/// Probability groups for the complete and star figures, one column each.
inline RecordSet figure_groups(const ScenarioConfig &cfg, FamilyKind family, Vertex start,
                               const std::vector<std::pair<std::string, Vertex>> &groups) {
    std::vector<std::string> columns = {"t"};
    for (const auto &g : groups) {
        columns.push_back(g.first);
    }
    RecordSet rs(columns);
    ScenarioConfig c = figure_base(cfg, family, 5);
    c.lambda = Range::single(0.2);
    c.probe = ProbeSpec::localized(start);
    const PerturbedWalk w = scenario_walk(c, 0.2);
    const std::vector<double> ts = c.t->values();
    const auto dists = grid_map<ProbDist>(ts.size(), [&](std::size_t i) {
        return probability_distribution(evolve(w, WalkerState::localized(5, start), ts[i]));
    });
    for (std::size_t i = 0; i < ts.size(); ++i) {
        std::vector<Cell> row = {ts[i]};
        for (const auto &g : groups) {
            row.emplace_back(dists[i][g.second]);
        }
        rs.add_row(std::move(row));
    }
    return rs;
}

inline RecordSet figure_fisher(const ScenarioConfig &cfg,
                               const std::vector<std::tuple<std::string, FamilyKind, ProbeSpec>> &cases) {
    const bool several = cases.size() > 1;
    std::vector<std::string> columns;
    if (several) {
        columns = {"graph", "probe"};
    }
    for (const char *c : {"t", "lambda", "qfi", "fi"}) {
        columns.emplace_back(c);
    }
    RecordSet rs(columns);
    std::size_t non_regular = 0;
    for (const auto &[label, family, probe] : cases) {
        ScenarioConfig c = figure_base(cfg, family, 5);
        c.probe = probe;
        c.lambda = Range::single(0.0);
        const PerturbedWalk w = scenario_walk(c);
        const WalkerState psi0 = prepare_probe(w, probe);
        const std::vector<double> ts = c.t->values();
        const std::vector<double> &ls = kFigureLambdas;
        const auto fi = grid_map<double>(ts.size() * ls.size(), [&](std::size_t i) {
            return fi_state(w, psi0, ts[i / ls.size()], ls[i % ls.size()], FiMode::exact);
        });
        for (std::size_t i = 0; i < fi.size(); ++i) {
            const double t = ts[i / ls.size()];
            if (t > 0.0 && fi[i] < kRegularFisherFloor) {
                ++non_regular;
            }
            std::vector<Cell> row;
            if (several) {
                row = {std::string(to_string(family)), label};
            }
            for (double x : {t, ls[i % ls.size()], qfi_variance_formula(w, psi0, t), fi[i]}) {
                row.emplace_back(x);
            }
            rs.add_row(std::move(row));
        }
    }
    warn_non_regular(rs, non_regular, "");
    return rs;
}

inline RecordSet run_figure(const ScenarioConfig &cfg) {
    const std::string &id = cfg.figure;
    RecordSet rs;
    if (id == "fig2") {
        ScenarioConfig c = figure_base(cfg, FamilyKind::cycle, 5);
        c.lambda = Range::single(0.2);
        c.probe = ProbeSpec::localized(2);
        rs = run_evolve(c, true);
    } else if (id == "fig3") {
        ScenarioConfig c = figure_base(cfg, FamilyKind::cycle, 100);
        c.t = Range::single(4.0);
        c.lambda = cfg.lambda.value_or(kDefaultLambdaGrid);
        c.probe = ProbeSpec::localized(50);
        // Vertices are labelled 1..N in this figure.
        c.offset = cfg.offset == 0 ? 1 : cfg.offset;
        rs = run_evolve(c, true);
    } else if (id == "fig4") {
        rs = figure_ipr(cfg, FamilyKind::cycle, 0);
    } else if (id == "fig5") {
        rs = figure_coherence(cfg, FamilyKind::cycle, 0, -1.0);
    } else if (id == "fig6") {
        rs = figure_groups(cfg, FamilyKind::complete, 0, {{"p_start", 0}, {"p_other", 1}});
    } else if (id == "fig7") {
        rs = figure_ipr(cfg, FamilyKind::complete, 0);
    } else if (id == "fig8") {
        rs = figure_coherence(cfg, FamilyKind::complete, 0, -0.2);
    } else if (id == "fig9") {
        rs = figure_groups(cfg, FamilyKind::star, 1,
                           {{"p_centre", 0}, {"p_start", 1}, {"p_other", 2}});
    } else if (id == "fig10") {
        rs = figure_ipr(cfg, FamilyKind::star, 1);
    } else if (id == "fig11") {
        rs = figure_coherence(cfg, FamilyKind::star, 1, -1.0);
    } else if (id == "fig12") {
        rs = figure_fisher(cfg, {{"localized", FamilyKind::cycle, ProbeSpec::localized(0)}});
    } else if (id == "fig13") {
        rs = figure_fisher(cfg, {{"localized", FamilyKind::complete, ProbeSpec::localized(0)}});
    } else if (id == "fig14") {
        rs = figure_fisher(cfg, {{"localized", FamilyKind::star, ProbeSpec::localized(1)}});
    } else if (id == "fig15") {
        rs = figure_fisher(cfg, {{"cos", FamilyKind::cycle, ProbeSpec::max_qfi(EigvecChoice::real_cos())},
                                 {"sin", FamilyKind::cycle, ProbeSpec::max_qfi(EigvecChoice::real_sin())}});
    } else if (id == "fig16") {
        rs = figure_fisher(cfg, {{"l=1", FamilyKind::complete, ProbeSpec::max_qfi(EigvecChoice::indexed(1))},
                                 {"l=N-1", FamilyKind::complete, ProbeSpec::max_qfi(EigvecChoice::indexed(4))},
                                 {"max", FamilyKind::star, ProbeSpec::max_qfi()}});
    } else {
        throw InvalidInput("unknown figure id '" + id + "'");
    }
    RecordSet out(rs.columns());
    for (const auto &row : rs.rows()) {
        out.add_row(row);
    }
    out.set_meta("command", "figure");
    out.set_meta("figure", id);
    out.set_meta("version", kVersion);
    if (!cfg.command_line.empty()) {
        out.set_meta("command_line", cfg.command_line);
    }
    for (const auto &fig : figure_catalogue()) {
        if (id == fig.id) {
            out.set_meta("description", fig.description);
        }
    }
    for (const auto &w : rs.warnings()) {
        out.add_warning(w);
    }
    return out;
}

} // namespace detail

inline const std::vector<std::string> &subcommands() {
    static const std::vector<std::string> names = {
        "spectrum", "evolve",       "prob",      "avg-prob", "ipr",      "coherence", "variance",
        "period",   "qfi",          "fi",        "maxqfi-check", "frobenius", "estimate", "figure"};
    return names;
}

/// Runs one subcommand on a validated configuration.
inline RecordSet run_scenario(const std::string &command, const ScenarioConfig &cfg) {
    if (command == "spectrum") return detail::run_spectrum(cfg);
    if (command == "evolve") return detail::run_evolve(cfg, false);
    if (command == "prob") return detail::run_evolve(cfg, true);
    if (command == "avg-prob") return detail::run_avg_prob(cfg);
    if (command == "ipr") {
        return detail::run_scalar_sweep(cfg, "ipr", "ipr", [](const WalkerState &s) {
            return ipr(probability_distribution(s));
        });
    }
    if (command == "coherence") {
        return detail::run_scalar_sweep(cfg, "coherence", "coherence",
                                        [](const WalkerState &s) { return coherence(s); });
    }
    if (command == "variance") return detail::run_variance(cfg);
    if (command == "period") return detail::run_period(cfg);
    if (command == "qfi") return detail::run_qfi(cfg);
    if (command == "fi") return detail::run_fi(cfg);
    if (command == "maxqfi-check") return detail::run_maxqfi_check(cfg);
    if (command == "frobenius") return detail::run_frobenius(cfg);
    if (command == "estimate") return detail::run_estimate(cfg);
    if (command == "figure") return detail::run_figure(cfg);
    throw InvalidInput("unknown subcommand '" + command + "'");
}

} // namespace ctqw
