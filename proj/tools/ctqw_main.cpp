// ctqw: command-line front end for the perturbed quantum-walk library.
//
// Exit codes: 0 success, 2 usage or input error, 3 numeric failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ctqw/ctqw.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

struct RangeFlags {
    std::optional<double> value;
    std::optional<double> min;
    std::optional<double> max;
    std::optional<double> step;

    void add(CLI::App *app, const std::string &name, const std::string &what) {
        app->add_option("--" + name, value, "single " + what);
        app->add_option("--" + name + "-min", min, what + " grid start");
        app->add_option("--" + name + "-max", max, what + " grid end (inclusive)");
        app->add_option("--" + name + "-step", step, what + " grid step");
    }

    [[nodiscard]] std::optional<ctqw::Range> resolve(const std::string &name) const {
        const bool grid = min || max || step;
        if (value && grid) {
            throw ctqw::InvalidInput("--" + name + " cannot be combined with --" + name +
                                     "-min/-max/-step");
        }
        if (value) {
            return ctqw::Range::single(*value);
        }
        if (!grid) {
            return std::nullopt;
        }
        if (!min || !max) {
            throw ctqw::InvalidInput("--" + name + "-min and --" + name + "-max go together");
        }
        return ctqw::Range{*min, *max, step.value_or(0.01)};
    }
};

struct Flags {
    std::string family;
    std::size_t n = 0;
    std::vector<std::size_t> parts;
    std::string edges;
    bool numeric = false;
    RangeFlags lambda;
    RangeFlags t;
    std::string probe = "localized";
    std::optional<std::size_t> vertex;
    std::string choice = "plus";
    std::size_t index = 1;
    double phase = 0.0;
    std::string mode = "exact";
    std::string format = "csv";
    std::string output;
    std::uint64_t seed = 0;
    std::size_t offset = 0;
    std::size_t samples = 10'000;
    std::size_t trials = 200;
    std::string figure;
};

void add_common(CLI::App *app, Flags &f) {
    app->add_option("--family", f.family,
                    "cycle | complete | star | path | wheel | complete_bipartite");
    app->add_option("--n", f.n, "number of vertices");
    app->add_option("--parts", f.parts, "part sizes A B for complete_bipartite")->expected(2);
    app->add_option("--edges", f.edges, "edge-list file instead of a family");
    app->add_flag("--numeric", f.numeric, "use the numeric eigensolver for every family");
    f.lambda.add(app, "lambda", "perturbation lambda");
    f.t.add(app, "t", "time");
    app->add_option("--probe", f.probe, "localized | max");
    app->add_option("--vertex", f.vertex, "starting vertex of a localized probe (0-based)");
    app->add_option("--choice", f.choice, "top eigenvector: plus | minus | cos | sin | index");
    app->add_option("--index", f.index, "1-based top-level index for --choice index");
    app->add_option("--phase", f.phase, "relative phase of the maximum-QFI probe, [0, 2 pi)");
    app->add_option("--mode", f.mode, "FI mode: exact | finite_difference | analytic");
    app->add_option("--format", f.format, "csv | json");
    app->add_option("--output", f.output, "output path (default stdout)");
    app->add_option("--seed", f.seed, "Monte Carlo seed");
    app->add_option("--offset", f.offset, "added to vertex labels on output");
    app->add_option("--samples", f.samples, "samples per Monte Carlo trial");
    app->add_option("--trials", f.trials, "Monte Carlo trials");
}

ctqw::EigvecChoice parse_choice(const Flags &f) {
    if (f.choice == "plus") return ctqw::EigvecChoice::complex_plus();
    if (f.choice == "minus") return ctqw::EigvecChoice::complex_minus();
    if (f.choice == "cos") return ctqw::EigvecChoice::real_cos();
    if (f.choice == "sin") return ctqw::EigvecChoice::real_sin();
    if (f.choice == "index") return ctqw::EigvecChoice::indexed(f.index);
    throw ctqw::InvalidInput("unknown --choice '" + f.choice + "'");
}

ctqw::ScenarioConfig to_config(const Flags &f, const std::string &command_line) {
    ctqw::ScenarioConfig cfg;
    if (!f.family.empty()) {
        cfg.family = ctqw::family_from_string(f.family);
        if (!cfg.family) {
            throw ctqw::InvalidInput("unknown --family '" + f.family + "'");
        }
    }
    cfg.n = f.n;
    if (!f.parts.empty()) {
        cfg.part_a = f.parts[0];
        cfg.part_b = f.parts[1];
    }
    cfg.edges_path = f.edges;
    cfg.numeric = f.numeric;
    cfg.lambda = f.lambda.resolve("lambda");
    cfg.t = f.t.resolve("t");
    const ctqw::EigvecChoice choice = parse_choice(f);
    if (f.probe == "localized") {
        cfg.probe = ctqw::ProbeSpec::localized(f.vertex.value_or(0));
        cfg.probe.choice = choice;
        cfg.vertex_given = f.vertex.has_value();
    } else if (f.probe == "max") {
        if (f.vertex) {
            throw ctqw::InvalidInput("--vertex applies to localized probes only");
        }
        cfg.probe = ctqw::ProbeSpec::max_qfi(choice, f.phase);
    } else {
        throw ctqw::InvalidInput("unknown --probe '" + f.probe + "'");
    }
    cfg.mode = ctqw::fi_mode_from_string(f.mode);
    cfg.seed = f.seed;
    cfg.samples = f.samples;
    cfg.trials = f.trials;
    cfg.offset = f.offset;
    cfg.figure = f.figure;
    cfg.command_line = command_line;
    return cfg;
}

std::string join_args(int argc, char **argv) {
    std::string out = "ctqw";
    for (int i = 1; i < argc; ++i) {
        out += ' ';
        out += argv[i];
    }
    return out;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Continuous-time quantum walks with H = L + lambda L^2: dynamics and "
                 "estimation of lambda"};
    app.require_subcommand(1);
    Flags flags;
    std::vector<CLI::App *> subs;
    for (const std::string &name : ctqw::subcommands()) {
        CLI::App *sub = app.add_subcommand(name);
        add_common(sub, flags);
        subs.push_back(sub);
    }
    std::string figure_help = "figure id:";
    for (const auto &fig : ctqw::detail::figure_catalogue()) {
        figure_help += std::string(" ") + fig.id;
    }
    app.get_subcommand("figure")->add_option("id", flags.figure, figure_help)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        std::cerr << "ctqw: " << e.what() << '\n';
        return kExitUsage;
    }

    std::string command;
    for (CLI::App *sub : subs) {
        if (sub->parsed()) {
            command = sub->get_name();
        }
    }

    try {
        const ctqw::ScenarioConfig cfg = to_config(flags, join_args(argc, argv));
        const ctqw::Format format = ctqw::format_from_string(flags.format);
        const ctqw::RecordSet rs = ctqw::run_scenario(command, cfg);
        for (const std::string &w : rs.warnings()) {
            std::cerr << "ctqw: warning: " << w << '\n';
        }
        ctqw::emit(rs, format, flags.output);
    } catch (const ctqw::InvalidInput &e) {
        std::cerr << "ctqw: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ctqw::NumericFailure &e) {
        std::cerr << "ctqw: numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception &e) {
        std::cerr << "ctqw: " << e.what() << '\n';
        return kExitNumeric;
    }
    return 0;
}
