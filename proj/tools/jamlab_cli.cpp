/*
 * jamlab — command-line front end.
 *
 * Subcommands: geometry, simulate, chsh, signal, loop-search, boost.
 * Scenarios come from a JSON file or a canned name (fig1a, fig1d,
 * fig1d-selective, fig1e, ...). Reports are JSON on stdout or --out.
 * Exit codes: 0 consistent, 1 usage/parse error, 2 forbidden
 * configuration, 3 signaling detected.
 */
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jamlab/jamlab.hpp"

namespace {

using jamlab::runner::Command;
using jamlab::runner::ExitCode;

struct CommonArgs {
    std::string scenario;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
    std::optional<double> threshold;
    std::string out;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--scenario", args.scenario,
                    "scenario JSON file, or a canned name (fig1a, fig1b, fig1c, fig1d, "
                    "fig1d-selective, fig1e, fig1f)");
    cmd->add_option("--seed", args.seed, "override the scenario seed");
    cmd->add_option("--trials", args.trials, "override the scenario trial count");
    cmd->add_option("--threshold", args.threshold, "override the z threshold");
    cmd->add_option("--out", args.out, "write the report to this file instead of stdout");
}

std::string load_scenario_text(const std::string& ref) {
    if (jamlab::scenario::is_canned_scenario(ref))
        return jamlab::scenario::canned_scenario_text(ref);
    std::ifstream in(ref);
    if (!in) throw jamlab::scenario::ParseError("cannot open scenario '" + ref + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

jamlab::scenario::ScenarioSpec resolve_scenario(const CommonArgs& args) {
    jamlab::scenario::ScenarioSpec spec;
    if (!args.scenario.empty()) spec = jamlab::scenario::parse_scenario(load_scenario_text(args.scenario));
    if (args.seed) spec.seed = *args.seed;
    if (args.trials) spec.trials = *args.trials;
    if (args.threshold) spec.z_threshold = *args.threshold;
    return spec;
}

int emit(const jamlab::runner::Report& report, const CommonArgs& args) {
    if (args.out.empty()) {
        std::cout << report.text() << "\n";
    } else {
        std::ofstream out(args.out);
        if (!out) {
            std::cerr << "error: cannot write '" << args.out << "'\n";
            return static_cast<int>(ExitCode::Usage);
        }
        out << report.text() << "\n";
    }
    return static_cast<int>(report.exit_code);
}

jamlab::minkowski::Vec parse_velocity(const std::vector<double>& comps) {
    if (comps.empty() || comps.size() > 3)
        throw std::invalid_argument("velocity needs 1 to 3 components");
    jamlab::minkowski::Vec v{};
    v.dim = static_cast<int>(comps.size());
    for (std::size_t i = 0; i < comps.size(); ++i) v[static_cast<int>(i)] = comps[i];
    return v;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"desk-scale laboratory for jamming non-local spin correlations"};
    app.require_subcommand(1);

    CommonArgs geometry_args, simulate_args, chsh_args, signal_args, loop_args, boost_args;

    auto* geometry = app.add_subcommand("geometry", "containment verdict plus oracle cross-check");
    add_common(geometry, geometry_args);

    auto* simulate = app.add_subcommand("simulate", "trials, tallies and the unary check");
    add_common(simulate, simulate_args);

    auto* chsh = app.add_subcommand("chsh", "empirical CHSH value for the scenario's models");
    add_common(chsh, chsh_args);

    auto* signal = app.add_subcommand("signal", "jam-off vs jam-on marginal comparison");
    add_common(signal, signal_args);

    auto* loop = app.add_subcommand("loop-search", "randomized search for closed causal loops");
    add_common(loop, loop_args);
    int loop_configs = 2000, loop_depth = 3, loop_dimension = 1;
    loop->add_option("--configs", loop_configs, "number of random configurations");
    loop->add_option("--depth", loop_depth, "maximum relay depth");
    loop->add_option("--dimension", loop_dimension, "spatial dimension (1-3)")
        ->check(CLI::Range(1, 3));

    auto* boostc = app.add_subcommand("boost", "re-run geometry verdicts in a boosted frame");
    add_common(boostc, boost_args);
    std::vector<double> velocity;
    boostc->add_option("--velocity", velocity, "boost velocity components (|v| < 1)")
        ->required()
        ->expected(1, 3);

    CLI11_PARSE(app, argc, argv);

    try {
        if (geometry->parsed())
            return emit(jamlab::runner::run(Command::Geometry, resolve_scenario(geometry_args)),
                        geometry_args);
        if (simulate->parsed())
            return emit(jamlab::runner::run(Command::Simulate, resolve_scenario(simulate_args)),
                        simulate_args);
        if (chsh->parsed())
            return emit(jamlab::runner::run(Command::Chsh, resolve_scenario(chsh_args)), chsh_args);
        if (signal->parsed())
            return emit(jamlab::runner::run(Command::Signal, resolve_scenario(signal_args)),
                        signal_args);
        if (loop->parsed()) {
            jamlab::runner::RunOptions opt;
            opt.loop_configs = loop_configs;
            opt.loop_depth = loop_depth;
            opt.loop_dimension = loop_dimension;
            return emit(jamlab::runner::run(Command::LoopSearch, resolve_scenario(loop_args), opt),
                        loop_args);
        }
        if (boostc->parsed()) {
            jamlab::runner::RunOptions opt;
            opt.velocity = parse_velocity(velocity);
            const auto spec = resolve_scenario(boost_args);
            return emit(jamlab::runner::run(Command::BoostFrame, spec, opt), boost_args);
        }
    } catch (const jamlab::scenario::ParseError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return static_cast<int>(ExitCode::Usage);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return static_cast<int>(ExitCode::Usage);
    }
    return static_cast<int>(ExitCode::Usage);
}
