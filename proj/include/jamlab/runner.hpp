/*
 * runner.hpp — command dispatch and structured reports.
 *
 * Every command produces a JSON report carrying the echoed scenario, the
 * provenance block (seed, version, scenario hash) and command-specific
 * verdicts and statistics. Reports are byte-identical for identical
 * (scenario, seed, version). Exit codes: 0 all checks consistent,
 * 2 forbidden configuration, 3 signaling detected, 1 usage error.
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "jamlab/cone.hpp"
#include "jamlab/correlations.hpp"
#include "jamlab/loops.hpp"
#include "jamlab/minkowski.hpp"
#include "jamlab/quantum.hpp"
#include "jamlab/scenario.hpp"

namespace jamlab::runner {

using json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

enum class ExitCode : int {
    Ok = 0,
    Usage = 1,
    ForbiddenConfiguration = 2,
    SignalingDetected = 3,
};

enum class Command { Geometry, Simulate, Chsh, Signal, LoopSearch, BoostFrame };

inline Command parse_command(const std::string& name) {
    if (name == "geometry") return Command::Geometry;
    if (name == "simulate") return Command::Simulate;
    if (name == "chsh") return Command::Chsh;
    if (name == "signal") return Command::Signal;
    if (name == "loop-search") return Command::LoopSearch;
    if (name == "boost") return Command::BoostFrame;
    throw std::invalid_argument("unknown command '" + name + "'");
}

inline const char* command_name(Command c) {
    switch (c) {
        case Command::Geometry: return "geometry";
        case Command::Simulate: return "simulate";
        case Command::Chsh: return "chsh";
        case Command::Signal: return "signal";
        case Command::LoopSearch: return "loop-search";
        case Command::BoostFrame: return "boost";
    }
    throw std::logic_error("unreachable");
}

struct RunOptions {
    // loop-search
    int loop_configs = 2000;
    int loop_depth = 3;
    int loop_dimension = 1;
    int adversarial_every = 10;  // every n-th configuration gets a perturbation search
    // boost
    std::optional<minkowski::Vec> velocity;
    // geometry oracle resolution: box extent / this many cells
    int oracle_cells = 96;
};

struct Report {
    json body;
    ExitCode exit_code = ExitCode::Ok;

    std::string text() const { return body.dump(2); }
};

namespace detail {

inline json verdict_to_json(const minkowski::ConeContainmentVerdict& v) {
    json out{{"holds", v.holds}, {"margin", v.margin}};
    if (v.witness) out["witness"] = scenario::detail::event_to_json(*v.witness);
    return out;
}

inline json stat(double value, double stderr_, std::uint64_t n) {
    return json{{"value", value}, {"stderr", stderr_}, {"n", n}};
}

inline json signal_to_json(const correlations::SignalVerdict& v) {
    return json{{"z", v.z_statistic}, {"signaling", v.signaling}, {"threshold", v.threshold}};
}

inline json report_shell(Command cmd, const scenario::ScenarioSpec& spec) {
    return json{{"command", command_name(cmd)},
                {"scenario", scenario::scenario_to_json(spec)},
                {"provenance", json{{"seed", spec.seed},
                                    {"version", kVersion},
                                    {"scenario_hash", scenario::scenario_hash(spec)}}}};
}

inline json geometry_block(const scenario::ScenarioSpec& spec, const RunOptions& opt,
                           bool* forbidden) {
    const auto closed = minkowski::binary_condition(spec.a, spec.b, spec.j);
    const auto box = minkowski::oracle_box(spec.a, spec.b, spec.j);
    double extent = box.hi.t - box.lo.t;
    for (int i = 0; i < spec.dimension; ++i) extent = std::max(extent, box.hi.x[i] - box.lo.x[i]);
    const auto grid = minkowski::binary_condition_oracle(spec.a, spec.b, spec.j, box,
                                                         extent / opt.oracle_cells);
    const bool agree = closed.holds == grid.holds;
    if (forbidden) *forbidden = !closed.holds || !agree;
    return json{{"binary_condition", verdict_to_json(closed)},
                {"oracle", verdict_to_json(grid)},
                {"agree", agree}};
}

// Shared by simulate and signal: a jam-off baseline against the scenario's
// policy, with the unary check across them.
inline json trials_block(const scenario::ScenarioSpec& spec, bool* flagged) {
    using namespace correlations;
    const auto off = sample_trials(spec.model, spec.jam_model, JamPolicy::Never, spec.angles.alpha,
                                   spec.angles.beta, spec.trials, substream(spec.seed, 0));
    const auto on = sample_trials(spec.model, spec.jam_model, spec.policy, spec.angles.alpha,
                                  spec.angles.beta, spec.trials, substream(spec.seed, 1));
    const auto t_off = tally(off), t_on = tally(on);
    const auto check = unary_check(t_off, t_on, spec.z_threshold);
    if (flagged) *flagged = check.alice.signaling || check.bob.signaling;

    auto table_json = [](const CountTable& t) {
        return json{{"n_pp", t.n_pp},           {"n_pm", t.n_pm},
                    {"n_mp", t.n_mp},           {"n_mm", t.n_mm},
                    {"na_plus", t.na_plus()},   {"na_minus", t.na_minus()},
                    {"nb_plus", t.nb_plus()},   {"nb_minus", t.nb_minus()}};
    };
    auto run_json = [&](const std::vector<TrialRecord>& trials, const CountTable& t) {
        const double n = static_cast<double>(t.total());
        const double e = empirical_correlation(trials);
        const double se_e = std::sqrt(std::max(0.0, 1.0 - e * e) / n);
        const double pa = static_cast<double>(t.na_plus()) / n;
        const double pb = static_cast<double>(t.nb_plus()) / n;
        const double se_p = 0.5 / std::sqrt(n);
        return json{{"counts", table_json(t)},
                    {"correlation", stat(e, se_e, t.total())},
                    {"alice_plus_fraction", stat(pa, se_p, t.total())},
                    {"bob_plus_fraction", stat(pb, se_p, t.total())}};
    };

    const double e_model =
        model_correlation(spec.model, spec.angles.alpha, spec.angles.beta);
    return json{{"model_correlation", e_model},
                {"jam_off", run_json(off, t_off)},
                {"jam_on", run_json(on, t_on)},
                {"unary_check",
                 json{{"alice", signal_to_json(check.alice)}, {"bob", signal_to_json(check.bob)}}}};
}

} // namespace detail

inline Report run(Command cmd, const scenario::ScenarioSpec& spec, const RunOptions& opt = {}) {
    Report rep;
    rep.body = detail::report_shell(cmd, spec);

    switch (cmd) {
        case Command::Geometry: {
            bool forbidden = false;
            rep.body["geometry"] = detail::geometry_block(spec, opt, &forbidden);
            rep.exit_code = forbidden ? ExitCode::ForbiddenConfiguration : ExitCode::Ok;
            break;
        }
        case Command::Simulate:
        case Command::Signal: {
            bool forbidden = false, flagged = false;
            rep.body["geometry"] = detail::geometry_block(spec, opt, &forbidden);
            rep.body["trials"] = detail::trials_block(spec, &flagged);
            rep.exit_code = flagged ? ExitCode::SignalingDetected
                            : forbidden ? ExitCode::ForbiddenConfiguration
                                        : ExitCode::Ok;
            break;
        }
        case Command::Chsh: {
            using namespace correlations;
            const scenario::ChshAngles ang =
                spec.chsh_angles ? *spec.chsh_angles : scenario::ChshAngles{};
            const double s_emp =
                empirical_chsh(spec.model, spec.jam_model, spec.policy, ang.alpha1, ang.alpha2,
                               ang.beta1, ang.beta2, spec.trials, spec.seed);
            const auto model_corr = [&](double x, double y) {
                return model_correlation(spec.model, x, y);
            };
            const double s_model = quantum::chsh_value(model_corr, ang.alpha1, ang.alpha2,
                                                       ang.beta1, ang.beta2);
            // Four independent pair estimates, each with variance ≤ 1/n.
            const double se = 2.0 / std::sqrt(static_cast<double>(spec.trials));
            rep.body["chsh"] = json{{"empirical", detail::stat(s_emp, se, spec.trials * 4)},
                                    {"model_prediction_no_jam", s_model},
                                    {"angles",
                                     json{{"alpha1", ang.alpha1},
                                          {"alpha2", ang.alpha2},
                                          {"beta1", ang.beta1},
                                          {"beta2", ang.beta2}}}};
            rep.exit_code = ExitCode::Ok;
            break;
        }
        case Command::LoopSearch: {
            using namespace loops;
            int closed_loops = 0;
            std::uint64_t attempts = 0;
            json counterexample;
            for (int i = 0; i < opt.loop_configs; ++i) {
                const int depth = opt.loop_depth >= 0 ? i % (opt.loop_depth + 1) : 0;
                const auto gen =
                    random_configuration(depth, opt.loop_dimension, substream(spec.seed, i));
                attempts += gen.stats.attempts;
                auto verdict = loop_check(gen.config);
                RelayConfiguration offender = gen.config;
                if (!verdict.loop_closed && depth > 0 && opt.adversarial_every > 0 &&
                    i % opt.adversarial_every == 0) {
                    AdversarialOptions adv_opt;
                    adv_opt.iterations = opt.loop_dimension == 1 ? 200 : 60;
                    if (opt.loop_dimension > 1) adv_opt.ridge.samples = 1024;
                    const auto adv = adversarial_loop_search(
                        gen.config, substream(spec.seed, 0xAD00 + i), adv_opt);
                    if (adv.loop_found) {
                        verdict.loop_closed = true;
                        verdict.reason = "adversarial perturbation closed a loop";
                        offender = adv.config;
                    }
                }
                if (verdict.loop_closed) {
                    ++closed_loops;
                    json relays = json::array();
                    for (const auto& r : offender.relays)
                        relays.push_back(
                            json{{"a", scenario::detail::event_to_json(r.triple.a)},
                                 {"b", scenario::detail::event_to_json(r.triple.b)},
                                 {"j", scenario::detail::event_to_json(r.triple.j)},
                                 {"reads_parent", r.reads.parent},
                                 {"reads_side", r.reads.side == ParentSide::A ? "a" : "b"}});
                    counterexample =
                        json{{"configuration_index", i},
                             {"reason", verdict.reason},
                             {"base",
                              json{{"a", scenario::detail::event_to_json(offender.base.a)},
                                   {"b", scenario::detail::event_to_json(offender.base.b)},
                                   {"j", scenario::detail::event_to_json(offender.base.j)}}},
                             {"relays", relays}};
                    break;
                }
            }
            rep.body["loop_search"] =
                json{{"configurations", opt.loop_configs},
                     {"max_depth", opt.loop_depth},
                     {"dimension", opt.loop_dimension},
                     {"sampling_attempts", attempts},
                     {"closed_loops", closed_loops}};
            if (!counterexample.is_null()) rep.body["loop_search"]["counterexample"] = counterexample;
            rep.exit_code = closed_loops == 0 ? ExitCode::Ok : ExitCode::ForbiddenConfiguration;
            break;
        }
        case Command::BoostFrame: {
            if (!opt.velocity) throw std::invalid_argument("boost command needs a velocity");
            if (opt.velocity->dim != spec.dimension)
                throw std::invalid_argument("boost velocity dimension mismatch");
            const minkowski::Boost bo(*opt.velocity);

            bool forbidden_rest = false;
            rep.body["rest_frame"] = detail::geometry_block(spec, opt, &forbidden_rest);

            scenario::ScenarioSpec moved = spec;
            moved.a = minkowski::boost(spec.a, bo);
            moved.b = minkowski::boost(spec.b, bo);
            moved.j = minkowski::boost(spec.j, bo);
            if (spec.source) moved.source = minkowski::boost(*spec.source, bo);
            bool forbidden_moved = false;
            rep.body["boosted_frame"] = detail::geometry_block(moved, opt, &forbidden_moved);

            json vel = json::array();
            for (int i = 0; i < opt.velocity->dim; ++i) vel.push_back((*opt.velocity)[i]);
            const bool invariant = forbidden_rest == forbidden_moved;
            rep.body["boost"] = json{{"velocity", vel},
                                     {"verdicts_invariant", invariant},
                                     {"events_boosted",
                                      json{{"a", scenario::detail::event_to_json(moved.a)},
                                           {"b", scenario::detail::event_to_json(moved.b)},
                                           {"j", scenario::detail::event_to_json(moved.j)}}}};
            rep.exit_code = (!invariant || forbidden_rest) ? ExitCode::ForbiddenConfiguration
                                                           : ExitCode::Ok;
            break;
        }
    }
    return rep;
}

} // namespace jamlab::runner
