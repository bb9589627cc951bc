/*
 * loops.hpp — multi-jammer relay configurations and causal-loop search.
 *
 * A relay reads the result of one measurement event (its jam event must be
 * in that event's timelike future) and re-broadcasts it by jamming its own
 * pair of measurement events. A loop would close if some relay's pair both
 * sat in the past cone of the base jam event — then the combined base
 * results would be recoverable before the base jam acted. The admission
 * constraints make that impossible: the relay's own containment condition
 * would force its jam event to causally precede the base jam event, which
 * the attachment ordering excludes. The searches here try to falsify that.
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "jamlab/cone.hpp"
#include "jamlab/minkowski.hpp"
#include "jamlab/rng.hpp"

namespace jamlab::loops {

using minkowski::Boost;
using minkowski::CausalRelation;
using minkowski::Event;
using minkowski::RidgeOptions;
using minkowski::Vec;

// One jamming experiment: two measurement events and the jam event.
struct JammerTriple {
    Event a, b, j;
};

enum class ParentSide { A, B };

// Which earlier measurement event a relay's jam event reads.
struct Attachment {
    int parent = -1;  // -1 = base triple, otherwise index of an earlier relay
    ParentSide side = ParentSide::A;
};

struct Relay {
    JammerTriple triple;
    Attachment reads;
};

struct RelayConfiguration {
    JammerTriple base;
    std::vector<Relay> relays;

    int dimension() const { return base.a.dim(); }
};

inline const Event& attachment_event(const RelayConfiguration& cfg, const Attachment& at) {
    if (at.parent < -1 || at.parent >= static_cast<int>(cfg.relays.size()))
        throw std::invalid_argument("attachment parent out of range");
    const JammerTriple& t =
        at.parent == -1 ? cfg.base : cfg.relays[static_cast<std::size_t>(at.parent)].triple;
    return at.side == ParentSide::A ? t.a : t.b;
}

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> failures;
};

// Checks, in order: containment condition for the base and every relay
// triple; every attachment points at an earlier element and its jam event
// is in the parent event's timelike future; every relay jam event is
// spacelike from the base jam event or in its future cone. The last
// constraint is geometrically forced for relays reading base results; it
// is asserted so that violations are named rather than silently absorbed.
inline ValidationReport validate_configuration_report(const RelayConfiguration& cfg,
                                                      const RidgeOptions& ridge = {}) {
    ValidationReport rep;
    auto fail = [&rep](std::string msg) {
        rep.ok = false;
        rep.failures.push_back(std::move(msg));
    };

    const int d = cfg.dimension();
    auto check_dim = [&](const JammerTriple& t, const std::string& who) {
        if (t.a.dim() != d || t.b.dim() != d || t.j.dim() != d) {
            throw std::invalid_argument(who + ": dimension mismatch");
        }
    };

    check_dim(cfg.base, "base");
    if (!minkowski::binary_condition(cfg.base.a, cfg.base.b, cfg.base.j, ridge).holds)
        fail("base triple violates the containment condition");

    for (std::size_t k = 0; k < cfg.relays.size(); ++k) {
        const auto& relay = cfg.relays[k];
        const std::string who = "relay " + std::to_string(k);
        check_dim(relay.triple, who);
        if (relay.reads.parent >= static_cast<int>(k))
            fail(who + ": attachment must point at an earlier element");
        if (!minkowski::binary_condition(relay.triple.a, relay.triple.b, relay.triple.j, ridge)
                 .holds)
            fail(who + ": triple violates the containment condition");
        const Event& parent = attachment_event(cfg, relay.reads);
        if (minkowski::causal_relation(parent, relay.triple.j) != CausalRelation::TimelikeFuture)
            fail(who + ": jam event is not in the timelike future of the event it reads");
        const CausalRelation vs_base_j = minkowski::causal_relation(cfg.base.j, relay.triple.j);
        if (vs_base_j == CausalRelation::TimelikePast || vs_base_j == CausalRelation::LightlikePast)
            fail(who + ": jam event reaches the past cone of the base jam event");
    }
    return rep;
}

inline bool validate_configuration(const RelayConfiguration& cfg, const RidgeOptions& ridge = {}) {
    return validate_configuration_report(cfg, ridge).ok;
}

struct RelayLoopStatus {
    std::size_t relay = 0;
    double slack_a = 0.0;  // slack of base.j inside J+(a_k)
    double slack_b = 0.0;  // slack of base.j inside J+(b_k)
    bool a_reaches_base_jam = false;
    bool b_reaches_base_jam = false;
};

struct LoopVerdict {
    bool loop_closed = false;
    std::vector<RelayLoopStatus> relays;
    std::string reason;
};

// A loop closes iff some relay pair (a_k, b_k) lies entirely in the past
// cone of the base jam event. Requires a valid configuration.
inline LoopVerdict loop_check(const RelayConfiguration& cfg, const RidgeOptions& ridge = {}) {
    const ValidationReport rep = validate_configuration_report(cfg, ridge);
    if (!rep.ok) {
        std::string msg = "loop_check requires a valid configuration:";
        for (const auto& f : rep.failures) msg += " " + f + ";";
        throw std::invalid_argument(msg);
    }

    LoopVerdict v;
    std::ostringstream reason;
    for (std::size_t k = 0; k < cfg.relays.size(); ++k) {
        const auto& t = cfg.relays[k].triple;
        RelayLoopStatus st;
        st.relay = k;
        st.slack_a = minkowski::future_slack(t.a, cfg.base.j);
        st.slack_b = minkowski::future_slack(t.b, cfg.base.j);
        st.a_reaches_base_jam = st.slack_a >= 0.0;
        st.b_reaches_base_jam = st.slack_b >= 0.0;
        if (st.a_reaches_base_jam && st.b_reaches_base_jam) {
            v.loop_closed = true;
            reason << "relay " << k
                   << " holds both measurement events in the past cone of the base jam event";
        }
        v.relays.push_back(st);
    }
    if (!v.loop_closed) {
        if (cfg.relays.empty()) {
            reason << "no relays: combined base results are only available in the future of the "
                      "base jam event";
        } else {
            reason << "every relay keeps at least one measurement event outside the past cone of "
                      "the base jam event; closing a loop through a relay would need the base jam "
                      "event inside that relay's cone overlap, forcing the relay's jam event to "
                      "causally precede the base jam event, which admission excludes";
        }
    }
    v.reason = reason.str();
    return v;
}

class SamplingBudgetExhausted : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct SamplingStats {
    std::uint64_t attempts = 0;
    std::uint64_t accepted = 0;
};

struct GeneratedConfiguration {
    RelayConfiguration config;
    SamplingStats stats;
};

struct GeneratorOptions {
    double range = 3.0;               // coordinate scale of sampled events
    std::uint64_t budget = 400000;    // sampling attempts before giving up
    RidgeOptions ridge{};             // containment options used while sampling
};

namespace detail {

inline Vec random_direction(SplitMix64& rng, int dim) {
    Vec u{};
    u.dim = dim;
    double n2 = 0.0;
    do {
        n2 = 0.0;
        for (int i = 0; i < dim; ++i) {
            u[i] = rng.normal();
            n2 += u[i] * u[i];
        }
    } while (n2 < 1e-12);
    const double inv = 1.0 / std::sqrt(n2);
    for (int i = 0; i < dim; ++i) u[i] *= inv;
    return u;
}

inline Vec random_point(SplitMix64& rng, int dim, double lo, double hi) {
    Vec x{};
    x.dim = dim;
    for (int i = 0; i < dim; ++i) x[i] = rng.uniform(lo, hi);
    return x;
}

// Event strictly inside the future light cone of e.
inline Event timelike_future_of(SplitMix64& rng, const Event& e, double scale) {
    const double dt = rng.uniform(0.25, 1.0) * scale;
    const double r = rng.uniform(0.0, 0.85) * dt;
    return Event{e.t + dt, e.x + r * random_direction(rng, e.dim())};
}

} // namespace detail

// Rejection-samples a configuration with the requested relay depth.
//
// Depth counts relay generations. Gathering one experiment's combined
// results takes a relay on each side, so generation 1 always attaches one
// relay to the base A event and one to the base B event (depth 1 yields a
// three-triple configuration). Deeper generations extend a random subset
// of the previous generation's relays the same way — at least one always
// continues — producing chains and trees. Deterministic under the seed.
// Throws SamplingBudgetExhausted when the attempt budget runs out.
inline GeneratedConfiguration random_configuration(int depth, int dimension, std::uint64_t seed,
                                                   const GeneratorOptions& opt = {}) {
    if (depth < 0) throw std::invalid_argument("depth must be non-negative");
    if (dimension < 1 || dimension > 3) throw std::invalid_argument("dimension must be 1, 2 or 3");

    SplitMix64 rng(substream(seed, 0x10095));
    SamplingStats stats;
    const double r = opt.range;

    auto spend = [&]() {
        ++stats.attempts;
        if (stats.attempts > opt.budget)
            throw SamplingBudgetExhausted("configuration sampling budget exhausted");
    };

    auto sample_base = [&]() -> std::optional<JammerTriple> {
        spend();
        JammerTriple t;
        t.a = Event{rng.uniform(-r / 3.0, r / 3.0), detail::random_point(rng, dimension, -r, r)};
        t.b = Event{rng.uniform(-r / 3.0, r / 3.0), detail::random_point(rng, dimension, -r, r)};
        if (minkowski::causal_relation(t.a, t.b) != CausalRelation::Spacelike) return std::nullopt;
        Vec mid = 0.5 * (t.a.x + t.b.x);
        const double t_floor = std::min(t.a.t, t.b.t);
        t.j.t = rng.uniform(t_floor - r, t_floor + r / 4.0);
        t.j.x = mid + detail::random_point(rng, dimension, -r / 2.0, r / 2.0);
        if (!minkowski::binary_condition(t.a, t.b, t.j, opt.ridge).holds) return std::nullopt;
        return t;
    };

    auto sample_relay_triple = [&](const Event& parent) -> std::optional<JammerTriple> {
        spend();
        JammerTriple t;
        t.j = detail::timelike_future_of(rng, parent, r / 2.0);
        if (rng.uniform() < 0.5) {
            // Both measurement events inside J+(j_k): containment for free.
            t.a = detail::timelike_future_of(rng, t.j, r / 2.0);
            t.b = detail::timelike_future_of(rng, t.j, r / 2.0);
        } else {
            // Split a pair symmetrically around the jam event.
            const Vec axis = detail::random_direction(rng, dimension);
            const double spread = rng.uniform(0.3, 1.0) * r / 2.0;
            const double lift = rng.uniform(1.0, 1.8) * spread;
            t.a = Event{t.j.t + lift, t.j.x - spread * axis};
            t.b = Event{t.j.t + lift * rng.uniform(0.9, 1.1), t.j.x + spread * axis};
        }
        if (minkowski::causal_relation(t.a, t.b) != CausalRelation::Spacelike) return std::nullopt;
        if (!minkowski::binary_condition(t.a, t.b, t.j, opt.ridge).holds) return std::nullopt;
        return t;
    };

    for (;;) {
        std::optional<JammerTriple> base;
        while (!base) base = sample_base();

        RelayConfiguration cfg;
        cfg.base = *base;
        bool done = true;

        std::vector<int> previous_generation{-1};  // -1 denotes the base triple
        for (int g = 0; g < depth && done; ++g) {
            // Pick which relays of the previous generation get extended.
            std::vector<int> extend;
            for (int parent : previous_generation)
                if (parent == -1 || rng.uniform() < 0.5) extend.push_back(parent);
            if (extend.empty())
                extend.push_back(previous_generation[rng.below(previous_generation.size())]);

            std::vector<int> next_generation;
            for (int parent : extend) {
                for (const ParentSide side : {ParentSide::A, ParentSide::B}) {
                    const Attachment at{parent, side};
                    const Event& read = attachment_event(cfg, at);
                    std::optional<JammerTriple> triple;
                    for (int tries = 0; tries < 64 && !triple; ++tries) {
                        triple = sample_relay_triple(read);
                        if (triple) {
                            const CausalRelation vs =
                                minkowski::causal_relation(cfg.base.j, triple->j);
                            if (vs == CausalRelation::TimelikePast ||
                                vs == CausalRelation::LightlikePast)
                                triple.reset();  // cannot happen when reading base results
                        }
                    }
                    if (!triple) {
                        done = false;
                        break;
                    }
                    next_generation.push_back(static_cast<int>(cfg.relays.size()));
                    cfg.relays.push_back(Relay{*triple, at});
                }
                if (!done) break;
            }
            previous_generation = std::move(next_generation);
        }
        if (!done) continue;
        if (!validate_configuration(cfg, opt.ridge)) continue;
        ++stats.accepted;
        return GeneratedConfiguration{std::move(cfg), stats};
    }
}

struct AdversarialOptions {
    int iterations = 200;
    double step = 0.4;
    RidgeOptions ridge{};
};

struct AdversarialResult {
    bool loop_found = false;
    RelayConfiguration config;           // best configuration reached
    double best_objective = 0.0;         // max over relays of min slack of base.j in their cones
    std::uint64_t evaluations = 0;
    std::uint64_t closing_candidates_rejected = 0;  // proposals that would close but failed validation
};

namespace detail {

inline double loop_objective(const RelayConfiguration& cfg) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& relay : cfg.relays) {
        const double sa = minkowski::future_slack(relay.triple.a, cfg.base.j);
        const double sb = minkowski::future_slack(relay.triple.b, cfg.base.j);
        best = std::max(best, std::min(sa, sb));
    }
    return best;
}

} // namespace detail

// Hill-climbing perturbation search that tries to drag the base jam event
// into a relay's cone overlap while keeping the configuration valid. A
// non-negative objective on a valid configuration would be a closed loop.
inline AdversarialResult adversarial_loop_search(const RelayConfiguration& start,
                                                 std::uint64_t seed,
                                                 const AdversarialOptions& opt = {}) {
    if (start.relays.empty())
        throw std::invalid_argument("adversarial search needs at least one relay");
    if (!validate_configuration(start, opt.ridge))
        throw std::invalid_argument("adversarial search must start from a valid configuration");

    SplitMix64 rng(substream(seed, 0xADE5A));
    AdversarialResult res;
    res.config = start;
    res.best_objective = detail::loop_objective(start);

    const int d = start.dimension();
    const std::size_t n_events = 3 * (1 + start.relays.size());
    double step = opt.step;

    auto event_ref = [](RelayConfiguration& cfg, std::size_t idx) -> Event& {
        JammerTriple& t = idx < 3 ? cfg.base : cfg.relays[idx / 3 - 1].triple;
        switch (idx % 3) {
            case 0: return t.a;
            case 1: return t.b;
            default: return t.j;
        }
    };

    for (int it = 0; it < opt.iterations; ++it) {
        RelayConfiguration cand = res.config;
        Event& e = event_ref(cand, rng.below(n_events));
        e.t += step * rng.normal();
        for (int i = 0; i < d; ++i) e.x[i] += step * rng.normal();

        ++res.evaluations;
        const double obj = detail::loop_objective(cand);
        if (!validate_configuration(cand, opt.ridge)) {
            if (obj >= 0.0) ++res.closing_candidates_rejected;
            step = std::max(step * 0.98, 1e-3);
            continue;
        }
        if (obj > res.best_objective) {
            res.best_objective = obj;
            res.config = std::move(cand);
        } else {
            step = std::max(step * 0.98, 1e-3);
        }
        if (res.best_objective >= 0.0) {
            res.loop_found = true;  // theorem counterexample; callers must treat as fatal
            break;
        }
    }
    return res;
}

inline RelayConfiguration boosted(const RelayConfiguration& cfg, const Boost& b) {
    auto bt = [&](const JammerTriple& t) {
        return JammerTriple{minkowski::boost(t.a, b), minkowski::boost(t.b, b),
                            minkowski::boost(t.j, b)};
    };
    RelayConfiguration out;
    out.base = bt(cfg.base);
    out.relays.reserve(cfg.relays.size());
    for (const auto& relay : cfg.relays) out.relays.push_back(Relay{bt(relay.triple), relay.reads});
    return out;
}

} // namespace jamlab::loops
