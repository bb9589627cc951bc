#include <catch2/catch.hpp>

#include <cmath>

#include "jamlab/loops.hpp"
#include "jamlab/rng.hpp"

using namespace jamlab;
using namespace jamlab::loops;
using minkowski::Boost;
using minkowski::ev1;
using minkowski::Event;
using minkowski::vec1;

namespace {

// The allowed base geometry: jammer near the source, detectors at the ends.
JammerTriple base_triple() {
    return JammerTriple{ev1(0, -1), ev1(0, 1), ev1(-1, 0)};
}

// A relay reading the base A event, itself validly configured.
Relay relay_above_a() {
    Relay r;
    r.reads = Attachment{-1, ParentSide::A};
    r.triple.j = ev1(1, -1);               // timelike future of a = (0, -1)
    r.triple.a = ev1(2.2, -1.6);
    r.triple.b = ev1(2.2, -0.4);
    return r;
}

} // namespace

TEST_CASE("a configuration with no relays and a valid base is valid") {
    RelayConfiguration cfg;
    cfg.base = base_triple();
    CHECK(validate_configuration(cfg));
    const auto v = loop_check(cfg);
    CHECK_FALSE(v.loop_closed);
    CHECK(v.relays.empty());
}

TEST_CASE("a well-placed relay chain validates") {
    RelayConfiguration cfg;
    cfg.base = base_triple();
    cfg.relays.push_back(relay_above_a());
    REQUIRE(validate_configuration(cfg));

    const auto v = loop_check(cfg);
    CHECK_FALSE(v.loop_closed);
    REQUIRE(v.relays.size() == 1);
    CHECK_FALSE((v.relays[0].a_reaches_base_jam && v.relays[0].b_reaches_base_jam));
    CHECK(v.reason.find("outside the past cone") != std::string::npos);
}

TEST_CASE("validation names each violated constraint") {
    RelayConfiguration cfg;
    cfg.base = base_triple();

    SECTION("base that violates containment") {
        cfg.base.j = ev1(0, 10);
        const auto rep = validate_configuration_report(cfg);
        CHECK_FALSE(rep.ok);
        REQUIRE_FALSE(rep.failures.empty());
        CHECK(rep.failures[0].find("containment") != std::string::npos);
    }
    SECTION("relay triple with a far-displaced jam event") {
        Relay r = relay_above_a();
        r.triple.j = ev1(1, 30);  // keeps nothing contained, and not above a
        cfg.relays.push_back(r);
        const auto rep = validate_configuration_report(cfg);
        CHECK_FALSE(rep.ok);
        CHECK(rep.failures.size() >= 2);  // containment and attachment both fail
    }
    SECTION("attachment must point backwards") {
        Relay r = relay_above_a();
        r.reads.parent = 0;  // relay 0 reading itself
        cfg.relays.push_back(r);
        CHECK_FALSE(validate_configuration(cfg));
    }
    SECTION("jam event dipping into the past of the base jam event") {
        Relay r = relay_above_a();
        r.triple.j = ev1(-2.5, 0.1);  // deep past of base j
        cfg.relays.push_back(r);
        const auto rep = validate_configuration_report(cfg);
        CHECK_FALSE(rep.ok);
        bool named = false;
        for (const auto& f : rep.failures)
            named = named || f.find("past cone of the base jam event") != std::string::npos;
        CHECK(named);
    }
}

TEST_CASE("loop_check refuses invalid configurations") {
    RelayConfiguration cfg;
    cfg.base = base_triple();
    cfg.base.j = ev1(0, 10);
    CHECK_THROWS_AS(loop_check(cfg), std::invalid_argument);
}

TEST_CASE("random configurations validate by construction") {
    for (int depth : {0, 1, 2, 3}) {
        for (int dim : {1, 2}) {
            const auto gen = random_configuration(depth, dim, 1000 + depth * 10 + dim);
            // Each generation extends at least one relay on both sides.
            const auto n_relays = gen.config.relays.size();
            CHECK(n_relays >= static_cast<std::size_t>(2 * depth));
            CHECK(n_relays <= static_cast<std::size_t>(2 * ((1 << depth) - 1)));
            CHECK(gen.config.dimension() == dim);
            CHECK(validate_configuration(gen.config));
            CHECK(gen.stats.attempts >= 1);
            CHECK(gen.stats.accepted == 1);
        }
    }

    // Depth 1 is the two-jammer setup: one relay reads each base result,
    // three triples in total.
    const auto gen = random_configuration(1, 1, 7);
    REQUIRE(gen.config.relays.size() == 2);
    CHECK(gen.config.relays[0].reads.parent == -1);
    CHECK(gen.config.relays[1].reads.parent == -1);
    CHECK(gen.config.relays[0].reads.side != gen.config.relays[1].reads.side);
}

TEST_CASE("generation is deterministic under the seed") {
    const auto g1 = random_configuration(2, 1, 99);
    const auto g2 = random_configuration(2, 1, 99);
    CHECK(g1.config.base.j == g2.config.base.j);
    REQUIRE(g1.config.relays.size() == g2.config.relays.size());
    for (std::size_t k = 0; k < g1.config.relays.size(); ++k)
        CHECK(g1.config.relays[k].triple.j == g2.config.relays[k].triple.j);
}

TEST_CASE("a too-small budget is reported, not looped on") {
    GeneratorOptions opt;
    opt.budget = 3;  // a depth-3 configuration needs at least 4 samples
    CHECK_THROWS_AS(random_configuration(3, 1, 5, opt), SamplingBudgetExhausted);
}

TEST_CASE("randomized search finds no closed loops") {
    for (int dim : {1, 2}) {
        for (int i = 0; i < 40; ++i) {
            const int depth = i % 4;
            const auto gen = random_configuration(depth, dim, substream(7777, i * 2 + dim));
            const auto v = loop_check(gen.config);
            INFO("dim=" << dim << " i=" << i << " reason: " << v.reason);
            REQUIRE_FALSE(v.loop_closed);
        }
    }
}

TEST_CASE("closing a loop by hand trips a named admission constraint") {
    // Force the base jam event into a relay's cone overlap; the relay's own
    // containment condition then requires its jam event to causally precede
    // the base jam event, so validation must reject the configuration with
    // an attributable failure.
    RelayConfiguration cfg;
    cfg.base = base_triple();
    cfg.relays.push_back(relay_above_a());
    REQUIRE(validate_configuration(cfg));

    const auto& t = cfg.relays[0].triple;
    const Event overlap_point = minkowski::cone_join_1p1(t.a, t.b);
    cfg.base.j = Event{overlap_point.t + 0.5, overlap_point.x};  // deep inside both cones

    REQUIRE(minkowski::future_slack(t.a, cfg.base.j) >= 0.0);
    REQUIRE(minkowski::future_slack(t.b, cfg.base.j) >= 0.0);

    const auto rep = validate_configuration_report(cfg);
    CHECK_FALSE(rep.ok);
    REQUIRE_FALSE(rep.failures.empty());
    // Every failure names a constraint; at least one pins the causal order.
    bool named = false;
    for (const auto& f : rep.failures)
        named = named || f.find("past cone of the base jam event") != std::string::npos ||
                f.find("containment") != std::string::npos;
    CHECK(named);
}

TEST_CASE("adversarial perturbation cannot close a loop") {
    for (int i = 0; i < 6; ++i) {
        const auto gen = random_configuration(1 + i % 3, 1, substream(31415, i));
        AdversarialOptions opt;
        opt.iterations = 150;
        const auto res = adversarial_loop_search(gen.config, substream(2718, i), opt);
        INFO("best objective " << res.best_objective);
        REQUIRE_FALSE(res.loop_found);
        CHECK(res.best_objective < 0.0);
        CHECK(validate_configuration(res.config));
    }
}

TEST_CASE("verdicts survive common boosts") {
    SplitMix64 rng(515);
    for (int i = 0; i < 10; ++i) {
        const auto gen = random_configuration(2, 1, substream(808, i));
        const auto rest = loop_check(gen.config);
        for (int k = 0; k < 5; ++k) {
            const Boost bo(vec1(rng.uniform(-0.9, 0.9)));
            const auto moved = boosted(gen.config, bo);
            CHECK(validate_configuration(moved));
            CHECK(loop_check(moved).loop_closed == rest.loop_closed);
        }
    }
}
