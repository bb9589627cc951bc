#include <catch2/catch.hpp>

#include <cmath>

#include "jamlab/cone.hpp"
#include "jamlab/minkowski.hpp"
#include "jamlab/rng.hpp"

using namespace jamlab;
using namespace jamlab::minkowski;

namespace {

Event random_event(SplitMix64& rng, int dim, double range) {
    Event e;
    e.t = rng.uniform(-range, range);
    e.x.dim = dim;
    for (int i = 0; i < dim; ++i) e.x[i] = rng.uniform(-range, range);
    return e;
}

// Future-causal displacement: dt >= |dx|.
Event nudged(SplitMix64& rng, const Event& p, double scale) {
    Vec dx{};
    dx.dim = p.dim();
    double n2 = 0.0;
    for (int i = 0; i < p.dim(); ++i) {
        dx[i] = rng.uniform(-1.0, 1.0);
        n2 += dx[i] * dx[i];
    }
    const double r = rng.uniform(0.0, scale);
    const double dt = r * (1.0 + rng.uniform());  // dt in [r, 2r]
    const double inv = n2 > 0 ? r / std::sqrt(n2) : 0.0;
    Event q = p;
    q.t += dt;
    for (int i = 0; i < p.dim(); ++i) q.x[i] += dx[i] * inv;
    return q;
}

bool agree(const ConeContainmentVerdict& lhs, const ConeContainmentVerdict& rhs,
           double boundary_band) {
    if (lhs.holds == rhs.holds) return true;
    // Excuse genuine boundary cases: the margin sits within the band of the
    // decision threshold.
    return std::abs(lhs.margin + kSlackEpsilon) <= boundary_band;
}

// Step sized so the box resolves into the given number of cells per axis.
double box_step(const GridBox& box, int dim, int cells) {
    double extent = box.hi.t - box.lo.t;
    for (int i = 0; i < dim; ++i) extent = std::max(extent, box.hi.x[i] - box.lo.x[i]);
    return extent / cells;
}

} // namespace

TEST_CASE("cone_join_1p1 on fixed pairs") {
    const Event a = ev1(0.7, -0.3);
    const Event w0 = cone_join_1p1(a, a);
    CHECK(w0.t == Approx(a.t));
    CHECK(w0.x[0] == Approx(a.x[0]));

    const Event w1 = cone_join_1p1(ev1(0, -1), ev1(0, 1));
    CHECK(w1.t == Approx(1.0));
    CHECK(w1.x[0] == Approx(0.0).margin(1e-15));

    const Event w2 = cone_join_1p1(ev1(0, -1), ev1(0, 10));
    CHECK(w2.t == Approx(5.5));
    CHECK(w2.x[0] == Approx(4.5));
}

TEST_CASE("cone_join_1p1 characterizes the overlap") {
    SplitMix64 rng(555);
    for (int i = 0; i < 50; ++i) {
        const Event a = random_event(rng, 1, 3.0);
        const Event b = random_event(rng, 1, 3.0);
        const Event w = cone_join_1p1(a, b);
        for (int k = 0; k < 1000; ++k) {
            const Event p = random_event(rng, 1, 6.0);
            const bool in_both = in_future_cone(a, p) && in_future_cone(b, p);
            const bool in_join = in_future_cone(w, p);
            CHECK(in_both == in_join);
        }
    }
}

TEST_CASE("binary_condition on the canonical 1+1D configurations") {
    const Event a = ev1(0, -1), b = ev1(0, 1);

    SECTION("jammer near the source: allowed") {
        const auto v = binary_condition(a, b, ev1(-1, 0));
        CHECK(v.holds);
        CHECK_FALSE(v.witness.has_value());
        CHECK(v.margin == Approx(2.0));
    }
    SECTION("detectors adjacent, jammer far away: forbidden") {
        const auto v = binary_condition(a, b, ev1(0, 10));
        CHECK_FALSE(v.holds);
        CHECK(v.margin == Approx(-9.0));
        REQUIRE(v.witness.has_value());
        CHECK(v.witness->t == Approx(1.0));
        CHECK(v.witness->x[0] == Approx(0.0).margin(1e-12));
    }
    SECTION("jammer reading one detector: forbidden") {
        const auto v = binary_condition(a, ev1(0, 10), ev1(0.5, -1));
        CHECK_FALSE(v.holds);
        CHECK(v.margin == Approx(-0.5));
        REQUIRE(v.witness.has_value());
        CHECK(v.witness->t == Approx(5.5));
        CHECK(v.witness->x[0] == Approx(4.5));
    }
}

TEST_CASE("binary_condition degenerate reductions") {
    SECTION("all three coincident") {
        const Event e = ev2(0.5, 1.0, -2.0);
        const auto v = binary_condition(e, e, e);
        CHECK(v.holds);
        CHECK(v.margin == Approx(0.0).margin(1e-15));
    }
    SECTION("b inside the future cone of a: overlap is J+(b)") {
        const Event a = ev1(0, 0), b = ev1(2, 0.5);
        CHECK(binary_condition(a, b, ev1(1.5, 0.5)).holds);      // j below b
        CHECK_FALSE(binary_condition(a, b, ev1(1.5, 3.0)).holds);  // j sideways
        const auto v = binary_condition(a, b, ev1(0, 0));
        CHECK(v.holds);
        CHECK(v.margin == Approx(future_slack(ev1(0, 0), b)));
    }
    SECTION("coincident detectors reduce to apex containment") {
        const Event a = ev2(1, 0, 0);
        CHECK(binary_condition(a, a, ev2(0, 0, 0)).holds);
        CHECK_FALSE(binary_condition(a, a, ev2(2, 0, 0)).holds);
    }
}

TEST_CASE("binary_condition rejects mismatched dimensions") {
    CHECK_THROWS_AS(binary_condition(ev1(0, 0), ev1(0, 1), ev2(0, 0, 0)), std::invalid_argument);
}

TEST_CASE("slack is monotone along future-causal rays") {
    SplitMix64 rng(99);
    for (int dim = 1; dim <= 3; ++dim) {
        for (int i = 0; i < 2000; ++i) {
            const Event j = random_event(rng, dim, 4.0);
            const Event p = random_event(rng, dim, 4.0);
            const Event q = nudged(rng, p, 3.0);
            CHECK(future_slack(j, q) >= future_slack(j, p) - 1e-12);
        }
    }
}

TEST_CASE("oracle reproduces the canonical verdicts") {
    const Event a = ev1(0, -1), b = ev1(0, 1);
    struct Case {
        Event j;
        bool holds;
        double margin;
    };
    const Case cases[] = {
        {ev1(-1, 0), true, 2.0},
        {ev1(0, 10), false, -9.0},
    };
    for (const auto& c : cases) {
        const auto v = binary_condition_oracle(a, b, c.j, oracle_box(a, b, c.j), 0.25);
        CHECK(v.holds == c.holds);
        CHECK(v.margin == Approx(c.margin).margin(1e-6));
    }

    const Event j3 = ev1(0.5, -1), b3 = ev1(0, 10);
    const auto v3 = binary_condition_oracle(a, b3, j3, oracle_box(a, b3, j3), 0.25);
    CHECK_FALSE(v3.holds);
    CHECK(v3.margin == Approx(-0.5).margin(1e-6));

    const Event e = ev1(0.25, 0.75);
    const auto self = binary_condition_oracle(e, e, e, oracle_box(e, e, e), 0.25);
    CHECK(self.holds);
    CHECK(self.margin == Approx(0.0).margin(1e-9));
}

TEST_CASE("oracle validates its inputs") {
    const Event a = ev1(0, -1), b = ev1(0, 1), j = ev1(-1, 0);
    GridBox box = oracle_box(a, b, j);
    CHECK_THROWS_AS(binary_condition_oracle(a, b, j, box, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(binary_condition_oracle(a, b, j, box, -1.0), std::invalid_argument);
    GridBox empty = box;
    empty.hi = empty.lo;
    CHECK_THROWS_AS(binary_condition_oracle(a, b, j, empty, 0.25), std::invalid_argument);
}

TEST_CASE("closed form and oracle agree on random 1+1D triples") {
    SplitMix64 rng(4242);
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
        const Event a = random_event(rng, 1, 5.0);
        const Event b = random_event(rng, 1, 5.0);
        const Event j = random_event(rng, 1, 5.0);
        const auto closed = binary_condition(a, b, j);
        const auto box = oracle_box(a, b, j);
        const auto grid = binary_condition_oracle(a, b, j, box, box_step(box, 1, 96));
        INFO("a=(" << a.t << "," << a.x[0] << ") b=(" << b.t << "," << b.x[0] << ") j=(" << j.t
                   << "," << j.x[0] << ")");
        REQUIRE(agree(closed, grid, 1e-9));
        if (std::isfinite(grid.margin)) {
            CHECK(grid.margin == Approx(closed.margin).margin(1e-6));
            ++checked;
        }
    }
    CHECK(checked > 900);
}

TEST_CASE("closed form and oracle agree on random 2+1D triples") {
    SplitMix64 rng(31337);
    for (int i = 0; i < 150; ++i) {
        const Event a = random_event(rng, 2, 5.0);
        const Event b = random_event(rng, 2, 5.0);
        const Event j = random_event(rng, 2, 5.0);
        const auto closed = binary_condition(a, b, j);
        const auto box = oracle_box(a, b, j);
        const auto grid = binary_condition_oracle(a, b, j, box, box_step(box, 2, 96));
        INFO("i=" << i << " closed margin " << closed.margin << " grid margin " << grid.margin);
        REQUIRE(agree(closed, grid, 1e-6));
        if (std::isfinite(grid.margin))
            CHECK(grid.margin == Approx(closed.margin).margin(1e-6));
    }
}

TEST_CASE("closed form and oracle agree on random 3+1D triples") {
    SplitMix64 rng(808);
    for (int i = 0; i < 40; ++i) {
        const Event a = random_event(rng, 3, 3.0);
        const Event b = random_event(rng, 3, 3.0);
        const Event j = random_event(rng, 3, 3.0);
        const auto closed = binary_condition(a, b, j);
        const auto box = oracle_box(a, b, j, 10.0);
        const auto grid = binary_condition_oracle(a, b, j, box, box_step(box, 3, 48));
        INFO("i=" << i << " closed margin " << closed.margin << " grid margin " << grid.margin);
        REQUIRE(agree(closed, grid, 1e-4));
    }
}

TEST_CASE("witnesses certify their verdicts") {
    SplitMix64 rng(60601);
    for (int dim = 1; dim <= 2; ++dim) {
        for (int i = 0; i < 300; ++i) {
            const Event a = random_event(rng, dim, 4.0);
            const Event b = random_event(rng, dim, 4.0);
            const Event j = random_event(rng, dim, 4.0);
            const auto v = binary_condition(a, b, j);
            if (v.holds) {
                CHECK_FALSE(v.witness.has_value());
                continue;
            }
            REQUIRE(v.witness.has_value());
            CHECK(future_slack(a, *v.witness) >= -1e-7);
            CHECK(future_slack(b, *v.witness) >= -1e-7);
            CHECK(future_slack(j, *v.witness) < -kSlackEpsilon);
        }
    }
}

TEST_CASE("verdicts are invariant under common boosts") {
    SplitMix64 rng(2718);
    for (int i = 0; i < 60; ++i) {
        const Event a = random_event(rng, 1, 3.0);
        const Event b = random_event(rng, 1, 3.0);
        const Event j = random_event(rng, 1, 3.0);
        const auto rest = binary_condition(a, b, j);
        if (std::abs(rest.margin) < 1e-3) continue;  // skip knife-edge cases
        for (int k = 0; k < 10; ++k) {
            const Boost bo(vec1(rng.uniform(-0.95, 0.95)));
            const auto moving = binary_condition(boost(a, bo), boost(b, bo), boost(j, bo));
            CHECK(moving.holds == rest.holds);
        }
    }
}
