#include <catch2/catch.hpp>

#include <cmath>

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

Boost random_boost(SplitMix64& rng, int dim, double vmax) {
    Vec v{};
    v.dim = dim;
    double n2;
    do {
        n2 = 0.0;
        for (int i = 0; i < dim; ++i) {
            v[i] = rng.uniform(-1.0, 1.0);
            n2 += v[i] * v[i];
        }
    } while (n2 >= 1.0 || n2 < 1e-12);
    const double speed = vmax * std::cbrt(rng.uniform());
    const double scale = speed / std::sqrt(n2);
    for (int i = 0; i < dim; ++i) v[i] *= scale;
    return Boost(v);
}

CausalRelation mirrored(CausalRelation r) {
    switch (r) {
        case CausalRelation::TimelikeFuture: return CausalRelation::TimelikePast;
        case CausalRelation::TimelikePast: return CausalRelation::TimelikeFuture;
        case CausalRelation::LightlikeFuture: return CausalRelation::LightlikePast;
        case CausalRelation::LightlikePast: return CausalRelation::LightlikeFuture;
        default: return r;
    }
}

} // namespace

TEST_CASE("interval_squared on fixed pairs") {
    CHECK(interval_squared(ev1(0.3, -1.2), ev1(0.3, -1.2)) == 0.0);
    CHECK(interval_squared(ev1(0, 0), ev1(1, 1)) == 0.0);
    CHECK(interval_squared(ev1(0, -1), ev1(3, 1)) == Approx(5.0));
    CHECK(interval_squared(ev2(0, 0, 0), ev2(3, 1, 2)) == Approx(9.0 - 5.0));
    CHECK(interval_squared(ev3(1, 0, 0, 0), ev3(0, 1, 1, 1)) == Approx(1.0 - 3.0));
}

TEST_CASE("interval_squared rejects mismatched dimensions") {
    CHECK_THROWS_AS(interval_squared(ev1(0, 0), ev2(0, 0, 0)), std::invalid_argument);
}

TEST_CASE("causal_relation classifies the standard cases") {
    const Event o = ev1(0, 0);
    CHECK(causal_relation(o, ev1(2, 0)) == CausalRelation::TimelikeFuture);
    CHECK(causal_relation(o, ev1(0, 5)) == CausalRelation::Spacelike);
    CHECK(causal_relation(o, ev1(1, 1)) == CausalRelation::LightlikeFuture);
    CHECK(causal_relation(o, ev1(-1, 1)) == CausalRelation::LightlikePast);
    CHECK(causal_relation(o, ev1(-3, 1)) == CausalRelation::TimelikePast);
    CHECK(causal_relation(o, ev1(0, 0)) == CausalRelation::Coincident);
}

TEST_CASE("causal_relation is antisymmetric under argument swap") {
    SplitMix64 rng(2024);
    for (int dim = 1; dim <= 3; ++dim) {
        for (int i = 0; i < 2000; ++i) {
            const Event p = random_event(rng, dim, 4.0);
            const Event q = random_event(rng, dim, 4.0);
            CHECK(causal_relation(q, p) == mirrored(causal_relation(p, q)));
        }
    }
}

TEST_CASE("boost with zero velocity is the identity") {
    const Event e = ev2(1.5, -0.25, 3.0);
    const Event r = boost(e, Boost(vec2(0.0, 0.0)));
    CHECK(r.t == Approx(e.t).margin(1e-15));
    CHECK(r.x[0] == Approx(e.x[0]).margin(1e-15));
    CHECK(r.x[1] == Approx(e.x[1]).margin(1e-15));
}

TEST_CASE("boost matches the closed form in 1+1D") {
    // v = 0.5 on (t, x) = (0, 2): t' = -2/sqrt(3), x' = 4/sqrt(3)
    const Event r = boost(ev1(0.0, 2.0), Boost(vec1(0.5)));
    CHECK(r.t == Approx(-1.1547005383792517).epsilon(1e-12));
    CHECK(r.x[0] == Approx(2.3094010767585034).epsilon(1e-12));
}

TEST_CASE("boost rejects superluminal velocities") {
    CHECK_THROWS_AS(Boost(vec1(1.0)), std::invalid_argument);
    CHECK_THROWS_AS(Boost(vec2(0.8, 0.7)), std::invalid_argument);
}

TEST_CASE("a positive boost reorders simultaneous events") {
    // Lab frame: a, j, b simultaneous at x = -2, 0, +2. Boosted frame with
    // v = +0.5 sees b before j before a.
    const Boost b(vec1(0.5));
    const double ta = boost(ev1(0, -2), b).t;
    const double tj = boost(ev1(0, 0), b).t;
    const double tb = boost(ev1(0, 2), b).t;
    CHECK(tb < tj);
    CHECK(tj < ta);
}

TEST_CASE("boost preserves the invariant interval") {
    SplitMix64 rng(77);
    for (int dim = 1; dim <= 3; ++dim) {
        for (int i = 0; i < 1000; ++i) {
            const Event p = random_event(rng, dim, 5.0);
            const Event q = random_event(rng, dim, 5.0);
            const Boost b = random_boost(rng, dim, 0.99);
            const double s2 = interval_squared(p, q);
            const double s2b = interval_squared(boost(p, b), boost(q, b));
            CHECK(std::abs(s2 - s2b) <= 1e-9 * (1.0 + std::abs(s2)));
        }
    }
}

TEST_CASE("future_slack sign agrees with the causal classification") {
    SplitMix64 rng(31);
    for (int i = 0; i < 3000; ++i) {
        const Event p = random_event(rng, 2, 4.0);
        const Event q = random_event(rng, 2, 4.0);
        const bool causal_future = is_causal_future_or_equal(causal_relation(p, q));
        CHECK(causal_future == (future_slack(p, q) >= 0.0));
    }
}
