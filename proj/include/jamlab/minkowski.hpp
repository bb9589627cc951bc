/*
 * minkowski.hpp — flat space-time primitives.
 *
 * Events live in 1+d dimensions (d = 1, 2 or 3 spatial coordinates, c = 1,
 * metric signature +,-,...,-). Provides the invariant interval, causal
 * classification of event pairs, Lorentz boosts, and the slack function
 * measuring how deep a point sits inside a future light cone.
 *
 * Light cones are closed throughout: lightlike separation counts as causal.
 */
#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace jamlab::minkowski {

// Spatial vector of dimension 1-3 with fixed storage.
struct Vec {
    int dim = 1;
    std::array<double, 3> c{0.0, 0.0, 0.0};

    double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }

    friend bool operator==(const Vec&, const Vec&) = default;
};

inline Vec vec1(double x) { return Vec{1, {x, 0.0, 0.0}}; }
inline Vec vec2(double x, double y) { return Vec{2, {x, y, 0.0}}; }
inline Vec vec3(double x, double y, double z) { return Vec{3, {x, y, z}}; }

inline void require_same_dim(const Vec& u, const Vec& v) {
    if (u.dim < 1 || u.dim > 3 || u.dim != v.dim)
        throw std::invalid_argument("dimension mismatch: " + std::to_string(u.dim) +
                                    " vs " + std::to_string(v.dim));
}

inline Vec operator+(const Vec& u, const Vec& v) {
    require_same_dim(u, v);
    Vec r = u;
    for (int i = 0; i < u.dim; ++i) r[i] += v[i];
    return r;
}

inline Vec operator-(const Vec& u, const Vec& v) {
    require_same_dim(u, v);
    Vec r = u;
    for (int i = 0; i < u.dim; ++i) r[i] -= v[i];
    return r;
}

inline Vec operator*(double s, const Vec& v) {
    Vec r = v;
    for (int i = 0; i < v.dim; ++i) r[i] *= s;
    return r;
}

inline double dot(const Vec& u, const Vec& v) {
    require_same_dim(u, v);
    double s = 0.0;
    for (int i = 0; i < u.dim; ++i) s += u[i] * v[i];
    return s;
}

inline double norm(const Vec& v) { return std::sqrt(dot(v, v)); }

// A point in flat space-time, units with c = 1.
struct Event {
    double t = 0.0;
    Vec x{};

    int dim() const { return x.dim; }

    friend bool operator==(const Event&, const Event&) = default;
};

inline Event ev1(double t, double x) { return Event{t, vec1(x)}; }
inline Event ev2(double t, double x, double y) { return Event{t, vec2(x, y)}; }
inline Event ev3(double t, double x, double y, double z) { return Event{t, vec3(x, y, z)}; }

// Invariant interval (Δt)² − |Δx|².
inline double interval_squared(const Event& p, const Event& q) {
    require_same_dim(p.x, q.x);
    const double dt = q.t - p.t;
    const Vec dx = q.x - p.x;
    return dt * dt - dot(dx, dx);
}

// Slack of q inside the closed future cone of p: (t_q − t_p) − |x_q − x_p|.
// Non-negative iff q ∈ J+(p); increases with causal depth.
inline double future_slack(const Event& p, const Event& q) {
    require_same_dim(p.x, q.x);
    return (q.t - p.t) - norm(q.x - p.x);
}

inline bool in_future_cone(const Event& p, const Event& q, double eps = 0.0) {
    return future_slack(p, q) >= -eps;
}

// Relation of the second event to the first.
enum class CausalRelation {
    TimelikeFuture,
    LightlikeFuture,
    Spacelike,
    LightlikePast,
    TimelikePast,
    Coincident,
};

inline const char* to_string(CausalRelation r) {
    switch (r) {
        case CausalRelation::TimelikeFuture: return "timelike-future";
        case CausalRelation::LightlikeFuture: return "lightlike-future";
        case CausalRelation::Spacelike: return "spacelike";
        case CausalRelation::LightlikePast: return "lightlike-past";
        case CausalRelation::TimelikePast: return "timelike-past";
        case CausalRelation::Coincident: return "coincident";
    }
    return "?";
}

inline CausalRelation causal_relation(const Event& p, const Event& q) {
    const double s2 = interval_squared(p, q);
    const double dt = q.t - p.t;
    if (s2 > 0.0)
        return dt > 0.0 ? CausalRelation::TimelikeFuture : CausalRelation::TimelikePast;
    if (s2 < 0.0) return CausalRelation::Spacelike;
    if (dt > 0.0) return CausalRelation::LightlikeFuture;
    if (dt < 0.0) return CausalRelation::LightlikePast;
    return CausalRelation::Coincident;
}

inline bool is_future(CausalRelation r) {
    return r == CausalRelation::TimelikeFuture || r == CausalRelation::LightlikeFuture;
}

inline bool is_causal_future_or_equal(CausalRelation r) {
    return is_future(r) || r == CausalRelation::Coincident;
}

// Velocity of a boost; |v| < 1 strictly.
struct Boost {
    Vec v{};

    explicit Boost(const Vec& velocity) : v(velocity) {
        if (!(norm(v) < 1.0))
            throw std::invalid_argument("boost velocity must satisfy |v| < 1");
    }

    double gamma() const { return 1.0 / std::sqrt(1.0 - dot(v, v)); }
};

// Standard Lorentz boost. The spatial part uses (γ−1)/v² = γ²/(γ+1),
// which stays finite as v → 0, so v = 0 is the identity with no branch.
inline Event boost(const Event& e, const Boost& b) {
    require_same_dim(e.x, b.v);
    const double g = b.gamma();
    const double vx = dot(b.v, e.x);
    Event r;
    r.t = g * (e.t - vx);
    r.x = e.x + ((g * g / (1.0 + g)) * vx - g * e.t) * b.v;
    return r;
}

} // namespace jamlab::minkowski
