/*
 * cone.hpp — future-light-cone overlap containment.
 *
 * The central decision procedure: does the overlap of two future light
 * cones J+(a) ∩ J+(b) lie entirely within a third future cone J+(j)?
 *
 * Everything reduces to the slack f_j(p) = (t_p − t_j) − |x_p − x_j|,
 * which is non-negative exactly on the closed cone J+(j) and is
 * non-decreasing along every future-causal ray (the derivative along a
 * direction (dt, dx) with dt ≥ |dx| is dt − û·dx ≥ dt − |dx| ≥ 0).
 * Every point of the overlap sits on a future-causal ray from a minimal
 * point of the overlap, so
 *
 *     inf over the overlap of f_j  =  inf over the minimal set,
 *
 * which is a single join point w in 1+1D and the ridge
 * {p : (p−a)² = 0, (p−b)² = 0, future-directed} in d ≥ 2. The ridge is
 * unbounded, and the infimum can be approached arbitrarily far out along
 * it; its values there converge to closed-form limits indexed by spatial
 * direction, so every search below pairs a finite minimization with an
 * exact sweep of those asymptotic limits.
 *
 * Two independent routes are provided:
 *   - binary_condition: exact join in 1+1D; in d ≥ 2, minimization over
 *     the ridge directions plus the exact limits at the admissible-arc
 *     boundary;
 *   - binary_condition_oracle: a grid scan of a bounding box that walks
 *     the overlap's lower boundary cell by cell (time is resolved in
 *     closed form, only space is discretized), refined around the lowest
 *     slack seen, plus an analytic minimization of the far-field limit.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "jamlab/minkowski.hpp"

namespace jamlab::minkowski {

inline constexpr double kSlackEpsilon = 1e-9;

struct ConeContainmentVerdict {
    bool holds = true;
    std::optional<Event> witness;  // in J+(a) ∩ J+(b), strictly outside J+(j); present iff !holds
    double margin = 0.0;           // min slack over the checked set; ≥ −ε iff holds
};

// Earliest event w with J+(a) ∩ J+(b) = J+(w), 1+1D only.
// In light-cone coordinates u = t+x, v = t−x the join is the
// componentwise max.
inline Event cone_join_1p1(const Event& a, const Event& b) {
    require_same_dim(a.x, b.x);
    if (a.dim() != 1) throw std::invalid_argument("cone_join_1p1 requires one spatial dimension");
    const double u = std::max(a.t + a.x[0], b.t + b.x[0]);
    const double v = std::max(a.t - a.x[0], b.t - b.x[0]);
    return ev1(0.5 * (u + v), 0.5 * (u - v));
}

namespace detail {

inline double length_scale(const Event& a, const Event& b, const Event& j) {
    double s = 1.0;
    for (const Event* e : {&a, &b, &j}) {
        s = std::max(s, std::abs(e->t));
        for (int i = 0; i < e->dim(); ++i) s = std::max(s, std::abs(e->x[i]));
    }
    return s;
}

// Containment check once the overlap is known to equal J+(apex).
inline ConeContainmentVerdict contain_apex(const Event& j, const Event& apex, double eps) {
    ConeContainmentVerdict v;
    v.margin = future_slack(j, apex);
    v.holds = v.margin >= -eps;
    if (!v.holds) v.witness = apex;
    return v;
}

// Ridge point on ∂J+(a) ∩ ∂J+(b) in spatial direction u from a, if any.
// Returns the ray parameter s ≥ 0 with p = (t_a + s, x_a + s·u), or nullopt
// when the direction misses the ridge (or runs off past the cap).
inline std::optional<double> ridge_param(const Event& a, const Event& b, const Vec& u,
                                         double s_cap) {
    const double dt = a.t - b.t;
    const Vec d = a.x - b.x;
    const double denom = dt - dot(u, d);
    if (denom <= 0.0) return std::nullopt;
    const double s = (dot(d, d) - dt * dt) / (2.0 * denom);
    if (s < 0.0 || s > s_cap) return std::nullopt;
    return s;
}

inline Event ridge_point(const Event& a, const Vec& u, double s) {
    return Event{a.t + s, a.x + s * u};
}

struct RidgeEval {
    double value = std::numeric_limits<double>::infinity();
    Event point{};
    bool valid = false;
};

inline RidgeEval eval_direction(const Event& a, const Event& b, const Event& j, const Vec& u,
                                double s_cap) {
    RidgeEval r;
    const auto s = ridge_param(a, b, u, s_cap);
    if (!s) return r;
    r.point = ridge_point(a, u, *s);
    r.value = future_slack(j, r.point);
    r.valid = true;
    return r;
}

} // namespace detail

struct RidgeOptions {
    int samples = 8192;        // direction samples over the admissible arc / cap
    int refine_rounds = 64;    // bracket-shrinking rounds per candidate minimum
    double epsilon = kSlackEpsilon;
};

namespace detail {

inline constexpr double kPi = 3.141592653589793238462643383280;

// Exact limit of the lower-boundary slack toward spatial infinity in
// direction u: far out, every cone surface looks like t ≈ R − û·x_apex + t_apex.
inline double asymptotic_slack(const Event& a, const Event& b, const Event& j, const Vec& u) {
    return std::max(a.t - dot(u, a.x), b.t - dot(u, b.x)) - j.t + dot(u, j.x);
}

// The slack minimum over the overlap can be approached only toward the
// ridge's asymptotic directions (those with û·(x_a − x_b) = t_a − t_b), so
// every minimizer pairs its finite search with the exact limits there.
struct RidgeScan {
    RidgeEval best_finite;                                      // lowest finite ridge point seen
    double limit = std::numeric_limits<double>::infinity();    // lowest asymptotic value
};

inline ConeContainmentVerdict scan_to_verdict(const RidgeScan& scan, double eps) {
    ConeContainmentVerdict v;
    if (!scan.best_finite.valid && !std::isfinite(scan.limit)) {
        v.holds = true;  // cannot happen for spacelike pairs
        v.margin = std::numeric_limits<double>::infinity();
        return v;
    }
    v.margin = std::min(scan.best_finite.valid ? scan.best_finite.value
                                               : std::numeric_limits<double>::infinity(),
                        scan.limit);
    v.holds = v.margin >= -eps;
    if (!v.holds && scan.best_finite.valid) v.witness = scan.best_finite.point;
    return v;
}

// d = 2: sample the admissible arc of ridge directions directly, refine
// each sampled local minimum by bracket shrinking, and add the exact
// asymptotic values at the two arc endpoints.
inline ConeContainmentVerdict ridge_minimize_2d(const Event& a, const Event& b, const Event& j,
                                                const RidgeOptions& opt) {
    const double s_cap = 1e7 * length_scale(a, b, j);
    const Vec d = a.x - b.x;
    const double dt = a.t - b.t;
    const double dn = norm(d);  // > |dt| for spacelike pairs
    const double q = std::clamp(dt / dn, -1.0, 1.0);
    const double center = std::atan2(d[1], d[0]) + kPi;
    const double half = kPi - std::acos(q);  // admissible arc half-width around center

    auto dir = [](double phi) { return vec2(std::cos(phi), std::sin(phi)); };
    auto value_at = [&](double phi) { return eval_direction(a, b, j, dir(phi), s_cap); };

    const int n = std::max(64, opt.samples);
    std::vector<RidgeEval> evals(static_cast<std::size_t>(n));
    auto phi_of = [&](int i) { return center - half + 2.0 * half * (i + 0.5) / n; };
    for (int i = 0; i < n; ++i) evals[static_cast<std::size_t>(i)] = value_at(phi_of(i));

    RidgeScan scan;
    auto consider = [&](const RidgeEval& e) {
        if (e.valid && e.value < scan.best_finite.value) scan.best_finite = e;
    };

    auto value_or_inf = [&](int i) {
        if (i < 0 || i >= n) return std::numeric_limits<double>::infinity();
        const auto& e = evals[static_cast<std::size_t>(i)];
        return e.valid ? e.value : std::numeric_limits<double>::infinity();
    };

    for (int i = 0; i < n; ++i) {
        const auto& mid = evals[static_cast<std::size_t>(i)];
        if (!mid.valid) continue;
        if (mid.value > value_or_inf(i - 1) || mid.value > value_or_inf(i + 1)) continue;
        consider(mid);
        // Shrink the bracket around the local minimum by thirds.
        double phi = phi_of(i);
        double val = mid.value;
        double h = 2.0 * half / n;
        for (int round = 0; round < opt.refine_rounds && h > 1e-18; ++round) {
            for (double cand : {phi - h, phi - h / 3.0, phi + h / 3.0, phi + h}) {
                const auto e = value_at(cand);
                if (e.valid && e.value < val) {
                    val = e.value;
                    phi = cand;
                    consider(e);
                }
            }
            h /= 3.0;
        }
    }

    for (double phi : {center - half, center + half})
        scan.limit = std::min(scan.limit, asymptotic_slack(a, b, j, dir(phi)));

    return scan_to_verdict(scan, opt.epsilon);
}

// Orthonormal completion of a unit vector in 3 dimensions.
inline void frame_3d(const Vec& axis, Vec& e1, Vec& e2) {
    const Vec pick = std::abs(axis[0]) < 0.9 ? vec3(1, 0, 0) : vec3(0, 1, 0);
    const double proj = dot(pick, axis);
    Vec u = pick - proj * axis;
    const double un = norm(u);
    e1 = (1.0 / un) * u;
    e2 = vec3(axis[1] * e1[2] - axis[2] * e1[1], axis[2] * e1[0] - axis[0] * e1[2],
              axis[0] * e1[1] - axis[1] * e1[0]);
}

// d = 3: Fibonacci sampling of the admissible spherical cap, tangent-plane
// pattern refinement around separated candidates, and a dense sweep of the
// boundary circle with the exact asymptotic values.
inline ConeContainmentVerdict ridge_minimize_3d(const Event& a, const Event& b, const Event& j,
                                                const RidgeOptions& opt) {
    const double s_cap = 1e7 * length_scale(a, b, j);
    const Vec d = a.x - b.x;
    const double dt = a.t - b.t;
    const double dn = norm(d);
    const double q = std::clamp(dt / dn, -1.0, 1.0);
    const Vec axis = (1.0 / dn) * d;
    Vec e1, e2;
    frame_3d(axis, e1, e2);

    // Admissible cap: û·axis < q, i.e. z ∈ [−1, q).
    auto cap_dir = [&](double z, double psi) {
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        return z * axis + (r * std::cos(psi)) * e1 + (r * std::sin(psi)) * e2;
    };

    const int n = std::max(256, opt.samples);
    const double golden = kPi * (3.0 - std::sqrt(5.0));

    struct Candidate {
        double value;
        Vec u;
    };
    std::vector<Candidate> cands;
    RidgeScan scan;
    auto consider = [&](const RidgeEval& e) {
        if (e.valid && e.value < scan.best_finite.value) scan.best_finite = e;
    };

    for (int i = 0; i < n; ++i) {
        const double z = -1.0 + (q + 1.0) * (i + 0.5) / n;
        const Vec u = cap_dir(z, golden * i);
        const auto e = eval_direction(a, b, j, u, s_cap);
        if (!e.valid) continue;
        consider(e);
        cands.push_back({e.value, u});
    }

    std::sort(cands.begin(), cands.end(),
              [](const Candidate& l, const Candidate& r) { return l.value < r.value; });

    const double mean_spacing = std::sqrt(2.0 * kPi * (q + 1.0) / n);
    std::vector<Vec> seeds;
    for (const auto& c : cands) {
        bool nearby = false;
        for (const auto& s : seeds) nearby = nearby || norm(c.u - s) < 4.0 * mean_spacing;
        if (!nearby) seeds.push_back(c.u);
        if (seeds.size() >= 24) break;
    }

    // Tangent-plane pattern search (8 directions per round, shrink on stall).
    for (const auto& seed : seeds) {
        Vec u = seed;
        auto cur = eval_direction(a, b, j, u, s_cap);
        double h = 2.0 * mean_spacing;
        for (int round = 0; round < 2 * opt.refine_rounds && h > 1e-14; ++round) {
            Vec t1, t2;
            frame_3d(u, t1, t2);
            bool moved = false;
            for (int k = 0; k < 8; ++k) {
                const double ang = 2.0 * kPi * k / 8.0;
                Vec cand = u + (h * std::cos(ang)) * t1 + (h * std::sin(ang)) * t2;
                cand = (1.0 / norm(cand)) * cand;
                const auto e = eval_direction(a, b, j, cand, s_cap);
                if (e.valid && (!cur.valid || e.value < cur.value)) {
                    cur = e;
                    u = cand;
                    consider(e);
                    moved = true;
                    break;
                }
            }
            if (!moved) h *= 0.5;
        }
    }

    // Boundary circle z = q: exact asymptotic values, densely sampled and
    // refined by bracket shrinking.
    auto boundary_value = [&](double psi) { return asymptotic_slack(a, b, j, cap_dir(q, psi)); };
    const int m = 2048;
    int best_i = 0;
    double best_v = boundary_value(0.0);
    for (int i = 1; i < m; ++i) {
        const double v = boundary_value(2.0 * kPi * i / m);
        if (v < best_v) {
            best_v = v;
            best_i = i;
        }
    }
    double psi = 2.0 * kPi * best_i / m;
    double h = 2.0 * kPi / m;
    for (int round = 0; round < 80 && h > 1e-15; ++round) {
        for (double cand : {psi - h, psi - h / 3.0, psi + h / 3.0, psi + h}) {
            const double v = boundary_value(cand);
            if (v < best_v) {
                best_v = v;
                psi = cand;
            }
        }
        h /= 3.0;
    }
    scan.limit = best_v;

    return scan_to_verdict(scan, opt.epsilon);
}

} // namespace detail

// Does J+(a) ∩ J+(b) lie entirely within J+(j)?
// Exact via the light-cone join in 1+1D; ridge minimization in d ≥ 2.
// If a and b are causally related the overlap collapses to a single cone
// and the check reduces to a slack test against its apex.
inline ConeContainmentVerdict binary_condition(const Event& a, const Event& b, const Event& j,
                                               const RidgeOptions& opt = {}) {
    require_same_dim(a.x, b.x);
    require_same_dim(a.x, j.x);

    const CausalRelation ab = causal_relation(a, b);
    if (is_causal_future_or_equal(ab))  // b later or coincident: overlap = J+(b)
        return detail::contain_apex(j, b, opt.epsilon);
    if (is_future(causal_relation(b, a)))  // a later: overlap = J+(a)
        return detail::contain_apex(j, a, opt.epsilon);

    if (a.dim() == 1) {
        const Event w = cone_join_1p1(a, b);
        ConeContainmentVerdict v;
        v.margin = future_slack(j, w);
        v.holds = v.margin >= -opt.epsilon;
        if (!v.holds) v.witness = w;
        return v;
    }
    if (a.dim() == 2) return detail::ridge_minimize_2d(a, b, j, opt);
    return detail::ridge_minimize_3d(a, b, j, opt);
}

// Axis-aligned space-time box given by two corner events.
struct GridBox {
    Event lo;
    Event hi;
};

struct OracleOptions {
    double epsilon = kSlackEpsilon;
    int keep_cap = 400;         // most promising cells carried between refinement levels
    double resolution = 1e-9;   // stop once the refined step falls below this
};

namespace detail {

// Minimum of the exact asymptotic slack over all spatial directions,
// computed analytically. Writing g_e(û) = (t_e − t_j) + û·(x_j − x_e),
// the asymptotic slack is max(g_a, g_b); its minimum over the sphere is
// attained either at a branch's own minimizing direction (where that
// branch still dominates) or on the crossing set g_a = g_b, which is a
// pair of directions in 2D and a circle in 3D — all closed-form.
inline std::pair<double, Vec> far_field_min(const Event& a, const Event& b, const Event& j,
                                            int dim) {
    const Vec va = j.x - a.x;
    const Vec vb = j.x - b.x;
    const double ca = a.t - j.t, cb = b.t - j.t;
    auto value = [&](const Vec& u) { return asymptotic_slack(a, b, j, u); };

    if (dim == 1) {
        const Vec left = vec1(-1.0), right = vec1(1.0);
        const double vl = value(left), vr = value(right);
        return vl <= vr ? std::make_pair(vl, left) : std::make_pair(vr, right);
    }

    double best = std::numeric_limits<double>::infinity();
    Vec best_u = va;
    auto consider = [&](const Vec& u) {
        const double v = value(u);
        if (v < best) {
            best = v;
            best_u = u;
        }
    };

    auto axis_dir = [&](const Vec& v, double fallback0) {
        const double n = norm(v);
        if (n > 0.0) return (1.0 / n) * v;
        Vec u{};
        u.dim = dim;
        u[0] = fallback0;
        return u;
    };

    // Branch minima: û = −v̂_e minimizes g_e. Evaluating through `value`
    // always yields the true max, so spurious candidates cannot hurt.
    const Vec ua = -1.0 * axis_dir(va, 1.0);
    const Vec ub = -1.0 * axis_dir(vb, 1.0);
    consider(ua);
    consider(ub);

    // Crossing set: û·w = c with w = v_a − v_b = x_b − x_a, c = cb − ca.
    const Vec w = va - vb;
    const double wn = norm(w);
    const double c = cb - ca;
    if (wn > 0.0 && std::abs(c) <= wn) {
        const double q = c / wn;
        const Vec wh = (1.0 / wn) * w;
        const double perp = std::sqrt(std::max(0.0, 1.0 - q * q));
        if (dim == 2) {
            const Vec t = vec2(-wh[1], wh[0]);
            consider(q * wh + perp * t);
            consider(q * wh - perp * t);
        } else {
            // Minimize the (equal) branch value g_a over the crossing circle:
            // linear in û, so the minimum points against v_a's component
            // perpendicular to w.
            const Vec va_perp = va - dot(va, wh) * wh;
            const double pn = norm(va_perp);
            if (pn > 0.0) {
                consider(q * wh - (perp / pn) * va_perp);
            } else {
                Vec t1, t2;
                frame_3d(wh, t1, t2);
                consider(q * wh + perp * t1);
            }
        }
    } else if (wn == 0.0) {
        // Same spatial apex: one branch dominates everywhere.
        consider(ca >= cb ? ua : ub);
    }
    return {best, best_u};
}

} // namespace detail

// Independent brute-force check of the same containment question.
//
// Scans the spatial grid of the box; for each spatial position x the
// earliest causal time over both apexes is closed-form,
// t_low(x) = max(t_a + |x−x_a|, t_b + |x−x_b|), so the scan walks the
// overlap's lower boundary exactly in t and only discretizes space.
// Any scanned point with slack below −ε falsifies containment; the
// lowest cells are re-scanned at geometrically finer steps. The box scan
// is completed by a sweep of the asymptotic directions, where the
// lower-boundary slack has an exact limit: the overlap reaches spatial
// infinity in every direction, and its slack there can undercut anything
// a finite box contains.
inline ConeContainmentVerdict binary_condition_oracle(const Event& a, const Event& b,
                                                      const Event& j, const GridBox& box,
                                                      double step,
                                                      const OracleOptions& opt = {}) {
    require_same_dim(a.x, b.x);
    require_same_dim(a.x, j.x);
    require_same_dim(box.lo.x, a.x);
    require_same_dim(box.hi.x, a.x);
    if (!(step > 0.0)) throw std::invalid_argument("oracle grid step must be positive");
    for (int i = 0; i < a.dim(); ++i)
        if (!(box.lo.x[i] < box.hi.x[i])) throw std::invalid_argument("empty oracle box");
    if (!(box.lo.t < box.hi.t)) throw std::invalid_argument("empty oracle box");

    const int d = a.dim();

    struct Probe {
        double value;
        Event point;
    };

    auto probe = [&](const Vec& x) -> std::optional<Probe> {
        const double t_low =
            std::max(a.t + norm(x - a.x), b.t + norm(x - b.x));
        const double t = std::max(t_low, box.lo.t);
        if (t > box.hi.t) return std::nullopt;
        const Event p{t, x};
        return Probe{future_slack(j, p), p};
    };

    struct Cell {
        double value;
        Vec x;
    };

    auto scan = [&](const Vec& lo, const Vec& hi, double h, std::vector<Cell>& out) {
        std::array<int, 3> n{1, 1, 1};
        for (int i = 0; i < d; ++i)
            n[static_cast<std::size_t>(i)] =
                std::max(2, static_cast<int>(std::floor((hi[i] - lo[i]) / h)) + 1);
        Vec x = lo;
        for (int i0 = 0; i0 < n[0]; ++i0) {
            x[0] = lo[0] + i0 * h;
            for (int i1 = 0; i1 < n[1]; ++i1) {
                if (d > 1) x[1] = lo[1] + i1 * h;
                for (int i2 = 0; i2 < n[2]; ++i2) {
                    if (d > 2) x[2] = lo[2] + i2 * h;
                    if (auto pr = probe(x)) out.push_back({pr->value, x});
                }
            }
        }
    };

    std::vector<Cell> cells;
    scan(box.lo.x, box.hi.x, step, cells);

    const auto [far_value, far_dir] = detail::far_field_min(a, b, j, d);
    auto far_witness = [&]() {
        const double radius = 1e7 * detail::length_scale(a, b, j);
        const Vec x = radius * far_dir;
        const double t_low = std::max(a.t + norm(x - a.x), b.t + norm(x - b.x));
        return Event{t_low, x};
    };

    ConeContainmentVerdict v;
    if (cells.empty()) {  // overlap never enters the box; asymptotics still apply
        v.margin = far_value;
        v.holds = v.margin >= -opt.epsilon;
        if (!v.holds) v.witness = far_witness();
        return v;
    }

    // Branch-and-keep refinement. The slack is 2-Lipschitz in the spatial
    // position along the lower boundary, so every cell whose value is within
    // 4h of the running minimum may still hide the true minimum; keep those
    // (capped, lowest first), probe a 5-per-axis subgrid around each, and
    // shrink the step by 4 per level.
    double h = step;
    const int keep_cap = d == 1 ? std::min(opt.keep_cap, 64) : opt.keep_cap;
    while (h > opt.resolution) {
        std::sort(cells.begin(), cells.end(),
                  [](const Cell& l, const Cell& r) { return l.value < r.value; });
        const double cutoff = cells.front().value + 4.0 * h;
        std::size_t kept = cells.size();
        while (kept > 1 && (cells[kept - 1].value > cutoff ||
                            kept > static_cast<std::size_t>(keep_cap)))
            --kept;
        cells.resize(kept);

        std::vector<Cell> next;
        next.reserve(kept * 16);
        for (const auto& c : cells) {
            Vec lo = c.x, hi = c.x;
            for (int i = 0; i < d; ++i) {
                lo[i] -= h / 2.0;
                hi[i] += h / 2.0;
            }
            scan(lo, hi, h / 4.0, next);
        }
        if (next.empty()) break;
        cells = std::move(next);
        h /= 4.0;
    }

    const auto best =
        std::min_element(cells.begin(), cells.end(),
                         [](const Cell& l, const Cell& r) { return l.value < r.value; });
    const auto pr = probe(best->x);
    const double near_value = pr ? pr->value : best->value;
    v.margin = std::min(near_value, far_value);
    v.holds = v.margin >= -opt.epsilon;
    if (!v.holds) {
        if (pr && near_value < -opt.epsilon)
            v.witness = pr->point;
        else
            v.witness = far_witness();
    }
    return v;
}

// Bounding box covering the apexes and the region where the overlap's
// lowest slack can sit, with generous padding.
inline GridBox oracle_box(const Event& a, const Event& b, const Event& j,
                          double pad_factor = 16.0) {
    const int d = a.dim();
    Vec lo = a.x, hi = a.x;
    double t_lo = a.t, t_hi = a.t;
    for (const Event* e : {&b, &j}) {
        t_lo = std::min(t_lo, e->t);
        t_hi = std::max(t_hi, e->t);
        for (int i = 0; i < d; ++i) {
            lo[i] = std::min(lo[i], e->x[i]);
            hi[i] = std::max(hi[i], e->x[i]);
        }
    }
    double spread = t_hi - t_lo;
    for (int i = 0; i < d; ++i) spread = std::max(spread, hi[i] - lo[i]);
    const double pad = pad_factor * (1.0 + spread);
    GridBox box;
    box.lo.x = lo;
    box.hi.x = hi;
    for (int i = 0; i < d; ++i) {
        box.lo.x[i] -= pad;
        box.hi.x[i] += pad;
    }
    box.lo.t = t_lo;
    box.hi.t = t_hi + 2.5 * pad;
    return box;
}

} // namespace jamlab::minkowski
