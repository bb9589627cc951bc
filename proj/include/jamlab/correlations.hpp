/*
 * correlations.hpp — jammed EPR trial engine and signaling detectors.
 *
 * A correlation model gives E(α,β) with exactly uniform single-party
 * marginals, so a trial factorizes as P(k)·P(l|k) with P(k) = 1/2 and
 * P(l|k) = (1 + k·l·E)/2. A jam policy decides per trial whether the jam
 * model replaces the primary one; the selective policy reads Alice's
 * outcome first, which is what shifts Bob's marginal and trips the
 * unary-condition detector.
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "jamlab/quantum.hpp"
#include "jamlab/rng.hpp"

namespace jamlab::correlations {

enum class ModelKind { Quantum, Decorrelate, Classicalize };

// E(α,β) family. Decorrelate scales the singlet correlation toward zero;
// Classicalize blends it toward the linear classical form, keeping perfect
// anticorrelation at equal angles for every blend weight.
struct CorrelationModel {
    ModelKind kind = ModelKind::Quantum;
    double eta = 0.0;

    static CorrelationModel quantum() { return {ModelKind::Quantum, 0.0}; }
    static CorrelationModel decorrelate(double eta) {
        check_eta(eta);
        return {ModelKind::Decorrelate, eta};
    }
    static CorrelationModel classicalize(double eta) {
        check_eta(eta);
        return {ModelKind::Classicalize, eta};
    }

    friend bool operator==(const CorrelationModel&, const CorrelationModel&) = default;

  private:
    static void check_eta(double eta) {
        if (!(eta >= 0.0 && eta <= 1.0))
            throw std::invalid_argument("jam strength must lie in [0, 1]");
    }
};

// |α − β| folded into [0, π].
inline double reduced_angle(double alpha, double beta) {
    const double two_pi = 6.283185307179586476925286766559;
    double th = std::fmod(std::abs(alpha - beta), two_pi);
    if (th > two_pi / 2.0) th = two_pi - th;
    return th;
}

inline double model_correlation(const CorrelationModel& model, double alpha, double beta) {
    if (!(model.eta >= 0.0 && model.eta <= 1.0))
        throw std::invalid_argument("jam strength must lie in [0, 1]");
    switch (model.kind) {
        case ModelKind::Quantum:
            return quantum::singlet_correlation(alpha, beta);
        case ModelKind::Decorrelate:
            return -(1.0 - model.eta) * std::cos(alpha - beta);
        case ModelKind::Classicalize: {
            const double th = reduced_angle(alpha, beta);
            const double linear = -1.0 + 2.0 * th / 3.141592653589793238462643383280;
            return (1.0 - model.eta) * (-std::cos(th)) + model.eta * linear;
        }
    }
    throw std::logic_error("unreachable");
}

enum class JamPolicy { Never, Always, SelectiveOnAlicePlus };

struct TrialRecord {
    int alice_outcome = 0;  // ±1
    int bob_outcome = 0;    // ±1
    double alice_angle = 0.0;
    double bob_angle = 0.0;
    bool jammed = false;
};

// One entangled pair per trial; trial i draws from a stream derived from
// (seed, i), so a run can be sharded without changing its records.
inline std::vector<TrialRecord> sample_trials(const CorrelationModel& model,
                                              const CorrelationModel& jam_model, JamPolicy policy,
                                              double alpha, double beta, std::uint64_t trials,
                                              std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("need at least one trial");
    std::vector<TrialRecord> out;
    out.reserve(trials);
    for (std::uint64_t i = 0; i < trials; ++i) {
        SplitMix64 rng(substream(seed, i));
        TrialRecord r;
        r.alice_angle = alpha;
        r.bob_angle = beta;
        r.alice_outcome = rng.sign();
        switch (policy) {
            case JamPolicy::Never: r.jammed = false; break;
            case JamPolicy::Always: r.jammed = true; break;
            case JamPolicy::SelectiveOnAlicePlus: r.jammed = (r.alice_outcome == +1); break;
        }
        const double corr = model_correlation(r.jammed ? jam_model : model, alpha, beta);
        const double p_bob_plus = 0.5 * (1.0 + r.alice_outcome * corr);
        r.bob_outcome = rng.uniform() < p_bob_plus ? +1 : -1;
        out.push_back(r);
    }
    return out;
}

// Joint ± tallies with the derived per-party marginals.
struct CountTable {
    std::uint64_t n_pp = 0, n_pm = 0, n_mp = 0, n_mm = 0;

    std::uint64_t na_plus() const { return n_pp + n_pm; }
    std::uint64_t na_minus() const { return n_mp + n_mm; }
    std::uint64_t nb_plus() const { return n_pp + n_mp; }
    std::uint64_t nb_minus() const { return n_pm + n_mm; }
    std::uint64_t total() const { return n_pp + n_pm + n_mp + n_mm; }
};

inline CountTable tally(std::span<const TrialRecord> trials) {
    CountTable t;
    for (const auto& r : trials) {
        if (r.alice_outcome == +1)
            ++(r.bob_outcome == +1 ? t.n_pp : t.n_pm);
        else
            ++(r.bob_outcome == +1 ? t.n_mp : t.n_mm);
    }
    return t;
}

inline double empirical_correlation(std::span<const TrialRecord> trials) {
    if (trials.empty()) throw std::invalid_argument("empty trial sequence");
    double s = 0.0;
    for (const auto& r : trials) s += r.alice_outcome * r.bob_outcome;
    return s / static_cast<double>(trials.size());
}

struct SignalVerdict {
    double z_statistic = 0.0;
    bool signaling = false;
    double threshold = 5.0;
};

struct UnaryCheckResult {
    SignalVerdict alice;
    SignalVerdict bob;
};

namespace detail {

// Two-proportion z with the variance taken from the jam-off run, which
// plays the role of the null model the jam-on run is tested against.
inline SignalVerdict proportion_z(std::uint64_t plus_off, std::uint64_t total_off,
                                  std::uint64_t plus_on, std::uint64_t total_on,
                                  double threshold) {
    const double p0 = static_cast<double>(plus_off) / static_cast<double>(total_off);
    const double p1 = static_cast<double>(plus_on) / static_cast<double>(total_on);
    double var = p0 * (1.0 - p0);
    if (var == 0.0) {
        const double pooled = static_cast<double>(plus_off + plus_on) /
                              static_cast<double>(total_off + total_on);
        var = pooled * (1.0 - pooled);
    }
    SignalVerdict v;
    v.threshold = threshold;
    if (var == 0.0) {
        v.z_statistic = (p1 == p0) ? 0.0 : std::numeric_limits<double>::infinity();
    } else {
        const double se = std::sqrt(var * (1.0 / static_cast<double>(total_off) +
                                           1.0 / static_cast<double>(total_on)));
        v.z_statistic = (p1 - p0) / se;
    }
    v.signaling = std::abs(v.z_statistic) > threshold;
    return v;
}

} // namespace detail

// Compare each party's + marginal between a jam-off and a jam-on run.
// A flagged party means the jam leaks a one-sided signal.
inline UnaryCheckResult unary_check(const CountTable& off, const CountTable& on,
                                    double threshold = 5.0) {
    if (off.total() == 0 || on.total() == 0)
        throw std::invalid_argument("count tables must be non-empty");
    UnaryCheckResult r;
    r.alice = detail::proportion_z(off.na_plus(), off.total(), on.na_plus(), on.total(), threshold);
    r.bob = detail::proportion_z(off.nb_plus(), off.total(), on.nb_plus(), on.total(), threshold);
    return r;
}

// Empirical CHSH combination from four independently sampled angle pairs.
inline double empirical_chsh(const CorrelationModel& model, const CorrelationModel& jam_model,
                             JamPolicy policy, double alpha1, double alpha2, double beta1,
                             double beta2, std::uint64_t trials_per_pair, std::uint64_t seed) {
    const double pairs[4][2] = {
        {alpha1, beta1}, {alpha1, beta2}, {alpha2, beta1}, {alpha2, beta2}};
    double e[4];
    for (int k = 0; k < 4; ++k) {
        const auto trials = sample_trials(model, jam_model, policy, pairs[k][0], pairs[k][1],
                                          trials_per_pair, substream(seed, 0xC0FFEE + k));
        e[k] = empirical_correlation(trials);
    }
    return e[0] + e[1] + e[2] - e[3];
}

} // namespace jamlab::correlations
