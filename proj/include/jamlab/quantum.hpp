/*
 * quantum.hpp — minimal pure-state engine for spin correlations.
 *
 * States are 1-3 qubit vectors; measurements are spin projections along an
 * angle in a fixed great-circle plane, σ(α) = cos α σz + sin α σx, with
 * eigenvectors |+α⟩ = (cos α/2, sin α/2), |−α⟩ = (−sin α/2, cos α/2).
 * Joint outcome probabilities follow the Born rule; marginalizing a party
 * gives distributions independent of that party's measurement choice.
 */
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

#include "jamlab/rng.hpp"

namespace jamlab::quantum {

using Complex = std::complex<double>;

inline constexpr double kNormTolerance = 1e-12;

// Normalized pure state of 1-3 qubits. Party 1 is the most significant
// bit of the amplitude index.
class StateVector {
  public:
    explicit StateVector(std::vector<Complex> amplitudes) : amps_(std::move(amplitudes)) {
        std::size_t m = amps_.size();
        n_ = 0;
        while (m > 1) {
            if (m % 2 != 0) throw std::invalid_argument("amplitude count must be a power of two");
            m /= 2;
            ++n_;
        }
        if (n_ < 1 || n_ > 3)
            throw std::invalid_argument("state must have 1 to 3 qubits");
        double norm2 = 0.0;
        for (const auto& c : amps_) norm2 += std::norm(c);
        if (std::abs(norm2 - 1.0) > kNormTolerance)
            throw std::invalid_argument("state vector is not normalized");
    }

    static StateVector normalized(std::vector<Complex> amps) {
        double norm2 = 0.0;
        for (const auto& c : amps) norm2 += std::norm(c);
        if (norm2 <= 0.0) throw std::invalid_argument("cannot normalize the zero vector");
        const double inv = 1.0 / std::sqrt(norm2);
        for (auto& c : amps) c *= inv;
        return StateVector(std::move(amps));
    }

    int qubits() const { return n_; }
    const std::vector<Complex>& amplitudes() const { return amps_; }

    // (|01⟩ − |10⟩)/√2
    static StateVector singlet() {
        const double r = 1.0 / std::sqrt(2.0);
        return StateVector({0.0, r, -r, 0.0});
    }

    // (|000⟩ + |111⟩)/√2
    static StateVector ghz3() {
        const double r = 1.0 / std::sqrt(2.0);
        std::vector<Complex> amps(8, 0.0);
        amps[0] = r;
        amps[7] = r;
        return StateVector(std::move(amps));
    }

    // |0…0⟩ (spin-up along z for every party)
    static StateVector all_plus_z(int n) {
        std::vector<Complex> amps(std::size_t{1} << n, 0.0);
        amps[0] = 1.0;
        return StateVector(std::move(amps));
    }

    // Haar-ish random state: complex-normal amplitudes, normalized.
    static StateVector random(int n, SplitMix64& rng) {
        std::vector<Complex> amps(std::size_t{1} << n);
        for (auto& c : amps) c = Complex(rng.normal(), rng.normal());
        return normalized(std::move(amps));
    }

  private:
    std::vector<Complex> amps_;
    int n_ = 0;
};

// Spin measurement along an angle for one party (1-based index).
struct LocalMeasurement {
    int party = 1;
    double angle = 0.0;
};

// Probabilities over joint ± outcomes of the measured parties, in
// measurement order; the first measurement is the most significant bit,
// outcome +1 encodes as bit 0.
class OutcomeDistribution {
  public:
    OutcomeDistribution(int parties, std::vector<double> probs)
        : parties_(parties), probs_(std::move(probs)) {
        if (probs_.size() != (std::size_t{1} << parties_))
            throw std::invalid_argument("probability table has the wrong size");
        double sum = 0.0;
        for (double p : probs_) {
            if (p < -kNormTolerance) throw std::invalid_argument("negative probability");
            sum += p;
        }
        if (std::abs(sum - 1.0) > kNormTolerance)
            throw std::invalid_argument("probabilities do not sum to 1");
    }

    int parties() const { return parties_; }

    double prob_index(std::size_t idx) const { return probs_.at(idx); }

    // outcomes: one ±1 per measured party, in measurement order.
    double prob(std::initializer_list<int> outcomes) const {
        if (static_cast<int>(outcomes.size()) != parties_)
            throw std::invalid_argument("wrong outcome tuple size");
        std::size_t idx = 0;
        for (int o : outcomes) {
            if (o != 1 && o != -1) throw std::invalid_argument("outcomes must be ±1");
            idx = (idx << 1) | (o == 1 ? 0u : 1u);
        }
        return probs_[idx];
    }

    // Marginal P(outcome) for one measured position (0-based).
    double marginal(int position, int outcome) const {
        const int shift = parties_ - 1 - position;
        const std::size_t want = outcome == 1 ? 0 : 1;
        double p = 0.0;
        for (std::size_t i = 0; i < probs_.size(); ++i)
            if (((i >> shift) & 1u) == want) p += probs_[i];
        return p;
    }

    // Distribution over the remaining positions after dropping one.
    OutcomeDistribution marginalize(int position) const {
        if (parties_ < 2) throw std::invalid_argument("nothing left to marginalize onto");
        const int shift = parties_ - 1 - position;
        std::vector<double> out(std::size_t{1} << (parties_ - 1), 0.0);
        for (std::size_t i = 0; i < probs_.size(); ++i) {
            const std::size_t high = i >> (shift + 1);
            const std::size_t low = i & ((std::size_t{1} << shift) - 1);
            out[(high << shift) | low] += probs_[i];
        }
        return OutcomeDistribution(parties_ - 1, std::move(out));
    }

  private:
    int parties_;
    std::vector<double> probs_;
};

// Singlet-state correlation of spin results along two analyzer angles.
inline double singlet_correlation(double alpha, double beta) {
    return -std::cos(alpha - beta);
}

// Born-rule joint probabilities for one measurement per measured party.
// Unmeasured parties are traced out.
inline OutcomeDistribution joint_probabilities(const StateVector& state,
                                               std::span<const LocalMeasurement> measurements) {
    const int n = state.qubits();
    if (measurements.empty()) throw std::invalid_argument("no measurements given");
    unsigned seen = 0;
    for (const auto& m : measurements) {
        if (m.party < 1 || m.party > n) throw std::invalid_argument("bad party index");
        const unsigned bit = 1u << (m.party - 1);
        if (seen & bit) throw std::invalid_argument("parties must be distinct");
        seen |= bit;
    }

    // Rotate each measured qubit into the eigenbasis of its analyzer.
    std::vector<Complex> amps = state.amplitudes();
    for (const auto& m : measurements) {
        const int bit = n - m.party;  // bit position of this party
        const std::size_t stride = std::size_t{1} << bit;
        const double c = std::cos(m.angle / 2.0), s = std::sin(m.angle / 2.0);
        for (std::size_t i = 0; i < amps.size(); ++i) {
            if (i & stride) continue;
            const Complex a0 = amps[i], a1 = amps[i | stride];
            amps[i] = c * a0 + s * a1;        // ⟨+α| component
            amps[i | stride] = -s * a0 + c * a1;  // ⟨−α| component
        }
    }

    // Sum |amplitude|² over the unmeasured qubits.
    const int m_count = static_cast<int>(measurements.size());
    std::vector<double> probs(std::size_t{1} << m_count, 0.0);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        std::size_t idx = 0;
        for (const auto& m : measurements) {
            const int bit = n - m.party;
            idx = (idx << 1) | ((i >> bit) & 1u);
        }
        probs[idx] += std::norm(amps[i]);
    }
    return OutcomeDistribution(m_count, std::move(probs));
}

// Largest change, over the third party's measurement choices, of the joint
// distribution of parties 1 and 2 with party 3 traced out. The contract
// is < 1e−10 for every state: the marginal cannot depend on the choice.
inline double no_signaling_check(const StateVector& state, const LocalMeasurement& m1,
                                 const LocalMeasurement& m2,
                                 std::span<const LocalMeasurement> third_choices) {
    if (state.qubits() != 3) throw std::invalid_argument("no-signaling check needs 3 parties");
    if (third_choices.empty()) throw std::invalid_argument("need at least one third-party choice");
    for (const auto& c : third_choices)
        if (c.party != 3) throw std::invalid_argument("third choices must address party 3");

    auto marginal12 = [&](const LocalMeasurement& third) {
        const LocalMeasurement ms[3] = {m1, m2, third};
        return joint_probabilities(state, ms).marginalize(2);
    };

    const OutcomeDistribution base = marginal12(third_choices[0]);
    double worst = 0.0;
    for (std::size_t k = 1; k < third_choices.size(); ++k) {
        const OutcomeDistribution other = marginal12(third_choices[k]);
        for (std::size_t i = 0; i < 4; ++i)
            worst = std::max(worst, std::abs(base.prob_index(i) - other.prob_index(i)));
    }
    return worst;
}

// CHSH combination E(α1,β1) + E(α1,β2) + E(α2,β1) − E(α2,β2).
template <typename Correlation>
double chsh_value(Correlation&& corr, double alpha1, double alpha2, double beta1, double beta2) {
    return corr(alpha1, beta1) + corr(alpha1, beta2) + corr(alpha2, beta1) - corr(alpha2, beta2);
}

} // namespace jamlab::quantum
