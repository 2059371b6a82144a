#pragma once

#include <cstdint>
#include <memory>
#include <numeric>
#include <vector>

#include "ampsamp/circuit.hpp"

namespace ampsamp {

/// Uniform interface for computing <x|U_t...U_1|0^n>.
///
/// Two access styles:
///  - random access amplitude(t, x) for non-adaptive circuits;
///  - a streaming session (reset / apply / amplitude_current) used by the
///    samplers, which also works for adaptive circuits where the gate at
///    each slot is resolved on the fly.
///
/// For the noisy wrapper, amplitude_current after the t-th apply() returns the
/// unnormalized <x|U_t|phi_{t-1}> and current_norm2() returns |phi_{t-1}|^2;
/// exact backends return exact amplitudes and norm 1.
///
/// Oracles are not internally synchronized; concurrent use goes through
/// clone() (one oracle per worker). Answers are independent of interleaving.
class AmplitudeOracle {
public:
    virtual ~AmplitudeOracle() = default;

    virtual int n() const = 0;
    virtual int m() const = 0;

    virtual cplx amplitude(int t, const BitString& x) = 0;
    virtual bool supports_marginals() const { return false; }
    /// pi_j(y) at prefix t: probability that the first j qubits read y.
    virtual double marginal_probability(int /*t*/, std::uint64_t /*y*/, int /*j*/) {
        throw guard_error("marginals unsupported by this backend");
    }

    virtual void reset() = 0;
    virtual void apply(const Gate& g) = 0;
    virtual cplx amplitude_current(const BitString& x) = 0;
    virtual int current_prefix() const = 0;
    virtual double current_norm2() { return 1.0; }

    virtual std::unique_ptr<AmplitudeOracle> clone() const = 0;

    // ---- evaluation accounting ----
    const std::vector<std::int64_t>& call_counts() const { return calls_; }
    std::int64_t total_calls() const {
        return std::accumulate(calls_.begin(), calls_.end(), std::int64_t{0});
    }
    void reset_call_counts() { calls_.assign(calls_.size(), 0); }

protected:
    explicit AmplitudeOracle(int m_gates) : calls_(static_cast<std::size_t>(m_gates) + 1, 0) {}
    AmplitudeOracle(const AmplitudeOracle&) = default;
    void count_call(int t) {
        if (t >= 0 && t < static_cast<int>(calls_.size())) ++calls_[static_cast<std::size_t>(t)];
    }

private:
    std::vector<std::int64_t> calls_;
};

} // namespace ampsamp
