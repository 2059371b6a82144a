#pragma once

#include <cstdint>

#include "ampsamp/oracle.hpp"

namespace ampsamp {

constexpr int kStatevectorMaxQubits = 26;

/// Applies a gate to a dense state vector in place.
inline void apply_gate_dense(Vec& state, const Gate& g) {
    const int w = g.arity();
    const int d = 1 << w;
    const std::uint64_t dim = static_cast<std::uint64_t>(state.size());
    std::uint64_t smask = 0;
    for (int q : g.support) smask |= std::uint64_t{1} << q;

    std::vector<cplx> buf(static_cast<std::size_t>(d));
    for (std::uint64_t base = 0; base < dim; ++base) {
        if (base & smask) continue; // base iterates non-support assignments
        for (int a = 0; a < d; ++a) {
            std::uint64_t idx = base;
            for (int j = 0; j < w; ++j)
                if ((a >> j) & 1) idx |= std::uint64_t{1} << g.support[static_cast<std::size_t>(j)];
            buf[static_cast<std::size_t>(a)] = state[static_cast<Eigen::Index>(idx)];
        }
        for (int r = 0; r < d; ++r) {
            cplx acc = 0;
            for (int col = 0; col < d; ++col) acc += g.matrix(r, col) * buf[static_cast<std::size_t>(col)];
            std::uint64_t idx = base;
            for (int j = 0; j < w; ++j)
                if ((r >> j) & 1) idx |= std::uint64_t{1} << g.support[static_cast<std::size_t>(j)];
            state[static_cast<Eigen::Index>(idx)] = acc;
        }
    }
}

/// Full statevector of a non-adaptive circuit.
inline Vec statevector(const Circuit& c) {
    c.require_nonadaptive("statevector");
    if (c.n > kStatevectorMaxQubits) throw guard_error("statevector: too many qubits");
    Vec state = Vec::Zero(Eigen::Index{1} << c.n);
    state[0] = 1.0;
    for (const auto& g : c.gates) apply_gate_dense(state, g);
    return state;
}

/// Schrodinger-style oracle: keeps the state of the largest prefix reached,
/// so monotone-in-t queries cost one gate application per advance.
class StatevectorOracle : public AmplitudeOracle {
public:
    explicit StatevectorOracle(const Circuit& c) : AmplitudeOracle(c.m()), circuit_(c) {
        if (c.n > kStatevectorMaxQubits)
            throw guard_error("statevector oracle: n exceeds memory guard");
        reset();
    }

    int n() const override { return circuit_.n; }
    int m() const override { return circuit_.m(); }
    bool supports_marginals() const override { return true; }

    void reset() override {
        state_ = Vec::Zero(Eigen::Index{1} << circuit_.n);
        state_[0] = 1.0;
        t_ = 0;
    }

    void apply(const Gate& g) override {
        apply_gate_dense(state_, g);
        ++t_;
    }

    cplx amplitude_current(const BitString& x) override {
        count_call(t_);
        return state_[static_cast<Eigen::Index>(x.bits)];
    }

    int current_prefix() const override { return t_; }

    cplx amplitude(int t, const BitString& x) override {
        ensure_prefix(t);
        count_call(t);
        return state_[static_cast<Eigen::Index>(x.bits)];
    }

    double marginal_probability(int t, std::uint64_t y, int j) override {
        ensure_prefix(t);
        const std::uint64_t mask = (j >= 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << j) - 1);
        double acc = 0;
        const std::uint64_t dim = std::uint64_t{1} << circuit_.n;
        for (std::uint64_t idx = 0; idx < dim; ++idx)
            if ((idx & mask) == y) acc += std::norm(state_[static_cast<Eigen::Index>(idx)]);
        return acc;
    }

    std::unique_ptr<AmplitudeOracle> clone() const override {
        return std::make_unique<StatevectorOracle>(*this); // keeps the session state
    }

private:
    void ensure_prefix(int t) {
        if (t < 0 || t > circuit_.m()) throw guard_error("prefix out of range");
        circuit_.require_nonadaptive("statevector oracle random access");
        if (t < t_) reset();
        while (t_ < t) apply(circuit_.gates[static_cast<std::size_t>(t_)]);
    }

    Circuit circuit_;
    Vec state_;
    int t_ = 0;
};

} // namespace ampsamp
