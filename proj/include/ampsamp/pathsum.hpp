#pragma once

#include <cstdint>
#include <unordered_map>

#include "ampsamp/oracle.hpp"

namespace ampsamp {

/// Feynman sum-over-paths oracle: polynomial memory, exponential-in-depth
/// time. An optional memo cache trades memory back for speed; the cache is
/// capped by a byte budget so the poly-space character is preserved.
class PathSumOracle : public AmplitudeOracle {
public:
    explicit PathSumOracle(const Circuit& c, std::size_t cache_budget_bytes = 256ull << 20)
        : AmplitudeOracle(c.m()), circuit_(c),
          cache_cap_(cache_budget_bytes / kBytesPerEntry) {
        reset();
    }

    int n() const override { return circuit_.n; }
    int m() const override { return circuit_.m(); }

    void reset() override {
        session_.clear();
        memo_.clear();
    }

    void apply(const Gate& g) override { session_.push_back(g); }

    cplx amplitude_current(const BitString& x) override {
        const int t = static_cast<int>(session_.size());
        count_call(t);
        return amp(t, x.bits);
    }

    int current_prefix() const override { return static_cast<int>(session_.size()); }

    cplx amplitude(int t, const BitString& x) override {
        if (t < 0 || t > circuit_.m()) throw guard_error("prefix out of range");
        circuit_.require_nonadaptive("path-sum oracle random access");
        while (static_cast<int>(session_.size()) < t)
            session_.push_back(circuit_.gates[session_.size()]);
        count_call(t);
        return amp(t, x.bits);
    }

    std::unique_ptr<AmplitudeOracle> clone() const override {
        return std::make_unique<PathSumOracle>(*this);
    }

private:
    static constexpr std::size_t kBytesPerEntry = 80;

    cplx amp(int t, std::uint64_t idx) {
        if (t == 0) return idx == 0 ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
        const std::uint64_t key = (static_cast<std::uint64_t>(t) << 32) | idx;
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;

        const Gate& g = session_[static_cast<std::size_t>(t - 1)];
        const int w = g.arity();
        const int d = 1 << w;
        std::uint64_t row = 0;
        for (int j = 0; j < w; ++j)
            row |= static_cast<std::uint64_t>((idx >> g.support[static_cast<std::size_t>(j)]) & 1) << j;
        cplx acc = 0;
        for (int col = 0; col < d; ++col) {
            const cplx mv = g.matrix(static_cast<Eigen::Index>(row), col);
            if (std::abs(mv) < 1e-300) continue;
            std::uint64_t prev = idx;
            for (int j = 0; j < w; ++j) {
                const std::uint64_t bit = std::uint64_t{1} << g.support[static_cast<std::size_t>(j)];
                if ((col >> j) & 1)
                    prev |= bit;
                else
                    prev &= ~bit;
            }
            acc += mv * amp(t - 1, prev);
        }
        if (memo_.size() < cache_cap_) memo_.emplace(key, acc);
        return acc;
    }

    Circuit circuit_;
    std::vector<Gate> session_;
    std::unordered_map<std::uint64_t, cplx> memo_;
    std::size_t cache_cap_;
};

} // namespace ampsamp
