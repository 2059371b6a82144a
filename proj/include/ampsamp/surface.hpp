#pragma once

#include "ampsamp/distribution.hpp"
#include "ampsamp/planar.hpp"
#include "ampsamp/sampler.hpp"

namespace ampsamp {

/// A measurement-based computation on the cycle-superposition resource
/// state of `graph`: qubits (edges) measured in edge order 1..n, with the
/// single-qubit basis rotation at step t optionally controlled by earlier
/// outcomes. The schedule reuses the circuit grammar: gate t must act on
/// qubit t-1 (0-based) and any control table may only reference qubits < t-1.
struct SurfaceCodeInstance {
    PlanarGraph graph;
    Circuit schedule;
};

inline SurfaceCodeInstance make_surface_instance(PlanarGraph graph, Circuit schedule) {
    if (!graph.dangling_edges().empty())
        throw guard_error("surface-code instance: graph must have no dangling edges");
    if (schedule.n != graph.n() || schedule.m() != graph.n())
        throw guard_error("surface-code instance: schedule must have one gate per edge");
    for (int t = 0; t < schedule.m(); ++t) {
        const Gate& g = schedule.gates[static_cast<std::size_t>(t)];
        if (g.arity() != 1 || g.support[0] != t)
            throw guard_error("surface-code instance: gate " + std::to_string(t + 1) +
                              " must act on qubit " + std::to_string(t));
        auto it = schedule.adaptive.find(t);
        if (it != schedule.adaptive.end())
            for (int c : it->second.controls)
                if (c >= t)
                    throw guard_error("surface-code instance: control not measured before gate " +
                                      std::to_string(t + 1));
    }
    return {std::move(graph), std::move(schedule)};
}

namespace detail {

/// P_t at candidate outcome y: overlap of psi_G with the product state
/// phi_j = U_j^dag |y_j> for measured qubits (j <= t) and |y_j> beyond.
inline double mbqc_point_prob(const SurfaceCodeInstance& inst, const BitString& y, int t) {
    const int n = inst.graph.n();
    std::vector<std::array<cplx, 2>> phi(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const int bit = y.bit(j);
        if (j < t) {
            const Gate& u = inst.schedule.resolve(j, y);
            phi[static_cast<std::size_t>(j)] = {std::conj(u.matrix(bit, 0)),
                                                std::conj(u.matrix(bit, 1))};
        } else {
            phi[static_cast<std::size_t>(j)] = {bit == 0 ? cplx{1, 0} : cplx{0, 0},
                                                bit == 1 ? cplx{1, 0} : cplx{0, 0}};
        }
    }
    return std::norm(product_state_overlap(inst.graph, phi));
}

} // namespace detail

/// One MBQC measurement record: start from a uniform cycle, then resample
/// bit t from the two-point law {x, x xor e_t} at each step.
inline BitString mbqc_sample(const SurfaceCodeInstance& inst, Rng& rng) {
    const int n = inst.graph.n();
    const auto basis = cycle_space_basis(inst.graph);
    BitString x(sample_cycle(inst.graph, basis, rng), n);
    for (int t = 1; t <= n; ++t) {
        BitString alt = x;
        alt.set_bit(t - 1, 1 - x.bit(t - 1));
        const double p0 = detail::mbqc_point_prob(inst, x, t);
        const double p1 = detail::mbqc_point_prob(inst, alt, t);
        const double mass = p0 + p1;
        if (mass <= kZeroBranchTol)
            throw guard_error("mbqc sampler: zero two-point mass at step " + std::to_string(t));
        if (uniform01(rng) * mass >= p0) x = alt;
    }
    return x;
}

constexpr int kMbqcExactMaxDim = 6;
constexpr int kMbqcExactMaxEdges = 12;

/// Exact output law of mbqc_sample (stochastic-map propagation, no RNG).
inline Distribution mbqc_induced_distribution(const SurfaceCodeInstance& inst) {
    const int n = inst.graph.n();
    const auto basis = cycle_space_basis(inst.graph);
    if (static_cast<int>(basis.size()) > kMbqcExactMaxDim || n > kMbqcExactMaxEdges)
        throw guard_error("mbqc_induced_distribution: instance exceeds guard");
    std::map<std::uint64_t, double> cur;
    const double unit = 1.0 / static_cast<double>(std::size_t{1} << basis.size());
    for (std::uint64_t x : enumerate_cycles(basis, kMbqcExactMaxDim)) cur[x] += unit;
    for (int t = 1; t <= n; ++t) {
        std::map<std::uint64_t, double> next;
        for (const auto& [xb, pr] : cur) {
            const BitString x(xb, n);
            BitString alt = x;
            alt.set_bit(t - 1, 1 - x.bit(t - 1));
            const double p0 = detail::mbqc_point_prob(inst, x, t);
            const double p1 = detail::mbqc_point_prob(inst, alt, t);
            const double mass = p0 + p1;
            if (mass <= kZeroBranchTol)
                throw guard_error("mbqc induced law: zero two-point mass at step " +
                                  std::to_string(t));
            if (p0 > 0) next[x.bits] += pr * p0 / mass;
            if (p1 > 0) next[alt.bits] += pr * p1 / mass;
        }
        cur = std::move(next);
    }
    Distribution d;
    d.n = n;
    d.p = std::move(cur);
    return d;
}

/// Brute-force reference: dense resource state, then sequential adaptive
/// rotation + projective measurement of each qubit, branching over outcomes.
inline Distribution mbqc_reference_distribution(const SurfaceCodeInstance& inst) {
    const int n = inst.graph.n();
    if (n > kMbqcExactMaxEdges) throw guard_error("mbqc_reference_distribution: too many edges");
    const auto basis = cycle_space_basis(inst.graph);
    const auto cycles = enumerate_cycles(basis, kMbqcExactMaxDim);
    Vec state = Vec::Zero(Eigen::Index{1} << n);
    const double amp = 1.0 / std::sqrt(static_cast<double>(cycles.size()));
    for (std::uint64_t x : cycles) state[static_cast<Eigen::Index>(x)] += amp;

    Distribution dist;
    dist.n = n;
    std::function<void(int, Vec, BitString)> go = [&](int t, Vec st, BitString record) {
        if (t == n) {
            for (Eigen::Index i = 0; i < st.size(); ++i) {
                const double pr = std::norm(st[i]);
                if (pr > 0) dist.add(static_cast<std::uint64_t>(i), pr);
            }
            return;
        }
        apply_gate_dense(st, inst.schedule.resolve(t, record));
        for (int b = 0; b < 2; ++b) {
            Vec proj = Vec::Zero(st.size());
            bool any = false;
            for (Eigen::Index i = 0; i < st.size(); ++i)
                if (((static_cast<std::uint64_t>(i) >> t) & 1) == static_cast<std::uint64_t>(b)) {
                    proj[i] = st[i];
                    if (std::norm(st[i]) > 0) any = true;
                }
            if (!any) continue;
            BitString rec = record;
            rec.set_bit(t, b);
            go(t + 1, std::move(proj), rec);
        }
    };
    go(0, std::move(state), BitString(0, n));
    return dist;
}

} // namespace ampsamp
