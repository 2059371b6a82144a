#pragma once

#include <functional>
#include <memory>

#include "ampsamp/distribution.hpp"
#include "ampsamp/noisy.hpp"
#include "ampsamp/oracle.hpp"
#include "ampsamp/rng.hpp"
#include "ampsamp/statevector.hpp"

namespace ampsamp {

constexpr double kZeroBranchTol = 1e-14;
constexpr int kInducedMaxQubits = 10;

enum class StepKind : char {
    DiagonalSkip = 'd',   // no update, no queries
    PermutationApply = 'p', // direct basis update, no queries
    Resample = 'r',       // branch-set resampling
};

struct SampleTrace {
    BitString output;
    std::vector<StepKind> steps;            // one per gate
    std::vector<int> branch_sizes;          // |S| at resampled steps, else 0
    std::vector<std::int64_t> prob_evals;   // probability evaluations per gate
    std::int64_t total_prob_evals = 0;
};

namespace detail {

/// Branch set S = {y : y agrees with x off supp}, in lexicographic order of
/// the support bits (the inverse-CDF walk below relies on this order).
inline std::uint64_t branch_member(std::uint64_t x, const std::vector<int>& support, int col) {
    std::uint64_t y = x;
    for (std::size_t j = 0; j < support.size(); ++j) {
        const std::uint64_t bit = std::uint64_t{1} << support[j];
        if ((col >> j) & 1)
            y |= bit;
        else
            y &= ~bit;
    }
    return y;
}

} // namespace detail

/// One gate-by-gate sample: walk the circuit, resampling the support bits of
/// each non-trivial gate from the prefix distribution restricted to the
/// branch set. Diagonal gates are skipped and basis permutations applied
/// directly when `use_shortcuts` is set.
inline SampleTrace gate_by_gate_sample(const Circuit& c, AmplitudeOracle& o, Rng& rng,
                                       bool use_shortcuts = true) {
    SampleTrace trace;
    o.reset();
    BitString x(0, c.n);
    for (int t = 0; t < c.m(); ++t) {
        const Gate& g = c.resolve(t, x);
        o.apply(g);
        const GateClass cls = use_shortcuts ? classify_gate(g) : GateClass::General;
        if (cls == GateClass::Diagonal) {
            trace.steps.push_back(StepKind::DiagonalSkip);
            trace.branch_sizes.push_back(0);
            trace.prob_evals.push_back(0);
            continue;
        }
        if (cls == GateClass::BasisPermutation) {
            x = apply_permutation_gate(g, x).first;
            trace.steps.push_back(StepKind::PermutationApply);
            trace.branch_sizes.push_back(0);
            trace.prob_evals.push_back(0);
            continue;
        }
        const int d = 1 << g.arity();
        const double norm2 = o.current_norm2();
        std::vector<double> w(static_cast<std::size_t>(d));
        double mass = 0;
        for (int col = 0; col < d; ++col) {
            const std::uint64_t y = detail::branch_member(x.bits, g.support, col);
            const cplx a = o.amplitude_current(BitString(y, c.n));
            w[static_cast<std::size_t>(col)] = std::norm(a) / norm2;
            mass += w[static_cast<std::size_t>(col)];
        }
        if (mass <= kZeroBranchTol)
            throw guard_error("gate-by-gate sampler: zero branch mass at gate " +
                              std::to_string(t) + " (inconsistent oracle)");
        double u = uniform01(rng) * mass;
        int pick = d - 1;
        for (int col = 0; col < d; ++col) {
            u -= w[static_cast<std::size_t>(col)];
            if (u <= 0) {
                pick = col;
                break;
            }
        }
        x.bits = detail::branch_member(x.bits, g.support, pick);
        trace.steps.push_back(StepKind::Resample);
        trace.branch_sizes.push_back(d);
        trace.prob_evals.push_back(d);
        trace.total_prob_evals += d;
    }
    trace.output = x;
    return trace;
}

/// Qubit-by-qubit sample via the marginal chain rule at the full prefix.
inline BitString qubit_by_qubit_sample(const Circuit& c, AmplitudeOracle& o, Rng& rng) {
    if (!o.supports_marginals())
        throw guard_error("qubit-by-qubit sampler: marginals unsupported by this backend");
    c.require_nonadaptive("qubit-by-qubit sampler");
    BitString x(0, c.n);
    double prev = 1.0;
    for (int j = 0; j < c.n; ++j) {
        const std::uint64_t y1 = x.bits | (std::uint64_t{1} << j);
        const double p1 = o.marginal_probability(c.m(), y1, j + 1);
        if (prev <= kZeroBranchTol)
            throw guard_error("qubit-by-qubit sampler: zero-mass prefix");
        if (uniform01(rng) < p1 / prev) {
            x.bits = y1;
            prev = p1;
        } else {
            prev = o.marginal_probability(c.m(), x.bits, j + 1);
        }
    }
    return x;
}

/// Exact output law of the gate-by-gate sampler: propagates the full
/// distribution through each iteration's stochastic map instead of sampling.
/// Adaptive circuits are handled by keeping one oracle session per distinct
/// gate history.
inline Distribution induced_sampler_distribution(const Circuit& c, const AmplitudeOracle& proto,
                                                 bool use_shortcuts = true, bool force = false) {
    if (!force && c.n > kInducedMaxQubits)
        throw guard_error("induced_sampler_distribution: n exceeds guard");

    struct Branch {
        std::unique_ptr<AmplitudeOracle> oracle;
        std::map<std::uint64_t, double> probs;
    };
    std::vector<Branch> branches;
    {
        Branch b;
        b.oracle = proto.clone();
        b.oracle->reset();
        b.probs[0] = 1.0;
        branches.push_back(std::move(b));
    }

    for (int t = 0; t < c.m(); ++t) {
        std::vector<Branch> next;
        for (auto& br : branches) {
            // split by the resolved gate at this slot (adaptive tables)
            std::map<std::uint64_t, Branch> by_pattern;
            const bool adaptive = c.is_adaptive(t);
            for (const auto& [xb, pr] : br.probs) {
                const std::uint64_t pat =
                    adaptive ? BitString(xb, c.n).restrict_to(c.adaptive.at(t).controls) : 0;
                auto& sub = by_pattern[pat];
                sub.probs[xb] += pr;
            }
            for (auto& [pat, sub] : by_pattern) {
                const Gate& g = c.resolve(t, BitString(sub.probs.begin()->first, c.n));
                sub.oracle = (by_pattern.size() == 1) ? std::move(br.oracle) : br.oracle->clone();
                sub.oracle->apply(g);
                const GateClass cls = use_shortcuts ? classify_gate(g) : GateClass::General;
                if (cls == GateClass::Diagonal) {
                    next.push_back(std::move(sub));
                    continue;
                }
                Branch out;
                if (cls == GateClass::BasisPermutation) {
                    for (const auto& [xb, pr] : sub.probs) {
                        BitString y = apply_permutation_gate(g, BitString(xb, c.n)).first;
                        out.probs[y.bits] += pr;
                    }
                } else {
                    const int d = 1 << g.arity();
                    for (const auto& [xb, pr] : sub.probs) {
                        const double norm2 = sub.oracle->current_norm2();
                        std::vector<double> w(static_cast<std::size_t>(d));
                        double mass = 0;
                        for (int col = 0; col < d; ++col) {
                            const std::uint64_t y = detail::branch_member(xb, g.support, col);
                            const cplx a = sub.oracle->amplitude_current(BitString(y, c.n));
                            w[static_cast<std::size_t>(col)] = std::norm(a) / norm2;
                            mass += w[static_cast<std::size_t>(col)];
                        }
                        if (mass <= kZeroBranchTol) {
                            // a zero-mass branch can only be reached through
                            // floating-point residue of an exact-zero amplitude
                            if (pr <= 1e-10) continue;
                            throw guard_error(
                                "induced distribution: zero branch mass at gate " +
                                std::to_string(t));
                        }
                        for (int col = 0; col < d; ++col) {
                            const double q = w[static_cast<std::size_t>(col)] / mass;
                            if (q > kZeroBranchTol)
                                out.probs[detail::branch_member(xb, g.support, col)] += pr * q;
                        }
                    }
                }
                out.oracle = std::move(sub.oracle);
                next.push_back(std::move(out));
            }
        }
        branches = std::move(next);
    }

    Distribution dist;
    dist.n = c.n;
    for (const auto& br : branches)
        for (const auto& [xb, pr] : br.probs) dist.add(xb, pr);
    return dist;
}

/// Exact output distribution |<x|U|0^n>|^2. Adaptive circuits are evaluated
/// by exhaustive branching over all measurement records of the control bits.
inline Distribution reference_distribution(const Circuit& c, bool force = false) {
    if (!force && c.n > kInducedMaxQubits)
        throw guard_error("reference_distribution: n exceeds guard");
    Distribution dist;
    dist.n = c.n;

    // recursion over gate slots with unnormalized projected states
    std::function<void(int, Vec)> go = [&](int t, Vec state) {
        if (t == c.m()) {
            for (Eigen::Index i = 0; i < state.size(); ++i) {
                const double pr = std::norm(state[i]);
                if (pr > 0) dist.add(static_cast<std::uint64_t>(i), pr);
            }
            return;
        }
        auto it = c.adaptive.find(t);
        if (it == c.adaptive.end()) {
            apply_gate_dense(state, c.gates[static_cast<std::size_t>(t)]);
            go(t + 1, std::move(state));
            return;
        }
        const auto& rule = it->second;
        const std::uint64_t npat = std::uint64_t{1} << rule.controls.size();
        for (std::uint64_t pat = 0; pat < npat; ++pat) {
            Vec proj = Vec::Zero(state.size());
            bool any = false;
            for (Eigen::Index i = 0; i < state.size(); ++i) {
                if (BitString(static_cast<std::uint64_t>(i), c.n).restrict_to(rule.controls) ==
                    pat) {
                    proj[i] = state[i];
                    if (std::norm(state[i]) > 0) any = true;
                }
            }
            if (!any) continue;
            apply_gate_dense(proj, rule.table.at(pat));
            go(t + 1, std::move(proj));
        }
    };

    Vec init = Vec::Zero(Eigen::Index{1} << c.n);
    init[0] = 1.0;
    go(0, std::move(init));
    return dist;
}

// ---- error-budget allocation ----

struct ErrorBudget {
    std::vector<double> xi;       // per gate, t = 1..m
    std::vector<double> epsilons; // per prefix, t = 1..m-1
    double delta = 0;
    double cost_exact = 0;       // sum_t eta_t / eps_t^2, unit = amplitude evals
    double cost_closed_form = 0; // (256/delta^2) (sum eta_t^{1/3})^3
    double cost_last_term = 0;   // (256/delta^2) eta_{m-1}
};

/// xi for a Z-rotation exp(-i theta/2 Z), theta in [0, pi/2].
inline double xi_z_rotation(double theta) {
    if (theta < 0 || theta > std::numbers::pi / 2 + 1e-12)
        throw guard_error("xi_z_rotation: theta outside [0, pi/2]");
    const double v =
        std::cos(theta / 2) + std::tan(std::numbers::pi / 8) * std::sin(theta / 2);
    return v * v;
}

/// Optimal per-prefix error split for a target total statistical error delta:
/// eps_t proportional to eta_t^{1/3} with eta_t the running product of xi.
inline ErrorBudget allocate_error_budget(const std::vector<double>& xi, double delta) {
    if (delta <= 0 || delta > 2) throw guard_error("allocate_error_budget: delta out of (0, 2]");
    for (double v : xi)
        if (v < 1.0 - 1e-12) throw guard_error("allocate_error_budget: xi < 1");
    const int m = static_cast<int>(xi.size());
    if (m < 2) throw guard_error("allocate_error_budget: need at least 2 gates");

    ErrorBudget b;
    b.xi = xi;
    b.delta = delta;
    std::vector<double> eta(static_cast<std::size_t>(m - 1));
    double run = 1.0, third_sum = 0.0;
    for (int t = 1; t <= m - 1; ++t) {
        run *= xi[static_cast<std::size_t>(t - 1)];
        eta[static_cast<std::size_t>(t - 1)] = run;
        third_sum += std::cbrt(run);
    }
    b.epsilons.resize(static_cast<std::size_t>(m - 1));
    for (int t = 1; t <= m - 1; ++t) {
        const double e = (delta / 16.0) * std::cbrt(eta[static_cast<std::size_t>(t - 1)]) / third_sum;
        b.epsilons[static_cast<std::size_t>(t - 1)] = e;
        b.cost_exact += eta[static_cast<std::size_t>(t - 1)] / (e * e);
    }
    b.cost_closed_form = 256.0 / (delta * delta) * third_sum * third_sum * third_sum;
    b.cost_last_term = 256.0 / (delta * delta) * eta.back();
    return b;
}

} // namespace ampsamp
