#pragma once

#include <algorithm>
#include <functional>
#include <thread>

#include "ampsamp/gadgets.hpp"
#include "ampsamp/magicratio.hpp"
#include "ampsamp/matching.hpp"
#include "ampsamp/pathsum.hpp"
#include "ampsamp/sampler.hpp"
#include "ampsamp/stabdecomp.hpp"
#include "ampsamp/surface.hpp"

namespace ampsamp {

struct SuiteResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerifyOptions {
    std::uint64_t seed = 20260823;
    bool quick = false;  // scaled-down corpus sizes for fast test runs
    int threads = 1;     // chain-level parallelism only
    double eps = 0.0;    // robustness: fixed per-prefix epsilon (0 = randomized)
};

namespace detail {

inline Mat random_unitary(int d, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat a(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) a(r, c) = cplx(gauss(rng), gauss(rng));
    return Mat(a.householderQr().householderQ());
}

inline std::vector<int> random_support(int n, int w, Rng& rng) {
    std::vector<int> qs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) qs[static_cast<std::size_t>(i)] = i;
    std::shuffle(qs.begin(), qs.end(), rng);
    qs.resize(static_cast<std::size_t>(w));
    return qs;
}

/// One random gate on up to max_qubit+1 qubits, drawn from named gates,
/// z-rotations, and Haar-ish generic 1- and 2-qubit unitaries.
inline Gate random_gate(int n_usable, Rng& rng) {
    static const std::vector<std::string> one = {"h", "x", "y", "z", "s", "sdg", "t", "tdg"};
    static const std::vector<std::string> two = {"cx", "cz", "swap"};
    const int kind = static_cast<int>(rng() % 6);
    switch (kind) {
    case 0:
        return make_gate(one[rng() % one.size()], random_support(n_usable, 1, rng));
    case 1:
        if (n_usable >= 2)
            return make_gate(two[rng() % two.size()], random_support(n_usable, 2, rng));
        [[fallthrough]];
    case 2:
        return make_gate("rz", random_support(n_usable, 1, rng),
                         uniform01(rng) * 2.0 * std::numbers::pi);
    case 3: {
        Gate g;
        g.support = random_support(n_usable, 1, rng);
        g.matrix = random_unitary(2, rng);
        g.label = "rand-u2";
        return g;
    }
    default: {
        const int w = (n_usable >= 2 && (rng() & 1)) ? 2 : 1;
        Gate g;
        g.support = random_support(n_usable, w, rng);
        g.matrix = random_unitary(1 << w, rng);
        g.label = w == 2 ? "rand-u4" : "rand-u2";
        return g;
    }
    }
}

/// Random circuit, n in [2,5], m in [4,12], supports <= 2. When adaptive,
/// the last qubit is rotated early, never touched afterwards, and controls
/// one mid-circuit gate through a 2-row table.
inline Circuit random_circuit(Rng& rng, bool adaptive) {
    Circuit c;
    c.n = 2 + static_cast<int>(rng() % 4);
    const int m = 4 + static_cast<int>(rng() % 9);
    const int ctrl_q = c.n - 1;
    const int n_body = adaptive ? c.n - 1 : c.n;
    const int split = adaptive ? 1 + static_cast<int>(rng() % (m / 2)) : m;
    for (int t = 0; t < m; ++t) {
        if (adaptive && t == 0) {
            // put the control qubit in superposition, then leave it alone
            Gate g;
            g.support = {ctrl_q};
            g.matrix = random_unitary(2, rng);
            g.label = "rand-u2";
            c.gates.push_back(std::move(g));
            continue;
        }
        const int usable = (adaptive && t >= split) ? n_body : (adaptive ? c.n : c.n);
        Gate g = random_gate(usable, rng);
        // before the split the body gates may also touch the control qubit
        if (adaptive && t >= split)
            for (int q : g.support)
                if (q == ctrl_q) throw guard_error("random_circuit: internal support bug");
        c.gates.push_back(std::move(g));
    }
    if (adaptive) {
        const int slot = split + static_cast<int>(rng() % (m - split));
        // rebuild the slot gate on body qubits only, then attach the rule
        Gate host = random_gate(n_body, rng);
        AdaptiveRule rule;
        rule.controls = {ctrl_q};
        rule.table[0] = host;
        Gate alt;
        alt.support = host.support;
        alt.matrix = random_unitary(host.dim(), rng);
        alt.label = "rand-ctrl";
        rule.table[1] = std::move(alt);
        rule.table_path = "<generated>";
        c.gates[static_cast<std::size_t>(slot)] = host;
        c.adaptive[slot] = std::move(rule);
    }
    return c;
}

/// Random k-local Hamiltonian from 2-local Pauli words with at least one
/// off-diagonal letter; regenerated upstream if the ground state degenerates.
inline SparseHamiltonian random_local_hamiltonian(Rng& rng) {
    SparseHamiltonian h;
    h.n = 2 + static_cast<int>(rng() % 4);
    const int terms = 2 + static_cast<int>(rng() % 3);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int i = 0; i < terms; ++i) {
        std::string word(static_cast<std::size_t>(h.n), 'I');
        const char letters[] = {'X', 'Y', 'Z'};
        const int q0 = static_cast<int>(rng() % static_cast<std::uint64_t>(h.n));
        word[static_cast<std::size_t>(q0)] = letters[rng() % 3];
        if (h.n >= 2 && (rng() & 1)) {
            int q1 = static_cast<int>(rng() % static_cast<std::uint64_t>(h.n));
            if (q1 == q0) q1 = (q1 + 1) % h.n;
            word[static_cast<std::size_t>(q1)] = letters[rng() % 3];
        }
        detail::add_pauli_term(h, cplx{gauss(rng), 0.0}, word);
    }
    // one off-diagonal term guaranteed
    std::string word(static_cast<std::size_t>(h.n), 'I');
    word[0] = 'X';
    detail::add_pauli_term(h, cplx{gauss(rng), 0.0}, word);
    h.check_hermitian();
    return h;
}

/// Random stoquastic Hamiltonian: real diagonal plus negative symmetric
/// off-diagonal entries between strings at Hamming distance <= 2.
inline SparseHamiltonian random_stoquastic_hamiltonian(Rng& rng) {
    SparseHamiltonian h;
    h.n = 2 + static_cast<int>(rng() % 4);
    const std::uint64_t dim = std::uint64_t{1} << h.n;
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::uint64_t x = 0; x < dim; ++x) h.add_entry(x, x, cplx{gauss(rng), 0.0});
    const int pairs = h.n * 3;
    for (int i = 0; i < pairs; ++i) {
        const std::uint64_t x = rng() % dim;
        std::uint64_t flip = std::uint64_t{1} << (rng() % static_cast<std::uint64_t>(h.n));
        if (rng() & 1) flip |= std::uint64_t{1} << (rng() % static_cast<std::uint64_t>(h.n));
        const std::uint64_t y = x ^ flip;
        if (y == x) continue;
        const double v = -std::abs(gauss(rng));
        if (h.entry(y, x) == cplx{0, 0}) {
            h.add_entry(y, x, v);
            h.add_entry(x, y, v);
        }
    }
    h.check_hermitian();
    return h;
}

/// Random magic-ratio instance: one family per mask, each pairing x with
/// x ^ mask through the amplitudes of a fixed full-support target state.
/// The masks span GF(2)^n so the frustration-free ground state is unique.
inline MagicRatioHamiltonian random_magic_ratio(Rng& rng) {
    MagicRatioHamiltonian mr;
    mr.n = 2 + static_cast<int>(rng() % 3);
    const std::uint64_t dim = std::uint64_t{1} << mr.n;
    std::vector<cplx> psi(static_cast<std::size_t>(dim));
    double norm2 = 0;
    for (auto& a : psi) {
        const double mag = 0.25 + uniform01(rng);
        a = std::polar(mag, uniform01(rng) * 2.0 * std::numbers::pi);
        norm2 += mag * mag;
    }
    for (auto& a : psi) a /= std::sqrt(norm2);

    std::vector<std::uint64_t> masks;
    for (int b = 0; b < mr.n; ++b) masks.push_back(std::uint64_t{1} << b);
    if (rng() & 1) masks.push_back((rng() % (dim - 1)) + 1); // one extra family
    std::shuffle(masks.begin(), masks.end(), rng);

    for (std::uint64_t mask : masks) {
        mr.families.emplace_back();
        std::vector<bool> used(static_cast<std::size_t>(dim), false);
        for (std::uint64_t x = 0; x < dim; ++x) {
            if (used[static_cast<std::size_t>(x)]) continue;
            const std::uint64_t y = x ^ mask;
            used[static_cast<std::size_t>(x)] = used[static_cast<std::size_t>(y)] = true;
            const double nrm = std::sqrt(std::norm(psi[static_cast<std::size_t>(x)]) +
                                         std::norm(psi[static_cast<std::size_t>(y)]));
            MagicRatioHamiltonian::State st;
            st[x] = psi[static_cast<std::size_t>(x)] / nrm;
            st[y] = psi[static_cast<std::size_t>(y)] / nrm;
            mr.families.back().push_back(std::move(st));
        }
    }
    return mr;
}

inline std::string format_sci(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

inline PlanarGraph square_graph() {
    PlanarGraph g;
    g.edges = {{0, 0, 1, 1.0}, {1, 1, 2, 1.0}, {2, 2, 3, 1.0}, {3, 3, 0, 1.0}};
    g.faces = {{0, 1, 2, 3}};
    return g;
}

inline PlanarGraph two_square_graph() {
    PlanarGraph g;
    g.edges = {{0, 0, 1, 1.0}, {1, 1, 2, 1.0}, {2, 2, 3, 1.0}, {3, 3, 0, 1.0},
               {4, 1, 4, 1.0}, {5, 4, 5, 1.0}, {6, 5, 2, 1.0}};
    g.faces = {{0, 1, 2, 3}, {1, 4, 5, 6}};
    return g;
}

/// Random measurement schedule for a surface-code instance.
inline Circuit random_schedule(int n, Rng& rng, bool adaptive) {
    Circuit c;
    c.n = n;
    for (int t = 0; t < n; ++t) {
        Gate g;
        g.support = {t};
        g.matrix = random_unitary(2, rng);
        g.label = "rand-u2";
        c.gates.push_back(std::move(g));
    }
    if (adaptive && n >= 3) {
        const int slot = 2;
        AdaptiveRule rule;
        rule.controls = {0};
        rule.table[0] = c.gates[static_cast<std::size_t>(slot)];
        Gate alt;
        alt.support = {slot};
        alt.matrix = random_unitary(2, rng);
        alt.label = "rand-u2";
        rule.table[1] = std::move(alt);
        rule.table_path = "<generated>";
        c.adaptive[slot] = std::move(rule);
    }
    return c;
}

} // namespace detail

// ---- acceptance suites, one per criterion ----

/// 1. Gate-by-gate sampler law equals the circuit's output law exactly.
inline SuiteResult suite_sampler(const VerifyOptions& opts) {
    Rng rng(derive_seed(opts.seed, 1));
    const int count = opts.quick ? 40 : 200;
    double worst = 0;
    for (int i = 0; i < count; ++i) {
        const bool adaptive = (i % 4) == 3;
        Circuit c = detail::random_circuit(rng, adaptive);
        StatevectorOracle proto(c);
        const Distribution ref = reference_distribution(c);
        const Distribution ind = induced_sampler_distribution(c, proto, true);
        worst = std::max(worst, tv_distance(ind, ref).l1);
        if (i < count / 4) { // also exercise the no-shortcut path
            const Distribution ind2 = induced_sampler_distribution(c, proto, false);
            worst = std::max(worst, tv_distance(ind2, ref).l1);
        }
    }
    return {"sampler", worst <= 1e-9,
            std::to_string(count) + " circuits, max L1 " + detail::format_sci(worst)};
}

/// 2. All amplitude backends agree; Clifford amplitudes are phase-exact.
inline SuiteResult suite_backends(const VerifyOptions& opts) {
    Rng rng(derive_seed(opts.seed, 2));
    const int count = opts.quick ? 20 : 120;
    double worst = 0;

    for (int i = 0; i < count; ++i) {
        Circuit c = detail::random_circuit(rng, false);
        StatevectorOracle sv(c);
        PathSumOracle ps(c);
        const std::uint64_t dim = std::uint64_t{1} << c.n;
        for (int t : {0, c.m() / 3, 2 * c.m() / 3, c.m()})
            for (std::uint64_t x = 0; x < dim; ++x) {
                const BitString bs(x, c.n);
                worst = std::max(worst, std::abs(sv.amplitude(t, bs) - ps.amplitude(t, bs)));
            }
    }

    // Clifford+T: stabilizer decomposition vs statevector
    static const std::vector<std::string> cliff = {"h", "s", "sdg", "x", "y", "z"};
    const int ct_count = opts.quick ? 10 : 40;
    for (int i = 0; i < ct_count; ++i) {
        Circuit c;
        c.n = 2 + static_cast<int>(rng() % 3);
        const int m = 6 + static_cast<int>(rng() % 8);
        int tcount = 0;
        for (int t = 0; t < m; ++t) {
            const int kind = static_cast<int>(rng() % 4);
            if (kind == 0 && c.n >= 2)
                c.gates.push_back(make_gate((rng() & 1) ? "cx" : "cz",
                                            detail::random_support(c.n, 2, rng)));
            else if (kind == 1 && tcount < 6) {
                c.gates.push_back(
                    make_gate((rng() & 1) ? "t" : "tdg", detail::random_support(c.n, 1, rng)));
                ++tcount;
            } else
                c.gates.push_back(
                    make_gate(cliff[rng() % cliff.size()], detail::random_support(c.n, 1, rng)));
        }
        StatevectorOracle sv(c);
        StabDecompOracle sd(c);
        const std::uint64_t dim = std::uint64_t{1} << c.n;
        for (std::uint64_t x = 0; x < dim; ++x) {
            const BitString bs(x, c.n);
            worst = std::max(worst, std::abs(sv.amplitude(c.m(), bs) - sd.amplitude(c.m(), bs)));
        }
    }

    // Clifford-only, n <= 4: global phase against the direct matrix product
    const int cl_count = opts.quick ? 10 : 40;
    for (int i = 0; i < cl_count; ++i) {
        Circuit c;
        c.n = 2 + static_cast<int>(rng() % 3);
        const int m = 5 + static_cast<int>(rng() % 8);
        for (int t = 0; t < m; ++t) {
            if ((rng() % 3) == 0 && c.n >= 2) {
                static const std::vector<std::string> two = {"cx", "cz", "swap"};
                c.gates.push_back(make_gate(two[rng() % 3], detail::random_support(c.n, 2, rng)));
            } else
                c.gates.push_back(
                    make_gate(cliff[rng() % cliff.size()], detail::random_support(c.n, 1, rng)));
        }
        const Vec sv = statevector(c);
        const std::uint64_t dim = std::uint64_t{1} << c.n;
        for (std::uint64_t x = 0; x < dim; ++x)
            worst = std::max(worst, std::abs(clifford_amplitude(c, BitString(x, c.n)) -
                                             sv[static_cast<Eigen::Index>(x)]));
    }

    return {"backends", worst <= 1e-9, "max amplitude deviation " + detail::format_sci(worst)};
}

/// 3. Robustness: noisy-sampler law within 16 * sum eps of the exact law.
inline SuiteResult suite_robustness(const VerifyOptions& opts) {
    Rng rng(derive_seed(opts.seed, 3));
    const int count = opts.quick ? 12 : 50;
    int violations = 0;
    double worst_ratio = 0, zero_noise_l1 = 0;
    for (int i = 0; i < count; ++i) {
        Circuit c = detail::random_circuit(rng, false);
        NoisePlan plan;
        plan.seed = derive_seed(opts.seed, 1000 + static_cast<std::uint64_t>(i));
        plan.epsilons.assign(static_cast<std::size_t>(c.m()), 0.0);
        double total = 0;
        for (int t = 1; t <= c.m() - 1; ++t) {
            const double e = opts.eps > 0 ? opts.eps : uniform01(rng);
            plan.epsilons[static_cast<std::size_t>(t - 1)] = e;
            total += e;
        }
        if (opts.eps <= 0) { // rescale into the required band
            const double target = 1e-4 + uniform01(rng) * (0.05 - 1e-4);
            for (double& e : plan.epsilons) e *= target / total;
        }
        const double bound = 16.0 * plan.sum_until(c.m());

        NoisyOracle noisy(c, plan);
        const Distribution q = induced_sampler_distribution(c, noisy, true);
        const Distribution p = reference_distribution(c);
        const double l1 = tv_distance(q, p).l1;
        if (l1 > bound) ++violations;
        worst_ratio = std::max(worst_ratio, l1 / bound);

        if (i == 0) { // zero-noise control on the same circuit
            NoisePlan zero;
            NoisyOracle exact(c, zero);
            zero_noise_l1 = tv_distance(induced_sampler_distribution(c, exact, true), p).l1;
        }
    }
    const bool pass = violations == 0 && zero_noise_l1 <= 1e-9;
    return {"robustness", pass,
            std::to_string(count) + " plans, worst L1/bound " + detail::format_sci(worst_ratio) +
                ", zero-noise L1 " + detail::format_sci(zero_noise_l1)};
}

/// 4. Probability-evaluation accounting matches the stated bounds.
inline SuiteResult suite_calls(const VerifyOptions& opts) {
    Rng rng(derive_seed(opts.seed, 4));
    const int count = opts.quick ? 30 : 100;
    bool ok = true;
    std::string why;
    for (int i = 0; i < count && ok; ++i) {
        Circuit c = detail::random_circuit(rng, (i % 5) == 4);
        StatevectorOracle o(c);
        Rng shot(derive_seed(opts.seed, 5000 + static_cast<std::uint64_t>(i)));
        SampleTrace tr = gate_by_gate_sample(c, o, shot);
        const std::int64_t cap = static_cast<std::int64_t>(c.m())
                                 << c.max_arity(); // m * 2^k
        if (tr.total_prob_evals > cap) {
            ok = false;
            why = "m*2^k bound violated";
        }
        for (int t = 0; t < c.m(); ++t)
            if (tr.steps[static_cast<std::size_t>(t)] == StepKind::DiagonalSkip &&
                tr.prob_evals[static_cast<std::size_t>(t)] != 0) {
                ok = false;
                why = "diagonal gate incurred evaluations";
            }
    }
    // CNOT + SU(2) circuits: at most 2 evaluations per non-diagonal 1q gate
    for (int i = 0; i < count && ok; ++i) {
        Circuit c;
        c.n = 2 + static_cast<int>(rng() % 4);
        const int m = 5 + static_cast<int>(rng() % 10);
        int nondiag_1q = 0;
        for (int t = 0; t < m; ++t) {
            if ((rng() & 1) && c.n >= 2)
                c.gates.push_back(make_gate("cx", detail::random_support(c.n, 2, rng)));
            else if ((rng() % 3) == 0)
                c.gates.push_back(make_gate("rz", detail::random_support(c.n, 1, rng),
                                            uniform01(rng) * std::numbers::pi));
            else {
                Gate g;
                g.support = detail::random_support(c.n, 1, rng);
                g.matrix = detail::random_unitary(2, rng);
                g.label = "rand-u2";
                if (classify_gate(g) != GateClass::Diagonal) ++nondiag_1q;
                c.gates.push_back(std::move(g));
            }
        }
        StatevectorOracle o(c);
        Rng shot(derive_seed(opts.seed, 6000 + static_cast<std::uint64_t>(i)));
        SampleTrace tr = gate_by_gate_sample(c, o, shot);
        if (tr.total_prob_evals > 2 * nondiag_1q) {
            ok = false;
            why = "2s bound violated for CNOT+SU(2)";
        }
    }
    return {"calls", ok, ok ? std::to_string(2 * count) + " traces within bounds" : why};
}

/// 5. Error-budget allocation: normalization, optimality, Clifford limits.
inline SuiteResult suite_budget(const VerifyOptions& opts) {
    Rng rng(derive_seed(opts.seed, 5));
    bool ok = true;
    std::string why;
    double worst_norm = 0;
    for (int i = 0; i < 20 && ok; ++i) {
        const int m = 3 + static_cast<int>(rng() % 6);
        std::vector<double> xi(static_cast<std::size_t>(m));
        for (double& v : xi) v = xi_z_rotation(uniform01(rng) * std::numbers::pi / 2);
        const double delta = 0.05 + uniform01(rng);
        ErrorBudget b = allocate_error_budget(xi, delta);

        double sum = 0;
        for (double e : b.epsilons) sum += e;
        worst_norm = std::max(worst_norm, std::abs(sum - delta / 16.0));
        if (std::abs(sum - delta / 16.0) > 1e-12) {
            ok = false;
            why = "sum eps != delta/16";
        }

        // local perturbations that keep the total fixed must not lower cost
        std::vector<double> eta(b.epsilons.size());
        double run = 1.0;
        for (std::size_t t = 0; t < eta.size(); ++t) {
            run *= xi[t];
            eta[t] = run;
        }
        auto cost = [&](const std::vector<double>& eps) {
            double s = 0;
            for (std::size_t t = 0; t < eps.size(); ++t) s += eta[t] / (eps[t] * eps[t]);
            return s;
        };
        for (std::size_t a = 0; a < b.epsilons.size() && ok; ++a)
            for (std::size_t bb = a + 1; bb < b.epsilons.size(); ++bb) {
                const double h = 1e-6 * std::min(b.epsilons[a], b.epsilons[bb]);
                auto pert = b.epsilons;
                pert[a] += h;
                pert[bb] -= h;
                if (cost(pert) < b.cost_exact - 1e-9) {
                    ok = false;
                    why = "local perturbation lowered the cost";
                }
            }
    }
    if (ok && xi_z_rotation(0.0) != 1.0) {
        ok = false;
        why = "xi(0) != 1 exactly";
    }
    if (ok) { // all-Clifford: uniform split
        ErrorBudget b = allocate_error_budget(std::vector<double>(6, 1.0), 0.5);
        for (double e : b.epsilons)
            if (std::abs(e - b.epsilons[0]) > 1e-15) {
                ok = false;
                why = "all-Clifford split not uniform";
            }
    }
    return {"budget", ok,
            ok ? "20 allocations, worst normalization error " + detail::format_sci(worst_norm)
               : why};
}

/// 6. Chain structure: detailed balance, nonnegative spectrum, gap bound,
/// and the TV decay estimate under exact power iteration.
inline SuiteResult suite_mcmc(const VerifyOptions& opts) {
    Rng rng(derive_seed(opts.seed, 6));
    const int count = opts.quick ? 25 : 100;
    bool ok = true;
    std::string why;
    int done = 0;
    while (done < count && ok) {
        SparseHamiltonian h = detail::random_local_hamiltonian(rng);
        GapBoundReport rep;
        ChainConfig cfg;
        cfg.k = std::max(1, h.k);
        cfg.x_in = BitString(0, h.n);
        try {
            rep = gap_bound_check(h, cfg);
        } catch (const guard_error&) {
            continue; // degenerate or disconnected draw; take another
        }
        ++done;
        if (rep.chain.detailed_balance_err > 1e-10) {
            ok = false;
            why = "detailed balance residual too large";
        }
        if (rep.chain.min_eigenvalue < -1e-12) {
            ok = false;
            why = "negative chain eigenvalue";
        }
        if (!rep.holds) {
            ok = false;
            why = "gap bound violated";
        }

        // TV decay from the heaviest support state, exact power iteration
        std::size_t start = 0;
        for (std::size_t i = 0; i < rep.pi.size(); ++i)
            if (rep.pi[i] > rep.pi[start]) start = i;
        Eigen::RowVectorXd v = Eigen::RowVectorXd::Zero(rep.chain.P.rows());
        v[static_cast<Eigen::Index>(start)] = 1.0;
        const double pref = 1.0 / (2.0 * std::sqrt(rep.pi[start]));
        for (int t = 1; t <= 200 && ok; ++t) {
            v = v * rep.chain.P;
            double tv = 0;
            for (Eigen::Index i = 0; i < v.size(); ++i)
                tv += std::abs(v[i] - rep.pi[static_cast<std::size_t>(i)]);
            tv /= 2.0;
            if (tv > pref * std::pow(rep.lambda1, t) + 1e-12) {
                ok = false;
                why = "TV decay bound violated at t=" + std::to_string(t);
            }
        }
    }
    return {"mcmc", ok, ok ? std::to_string(count) + " instances, all chain checks hold" : why};
}

/// 7. Sensitivity bounds: stoquastic diagonal bound and magic-ratio s <= m.
inline SuiteResult suite_sensitivity(const VerifyOptions& opts) {
    Rng rng(derive_seed(opts.seed, 7));
    const int count = opts.quick ? 10 : 30;
    bool ok = true;
    std::string why;

    int done = 0;
    while (done < count && ok) {
        SparseHamiltonian h = detail::random_stoquastic_hamiltonian(rng);
        GroundStateResult gs;
        double s;
        try {
            gs = exact_ground_state(h);
            s = sensitivity(h, gs.psi);
        } catch (const guard_error&) {
            continue;
        }
        ++done;
        StoquasticReport rep = stoquastic_check_and_bound(h);
        if (!rep.is_stoquastic) {
            ok = false;
            why = "generator produced a non-stoquastic instance";
        } else if (s > rep.bound + 1e-9) {
            ok = false;
            why = "s exceeds max diag - E0";
        }
    }

    done = 0;
    while (done < count && ok) {
        MagicRatioHamiltonian mr = detail::random_magic_ratio(rng);
        MagicRatioReport rep;
        try {
            rep = verify_magic_ratio_structure(mr);
        } catch (const guard_error&) {
            continue;
        }
        ++done;
        if (!rep.disjoint_supports || !rep.frustration_free || !rep.sensitivity_le_m) {
            ok = false;
            why = "magic-ratio structure check failed";
            break;
        }
        // ratios from the projector states match eigensolve ratios
        SparseHamiltonian h = to_hamiltonian(mr);
        GroundStateResult gs = exact_ground_state(h);
        const std::uint64_t dim = std::uint64_t{1} << mr.n;
        for (int trial = 0; trial < 20 && ok; ++trial) {
            const std::uint64_t x = rng() % dim;
            // pick a string connected to x through some family
            for (const auto& fam : mr.families) {
                for (const auto& st : fam) {
                    if (!st.count(x)) continue;
                    for (const auto& [y, ay] : st) {
                        if (y == x) continue;
                        const double r = magic_ratio(mr, BitString(x, mr.n), BitString(y, mr.n));
                        const double re =
                            std::norm(gs.psi[static_cast<Eigen::Index>(y)]) /
                            std::norm(gs.psi[static_cast<Eigen::Index>(x)]);
                        if (std::abs(r - re) > 1e-8 * std::max(1.0, re)) {
                            ok = false;
                            why = "magic ratio disagrees with eigensolve";
                        }
                    }
                }
            }
        }
    }
    return {"sensitivity", ok, ok ? std::to_string(2 * count) + " instances within bounds" : why};
}

/// 8. End-to-end ground-state sampling on the 2-qubit transverse-field
/// Ising model: empirical chain-endpoint law close to |psi|^2.
inline SuiteResult suite_ground_e2e(const VerifyOptions& opts) {
    SparseHamiltonian h;
    h.n = 2;
    detail::add_pauli_term(h, {-1.0, 0.0}, "ZZ");
    detail::add_pauli_term(h, {-1.0, 0.0}, "XI");
    detail::add_pauli_term(h, {-1.0, 0.0}, "IX");
    GroundStateResult gs = exact_ground_state(h);
    ExactDiagOracle oracle(h.n, gs.psi);

    const long long chains = opts.quick ? 2000 : 10000;
    const long long steps = opts.quick ? 2000 : 10000;
    const int nthreads = std::max(1, opts.threads);

    std::vector<std::array<long long, 4>> counts(static_cast<std::size_t>(nthreads),
                                                 {0, 0, 0, 0});
    auto worker = [&](int w) {
        for (long long i = w; i < chains; i += nthreads) {
            ChainConfig cfg;
            cfg.k = 1;
            cfg.x_in = BitString(0, 2);
            cfg.steps = steps;
            cfg.seed = derive_seed(opts.seed, 9000 + static_cast<std::uint64_t>(i));
            const auto res = run_chain(oracle, cfg);
            ++counts[static_cast<std::size_t>(w)][res.first.bits];
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < nthreads; ++w) pool.emplace_back(worker, w);
    worker(0);
    for (auto& t : pool) t.join();

    double tv = 0;
    for (std::uint64_t x = 0; x < 4; ++x) {
        long long c = 0;
        for (const auto& block : counts) c += block[x];
        tv += std::abs(static_cast<double>(c) / static_cast<double>(chains) - oracle.pi(x));
    }
    tv /= 2.0;
    return {"ground-e2e", tv <= 0.03,
            std::to_string(chains) + " chains x " + std::to_string(steps) + " steps, TV " +
                detail::format_sci(tv)};
}

/// 9. Surface code: cycle invariant, uniformity, and the two-point sampler's
/// exact law against brute force.
inline SuiteResult suite_surface(const VerifyOptions& opts) {
    Rng rng(derive_seed(opts.seed, 9));
    bool ok = true;
    std::string why;

    const PlanarGraph g2 = detail::two_square_graph();
    const auto basis = cycle_space_basis(g2);
    const long long draws = opts.quick ? 20000 : 100000;
    std::vector<BitString> samples;
    samples.reserve(static_cast<std::size_t>(draws));
    for (long long i = 0; i < draws; ++i) {
        const std::uint64_t x = sample_cycle(g2, basis, rng);
        if (!detail::is_cycle_mask(g2, x)) {
            ok = false;
            why = "sample_cycle produced a non-cycle";
            break;
        }
        samples.emplace_back(x, g2.n());
    }
    if (ok) {
        Distribution uniform;
        uniform.n = g2.n();
        for (std::uint64_t x : enumerate_cycles(basis, 10)) uniform.add(x, 0.25);
        ChiSquareReport chi = chi_square_gof(samples, uniform);
        if (chi.out_of_support || chi.p_value < 1e-3) {
            ok = false;
            why = "cycle uniformity chi-square failed (p=" + detail::format_sci(chi.p_value) + ")";
        }
    }

    double worst = 0;
    if (ok) {
        const std::vector<PlanarGraph> graphs = {detail::square_graph(), g2};
        for (const auto& g : graphs) {
            for (int rep = 0; rep < (opts.quick ? 2 : 4) && ok; ++rep) {
                const bool adaptive = rep == 1;
                SurfaceCodeInstance inst =
                    make_surface_instance(g, detail::random_schedule(g.n(), rng, adaptive));
                const Distribution ind = mbqc_induced_distribution(inst);
                const Distribution ref = mbqc_reference_distribution(inst);
                worst = std::max(worst, tv_distance(ind, ref).l1);
            }
        }
        if (worst > 1e-8) {
            ok = false;
            why = "mbqc induced law deviates: L1 " + detail::format_sci(worst);
        }
    }
    return {"surface", ok,
            ok ? std::to_string(draws) + " cycle draws uniform, mbqc max L1 " +
                     detail::format_sci(worst)
               : why};
}

/// 10. Gadget identities and the crossing normalization constant.
inline SuiteResult suite_gadgets(const VerifyOptions&) {
    GadgetReport rep = verify_gadgets();
    const bool tau_ok = std::abs(rep.tau - 3.732) <= 1e-3;
    return {"gadgets", rep.all_ok() && tau_ok,
            "max residual " + detail::format_sci(rep.max_residual) + ", tau " +
                detail::format_sci(rep.tau)};
}

/// 11. Perfect-matching counts through the reduction match brute force.
inline SuiteResult suite_reduction(const VerifyOptions&) {
    struct Case {
        const char* name;
        MatchingInstance inst;
        long long expected;
    };
    std::vector<Case> cases;
    {
        MatchingInstance k4;
        k4.num_vertices = 4;
        k4.plain_edges = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
        cases.push_back({"K4", std::move(k4), 3});
    }
    {
        // K3,3 drawn with one crossing: hexagon 0-3-1-4-2-5, inner chord
        // 0-4, and the two outer chords 1-5 / 2-3 crossing once
        MatchingInstance k33;
        k33.num_vertices = 6;
        k33.plain_edges = {{0, 3}, {3, 1}, {1, 4}, {4, 2}, {2, 5}, {5, 0}, {0, 4}};
        k33.crossings = {{1, 5, 2, 3}};
        cases.push_back({"K3,3", std::move(k33), 6});
    }
    {
        MatchingInstance triple;
        triple.num_vertices = 2;
        triple.plain_edges = {{0, 1}, {0, 1}, {0, 1}};
        cases.push_back({"K2^3", std::move(triple), 3});
    }

    bool ok = true;
    std::string detail;
    for (const auto& cs : cases) {
        ReductionResult res = perfect_matchings_via_reduction(cs.inst);
        if (!detail.empty()) detail += ", ";
        detail += std::string(cs.name) + "=" + std::to_string(res.count);
        if (res.count != cs.expected || res.brute_force != cs.expected) ok = false;
    }
    return {"reduction", ok, detail};
}

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {
        "sampler", "backends", "robustness", "calls",   "budget",  "mcmc",
        "sensitivity", "ground-e2e", "surface", "gadgets", "reduction"};
    return names;
}

inline SuiteResult run_suite(const std::string& name, const VerifyOptions& opts) {
    if (name == "sampler") return suite_sampler(opts);
    if (name == "backends") return suite_backends(opts);
    if (name == "robustness") return suite_robustness(opts);
    if (name == "calls") return suite_calls(opts);
    if (name == "budget") return suite_budget(opts);
    if (name == "mcmc") return suite_mcmc(opts);
    if (name == "sensitivity") return suite_sensitivity(opts);
    if (name == "ground-e2e") return suite_ground_e2e(opts);
    if (name == "surface") return suite_surface(opts);
    if (name == "gadgets") return suite_gadgets(opts);
    if (name == "reduction") return suite_reduction(opts);
    throw guard_error("unknown suite: " + name);
}

inline std::vector<SuiteResult> run_all_suites(const VerifyOptions& opts) {
    std::vector<SuiteResult> results;
    for (const auto& name : suite_names()) results.push_back(run_suite(name, opts));
    return results;
}

} // namespace ampsamp
