#pragma once

#include <unordered_map>

#include "ampsamp/hamiltonian.hpp"
#include "ampsamp/rng.hpp"

namespace ampsamp {

/// Ratio oracle pi(y)/pi(x) over the support of the target distribution.
class GroundStateOracle {
public:
    virtual ~GroundStateOracle() = default;
    virtual int n() const = 0;
    virtual double ratio(const BitString& x, const BitString& y) const = 0;
    virtual bool supp_member(const BitString& x) const = 0;
};

/// Oracle backed by a dense ground state from exact diagonalization.
class ExactDiagOracle : public GroundStateOracle {
public:
    ExactDiagOracle(int n, Vec psi) : n_(n), psi_(std::move(psi)) {}

    int n() const override { return n_; }
    bool supp_member(const BitString& x) const override { return pi(x.bits) > kSupportTol2; }
    double ratio(const BitString& x, const BitString& y) const override {
        const double px = pi(x.bits);
        if (px <= kSupportTol2) throw guard_error("ratio: x outside support");
        return pi(y.bits) / px;
    }
    double pi(std::uint64_t x) const { return std::norm(psi_[static_cast<Eigen::Index>(x)]); }

private:
    int n_;
    Vec psi_;
};

struct ChainConfig {
    int k = 1;            // proposal radius
    BitString x_in;       // start state
    long long steps = 0;
    std::uint64_t seed = 0;
    double eps = 0.01;    // target TV for mixing-time reporting
};

inline std::uint64_t binom(int n, int j) {
    if (j < 0 || j > n) return 0;
    std::uint64_t r = 1;
    for (int i = 0; i < j; ++i) r = r * static_cast<std::uint64_t>(n - i) / (i + 1);
    return r;
}

/// N = sum_{j=0}^{k} C(n, j), the proposal fan-out (includes the empty flip).
inline std::uint64_t proposal_count(int n, int k) {
    std::uint64_t s = 0;
    for (int j = 0; j <= k; ++j) s += binom(n, j);
    return s;
}

/// Uniform proposal over all flips of at most k bits: picks a rank in [0, N)
/// and unranks it as (subset size, lexicographic j-subset).
inline BitString propose(const BitString& x, int k, Rng& rng) {
    const int n = x.n;
    const std::uint64_t total = proposal_count(n, k);
    std::uint64_t u = std::uniform_int_distribution<std::uint64_t>(0, total - 1)(rng);
    int j = 0;
    while (u >= binom(n, j)) {
        u -= binom(n, j);
        ++j;
    }
    BitString y = x;
    int pos = 0, left = j;
    while (left > 0) {
        const std::uint64_t with_pos = binom(n - pos - 1, left - 1);
        if (u < with_pos) {
            y.set_bit(pos, 1 - y.bit(pos));
            --left;
        } else {
            u -= with_pos;
        }
        ++pos;
    }
    return y;
}

/// One lazy Metropolis step: hold with probability 1/2, otherwise propose
/// and accept with probability min{1, pi(y)/pi(x)}. Realizes
/// P_xy = (1/2) Q_xy min{1, pi(y)/pi(x)} for y != x, with P_xx >= 1/2.
inline BitString metropolis_step(const BitString& x, const GroundStateOracle& o,
                                 const ChainConfig& cfg, Rng& rng) {
    if (uniform01(rng) < 0.5) return x;
    BitString y = propose(x, cfg.k, rng);
    if (y == x) return x;
    if (!o.supp_member(y)) return x;
    const double r = o.ratio(x, y);
    if (r >= 1.0 || uniform01(rng) < r) return y;
    return x;
}

struct ChainDiagnostics {
    long long steps = 0;
    long long moves = 0;       // accepted transitions to a new state
    long long out_of_support = 0;
};

inline std::pair<BitString, ChainDiagnostics> run_chain(const GroundStateOracle& o,
                                                        const ChainConfig& cfg) {
    if (!o.supp_member(cfg.x_in)) throw guard_error("run_chain: x_in outside support");
    Rng rng(cfg.seed);
    BitString x = cfg.x_in;
    ChainDiagnostics diag;
    diag.steps = cfg.steps;
    for (long long i = 0; i < cfg.steps; ++i) {
        BitString y = metropolis_step(x, o, cfg, rng);
        if (!(y == x)) ++diag.moves;
        x = y;
    }
    return {x, diag};
}

constexpr std::size_t kChainMatrixMaxStates = 4096;

struct ChainReport {
    Eigen::MatrixXd P;
    double lambda1 = 0;
    double min_eigenvalue = 0;
    double row_sum_err = 0;
    double detailed_balance_err = 0;
};

/// Exact transition matrix on an explicit support, with the stationary law
/// pi supplied for the detailed-balance check and the symmetrized
/// eigensolve. pi must be the law the oracle's ratios encode.
inline ChainReport chain_matrix(const GroundStateOracle& o,
                                const std::vector<std::uint64_t>& support,
                                const std::vector<double>& pi, const ChainConfig& cfg) {
    const std::size_t sz = support.size();
    if (sz > kChainMatrixMaxStates) throw guard_error("chain_matrix: support too large");
    if (pi.size() != sz) throw guard_error("chain_matrix: pi size mismatch");
    const int n = o.n();
    const double invN = 1.0 / static_cast<double>(proposal_count(n, cfg.k));

    ChainReport rep;
    rep.P = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(sz), static_cast<Eigen::Index>(sz));
    for (std::size_t i = 0; i < sz; ++i) {
        double off = 0;
        for (std::size_t l = 0; l < sz; ++l) {
            if (l == i) continue;
            if (hamming_distance(support[i], support[l]) > cfg.k) continue;
            const double r = o.ratio(BitString(support[i], n), BitString(support[l], n));
            const double p = 0.5 * invN * std::min(1.0, r);
            rep.P(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) = p;
            off += p;
        }
        rep.P(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0 - off;
    }

    for (std::size_t i = 0; i < sz; ++i) {
        rep.row_sum_err = std::max(
            rep.row_sum_err, std::abs(rep.P.row(static_cast<Eigen::Index>(i)).sum() - 1.0));
        for (std::size_t l = 0; l < sz; ++l)
            rep.detailed_balance_err = std::max(
                rep.detailed_balance_err,
                std::abs(pi[i] * rep.P(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) -
                         pi[l] * rep.P(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(i))));
    }

    // symmetrize: S = D^{1/2} P D^{-1/2} shares P's spectrum by detailed balance
    Eigen::MatrixXd s(static_cast<Eigen::Index>(sz), static_cast<Eigen::Index>(sz));
    for (std::size_t i = 0; i < sz; ++i)
        for (std::size_t l = 0; l < sz; ++l)
            s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) =
                std::sqrt(pi[i] / pi[l]) *
                rep.P(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l));
    s = (s + s.transpose()) / 2.0; // kill asymmetric rounding noise
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s);
    if (solver.info() != Eigen::Success) throw guard_error("chain eigensolve failed");
    const auto& ev = solver.eigenvalues();
    rep.min_eigenvalue = ev[0];
    rep.lambda1 = ev[static_cast<Eigen::Index>(sz) - 2];
    return rep;
}

struct GapBoundReport {
    double gamma = 0;
    double s = 0;
    std::uint64_t big_n = 0;
    double lambda1 = 0;
    double lhs = 0;       // 1 - lambda1
    double rhs = 0;       // gamma / (2 N s)
    bool holds = false;
    double mixing_time = 0;     // log(2 eps sqrt(pi(x_in))) / log(lambda1)
    double runtime_estimate = 0; // n^k s / gamma * log(1/(pi(x_in) eps)), constant 1
    std::vector<std::uint64_t> support;
    std::vector<double> pi;
    ChainReport chain;
};

constexpr int kGapCheckMaxQubits = 10;

/// End-to-end check of the spectral relation 1 - lambda1 >= gamma/(2Ns),
/// plus the mixing-time and call-count expressions it feeds.
inline GapBoundReport gap_bound_check(const SparseHamiltonian& h, const ChainConfig& cfg,
                                      bool force = false) {
    if (!force && h.n > kGapCheckMaxQubits) throw guard_error("gap_bound_check: n exceeds guard");
    GapBoundReport rep;
    GroundStateResult gs = exact_ground_state(h, force);
    rep.gamma = gs.gap;
    rep.s = sensitivity(h, gs.psi);
    rep.big_n = proposal_count(h.n, cfg.k);

    ExactDiagOracle oracle(h.n, gs.psi);
    const std::uint64_t dim = std::uint64_t{1} << h.n;
    for (std::uint64_t x = 0; x < dim; ++x)
        if (oracle.pi(x) > kSupportTol2) {
            rep.support.push_back(x);
            rep.pi.push_back(oracle.pi(x));
        }
    { // renormalize pi over the retained support
        double tot = 0;
        for (double v : rep.pi) tot += v;
        for (double& v : rep.pi) v /= tot;
    }
    rep.chain = chain_matrix(oracle, rep.support, rep.pi, cfg);
    rep.lambda1 = rep.chain.lambda1;
    rep.lhs = 1.0 - rep.lambda1;
    rep.rhs = rep.s > 0 ? rep.gamma / (2.0 * static_cast<double>(rep.big_n) * rep.s) : 0.0;
    rep.holds = rep.lhs >= rep.rhs - 1e-10;

    double pi_in = 0;
    for (std::size_t i = 0; i < rep.support.size(); ++i)
        if (rep.support[i] == cfg.x_in.bits) pi_in = rep.pi[i];
    if (pi_in > 0 && rep.lambda1 > 0 && rep.lambda1 < 1) {
        rep.mixing_time = std::log(2.0 * cfg.eps * std::sqrt(pi_in)) / std::log(rep.lambda1);
        rep.runtime_estimate = std::pow(static_cast<double>(h.n), cfg.k) * rep.s / rep.gamma *
                               std::log(1.0 / (pi_in * cfg.eps));
    }
    return rep;
}

} // namespace ampsamp
