#pragma once

#include <fstream>
#include <sstream>

#include "ampsamp/rng.hpp"
#include "ampsamp/statevector.hpp"

namespace ampsamp {

constexpr int kNoisyMaxQubits = 12;

/// Per-prefix perturbation magnitudes: after gate t the simulated state is
/// phi_t = psi_t + e_t with |e_t| = epsilons[t-1] exactly (e_0 = 0).
struct NoisePlan {
    std::vector<double> epsilons; // index t-1 holds epsilon_t, t = 1..m
    std::uint64_t seed = 0;

    double epsilon(int t) const { // t = 1..m; unlisted prefixes are exact
        if (t < 1 || t > static_cast<int>(epsilons.size())) return 0.0;
        return epsilons[static_cast<std::size_t>(t - 1)];
    }
    double sum_until(int m) const { // sum_{t=1}^{m-1} epsilon_t
        double s = 0;
        for (int t = 1; t < m; ++t) s += epsilon(t);
        return s;
    }
};

inline NoisePlan parse_noise_plan(const std::string& text, const std::string& file = "<string>") {
    NoisePlan plan;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ss(line);
        std::string tok;
        if (!(ss >> tok) || tok[0] == '#') continue;
        if (tok == "seed") {
            if (!(ss >> plan.seed)) throw parse_error(file, lineno, "bad seed");
            continue;
        }
        int t;
        double eps;
        try {
            t = std::stoi(tok);
        } catch (const std::exception&) {
            throw parse_error(file, lineno, "expected 'seed <u64>' or '<t> <epsilon>'");
        }
        if (!(ss >> eps) || t < 1 || eps < 0)
            throw parse_error(file, lineno, "bad 't epsilon' line");
        if (static_cast<int>(plan.epsilons.size()) < t)
            plan.epsilons.resize(static_cast<std::size_t>(t), 0.0);
        plan.epsilons[static_cast<std::size_t>(t - 1)] = eps;
    }
    return plan;
}

inline NoisePlan parse_noise_plan_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error(path, 0, "cannot open noise plan");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_noise_plan(ss.str(), path);
}

inline std::string serialize_noise_plan(const NoisePlan& plan) {
    std::ostringstream os;
    os << "seed " << plan.seed << '\n';
    os.precision(17);
    for (std::size_t i = 0; i < plan.epsilons.size(); ++i)
        os << (i + 1) << ' ' << plan.epsilons[i] << '\n';
    return os.str();
}

/// Exact-state simulator plus seeded perturbations: after the t-th apply,
/// amplitude_current(x) = <x|U_t|phi_{t-1}> (unnormalized) and current_norm2
/// = |phi_{t-1}|^2, which is what the robustness analysis consumes. Random
/// access amplitude(t, x) returns <x|phi_t>.
class NoisyOracle : public AmplitudeOracle {
public:
    NoisyOracle(const Circuit& c, NoisePlan plan, bool force = false)
        : AmplitudeOracle(c.m()), circuit_(c), plan_(std::move(plan)) {
        if (!force && c.n > kNoisyMaxQubits)
            throw guard_error("noisy oracle: n exceeds guard of " +
                              std::to_string(kNoisyMaxQubits) + " qubits");
        if (c.n > kStatevectorMaxQubits)
            throw guard_error("noisy oracle: n too large to materialize states");
        reset();
    }

    int n() const override { return circuit_.n; }
    int m() const override { return circuit_.m(); }

    void reset() override {
        const Eigen::Index dim = Eigen::Index{1} << circuit_.n;
        psi_ = Vec::Zero(dim);
        psi_[0] = 1.0;
        phi_ = psi_;
        pre_ = psi_;
        prev_norm2_ = 1.0;
        t_ = 0;
        realized_.clear();
    }

    void apply(const Gate& g) override {
        prev_norm2_ = phi_.squaredNorm();
        pre_ = phi_;
        apply_gate_dense(pre_, g); // U_t phi_{t-1}
        apply_gate_dense(psi_, g); // exact psi_t
        ++t_;
        phi_ = psi_ + perturbation(t_);
        realized_.push_back((phi_ - psi_).norm());
    }

    cplx amplitude_current(const BitString& x) override {
        count_call(t_);
        return pre_[static_cast<Eigen::Index>(x.bits)];
    }

    int current_prefix() const override { return t_; }
    double current_norm2() override { return prev_norm2_; }

    cplx amplitude(int t, const BitString& x) override {
        ensure_prefix(t);
        count_call(t);
        return phi_[static_cast<Eigen::Index>(x.bits)];
    }

    std::unique_ptr<AmplitudeOracle> clone() const override {
        auto c = std::make_unique<NoisyOracle>(circuit_, plan_, true);
        c->psi_ = psi_;
        c->phi_ = phi_;
        c->pre_ = pre_;
        c->prev_norm2_ = prev_norm2_;
        c->t_ = t_;
        c->realized_ = realized_;
        return c;
    }

    /// |phi_t - psi_t| actually drawn at each prefix reached so far.
    const std::vector<double>& realized_epsilons() const { return realized_; }

private:
    Vec perturbation(int t) const {
        const double eps = plan_.epsilon(t);
        const Eigen::Index dim = Eigen::Index{1} << circuit_.n;
        if (eps == 0.0) return Vec::Zero(dim);
        Rng rng(derive_seed(plan_.seed, static_cast<std::uint64_t>(t)));
        std::normal_distribution<double> gauss(0.0, 1.0);
        Vec e(dim);
        for (Eigen::Index i = 0; i < dim; ++i) e[i] = cplx(gauss(rng), gauss(rng));
        return e * (eps / e.norm());
    }

    void ensure_prefix(int t) {
        if (t < 0 || t > circuit_.m()) throw guard_error("prefix out of range");
        circuit_.require_nonadaptive("noisy oracle random access");
        if (t < t_) reset();
        while (t_ < t) apply(circuit_.gates[static_cast<std::size_t>(t_)]);
    }

    Circuit circuit_;
    NoisePlan plan_;
    Vec psi_, phi_, pre_;
    double prev_norm2_ = 1.0;
    int t_ = 0;
    std::vector<double> realized_;
};

inline std::unique_ptr<AmplitudeOracle> wrap_noisy_oracle(const Circuit& c, const NoisePlan& plan,
                                                          bool force = false) {
    return std::make_unique<NoisyOracle>(c, plan, force);
}

} // namespace ampsamp
