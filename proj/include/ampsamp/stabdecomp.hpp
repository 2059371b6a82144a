#pragma once

#include <vector>

#include "ampsamp/oracle.hpp"
#include "ampsamp/stabilizer.hpp"

namespace ampsamp {

constexpr int kMaxTCount = 16;

struct StabilizerTerm {
    cplx coefficient;
    Circuit clifford;
};

namespace detail {

/// T = alpha*I + beta*S exactly: alpha+beta = 1 and alpha+i*beta = e^{i pi/4}.
inline cplx t_beta() {
    return (std::polar(1.0, std::numbers::pi / 4) - 1.0) / (cplx{0, 1} - 1.0);
}
inline cplx t_alpha() { return 1.0 - t_beta(); }

/// Recognizes c*diag(1, e^{+-i pi/4}) and returns (c, sign) for the identity
/// c*(alpha I + beta S^{sign}); nullopt if the gate is not a T-type gate.
inline std::optional<std::pair<cplx, int>> match_t_gate(const Gate& g, double tol = 1e-9) {
    if (g.arity() != 1) return std::nullopt;
    if (std::abs(g.matrix(0, 1)) > tol || std::abs(g.matrix(1, 0)) > tol) return std::nullopt;
    const cplx u = g.matrix(0, 0), v = g.matrix(1, 1);
    if (std::abs(u) < 0.5) return std::nullopt;
    const cplx ratio = v / u;
    if (std::abs(ratio - std::polar(1.0, std::numbers::pi / 4)) <= tol) return {{u, +1}};
    if (std::abs(ratio - std::polar(1.0, -std::numbers::pi / 4)) <= tol) return {{u, -1}};
    return std::nullopt;
}

} // namespace detail

/// Exact prefix-indexed stabilizer decompositions of a Clifford+T circuit:
/// each T doubles the term count via T = alpha I + beta S.
inline std::vector<std::vector<StabilizerTerm>> stabilizer_decompose(const Circuit& c) {
    c.require_nonadaptive("stabilizer_decompose");
    std::vector<std::vector<StabilizerTerm>> out;
    std::vector<StabilizerTerm> cur;
    cur.push_back({cplx{1, 0}, Circuit{c.n, {}, {}}});
    out.push_back(cur);
    int tcount = 0;
    for (const auto& g : c.gates) {
        if (auto tg = detail::match_t_gate(g)) {
            if (++tcount > kMaxTCount)
                throw guard_error("stabilizer_decompose: T-count exceeds cap of " +
                                  std::to_string(kMaxTCount));
            const auto [coeff, sign] = *tg;
            const cplx a = coeff * (sign > 0 ? detail::t_alpha() : std::conj(detail::t_alpha()));
            const cplx b = coeff * (sign > 0 ? detail::t_beta() : std::conj(detail::t_beta()));
            const Gate sg = make_gate(sign > 0 ? "s" : "sdg", g.support);
            std::vector<StabilizerTerm> next;
            next.reserve(cur.size() * 2);
            for (const auto& term : cur) {
                StabilizerTerm ti = term;
                ti.coefficient *= a;
                next.push_back(std::move(ti));
                StabilizerTerm ts = term;
                ts.coefficient *= b;
                ts.clifford.gates.push_back(sg);
                next.push_back(std::move(ts));
            }
            cur = std::move(next);
        } else if (is_clifford_gate(g)) {
            for (auto& term : cur) term.clifford.gates.push_back(g);
        } else {
            throw guard_error("stabilizer_decompose: gate is neither Clifford nor T: " + g.label);
        }
        out.push_back(cur);
    }
    return out;
}

/// Oracle over stabilizer decompositions: amplitude = sum of term
/// coefficients times phase-exact stabilizer amplitudes.
class StabDecompOracle : public AmplitudeOracle {
public:
    explicit StabDecompOracle(const Circuit& c) : AmplitudeOracle(c.m()), circuit_(c) {
        reset();
    }

    int n() const override { return circuit_.n; }
    int m() const override { return circuit_.m(); }

    void reset() override {
        terms_.assign(1, Term{cplx{1, 0}, StabilizerEngine(circuit_.n)});
        snapshots_.assign(1, terms_);
        tcount_ = 0;
    }

    void apply(const Gate& g) override {
        if (auto tg = detail::match_t_gate(g)) {
            if (++tcount_ > kMaxTCount)
                throw guard_error("stabdecomp oracle: T-count exceeds cap of " +
                                  std::to_string(kMaxTCount));
            const auto [coeff, sign] = *tg;
            const cplx a = coeff * (sign > 0 ? detail::t_alpha() : std::conj(detail::t_alpha()));
            const cplx b = coeff * (sign > 0 ? detail::t_beta() : std::conj(detail::t_beta()));
            const Gate sg = make_gate(sign > 0 ? "s" : "sdg", g.support);
            std::vector<Term> next;
            next.reserve(terms_.size() * 2);
            for (const auto& term : terms_) {
                next.push_back({term.coeff * a, term.engine});
                Term ts{term.coeff * b, term.engine};
                ts.engine.apply(sg);
                next.push_back(std::move(ts));
            }
            terms_ = std::move(next);
        } else {
            for (auto& term : terms_) term.engine.apply(g);
        }
        snapshots_.push_back(terms_);
    }

    cplx amplitude_current(const BitString& x) override {
        count_call(current_prefix());
        return eval(terms_, x);
    }

    int current_prefix() const override { return static_cast<int>(snapshots_.size()) - 1; }

    cplx amplitude(int t, const BitString& x) override {
        if (t < 0 || t > circuit_.m()) throw guard_error("prefix out of range");
        circuit_.require_nonadaptive("stabdecomp oracle random access");
        while (current_prefix() < t)
            apply(circuit_.gates[static_cast<std::size_t>(current_prefix())]);
        count_call(t);
        return eval(snapshots_[static_cast<std::size_t>(t)], x);
    }

    std::unique_ptr<AmplitudeOracle> clone() const override {
        return std::make_unique<StabDecompOracle>(*this); // keeps the session state
    }

    std::size_t term_count() const { return terms_.size(); }

private:
    struct Term {
        cplx coeff;
        StabilizerEngine engine;
    };

    static cplx eval(const std::vector<Term>& terms, const BitString& x) {
        cplx acc = 0;
        for (const auto& term : terms) acc += term.coeff * term.engine.amplitude(x);
        return acc;
    }

    Circuit circuit_;
    std::vector<Term> terms_;
    std::vector<std::vector<Term>> snapshots_;
    int tcount_ = 0;
};

} // namespace ampsamp
