#pragma once

#include <deque>
#include <set>

#include "ampsamp/mcmc.hpp"

namespace ampsamp {

/// H = -sum_a P_a with P_a = sum_j |phi_{a,j}><phi_{a,j}|, where within each
/// family a the phi_{a,j} have pairwise disjoint computational-basis
/// supports. Frustration-free instances admit exact pi(y)/pi(x) ratios from
/// the projector states alone.
struct MagicRatioHamiltonian {
    int n = 0;
    using State = std::map<std::uint64_t, cplx>; // sparse amplitudes, normalized
    std::vector<std::vector<State>> families;

    int m() const { return static_cast<int>(families.size()); }
};

inline MagicRatioHamiltonian parse_magic_ratio(const std::string& text,
                                               const std::string& file = "<string>") {
    MagicRatioHamiltonian h;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool have_n = false;
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = detail::tokenize(line);
        if (toks.empty()) continue;
        if (!have_n) {
            if (toks[0] != "qubits" || toks.size() != 2)
                throw parse_error(file, lineno, "expected 'qubits N' first");
            h.n = std::stoi(toks[1]);
            if (h.n < 1 || h.n > 20) throw parse_error(file, lineno, "qubit count out of range");
            have_n = true;
            continue;
        }
        if (toks[0] == "family") {
            h.families.emplace_back();
            continue;
        }
        if (toks[0] == "state") {
            if (h.families.empty()) throw parse_error(file, lineno, "state outside a family");
            if (toks.size() < 3 || toks.size() % 2 == 0)
                throw parse_error(file, lineno, "usage: state <bits> <re,im> [<bits> <re,im> ...]");
            MagicRatioHamiltonian::State st;
            for (std::size_t i = 1; i + 1 < toks.size(); i += 2) {
                BitString b = BitString::parse(toks[i]);
                if (b.n != h.n) throw parse_error(file, lineno, "bit string length != qubits");
                st[b.bits] = detail::parse_complex_token(toks[i + 1], file, lineno);
            }
            double norm2 = 0;
            for (const auto& [x, a] : st) norm2 += std::norm(a);
            if (std::abs(norm2 - 1.0) > 1e-10)
                throw parse_error(file, lineno, "state not normalized");
            h.families.back().push_back(std::move(st));
            continue;
        }
        throw parse_error(file, lineno, "unknown directive: " + toks[0]);
    }
    if (!have_n) throw parse_error(file, lineno, "empty magic-ratio file");
    // per-family support disjointness
    for (std::size_t a = 0; a < h.families.size(); ++a) {
        std::set<std::uint64_t> seen;
        for (const auto& st : h.families[a])
            for (const auto& [x, amp] : st)
                if (std::abs(amp) > 0 && !seen.insert(x).second)
                    throw parse_error(file, 0, "family " + std::to_string(a + 1) +
                                                   " has overlapping state supports");
    }
    return h;
}

inline MagicRatioHamiltonian parse_magic_ratio_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error(path, 0, "cannot open magic-ratio file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_magic_ratio(ss.str(), path);
}

inline SparseHamiltonian to_hamiltonian(const MagicRatioHamiltonian& mr) {
    SparseHamiltonian h;
    h.n = mr.n;
    for (const auto& fam : mr.families)
        for (const auto& st : fam)
            for (const auto& [y, ay] : st)
                for (const auto& [x, ax] : st) h.add_entry(y, x, -ay * std::conj(ax));
    h.check_hermitian();
    return h;
}

/// pi(y)/pi(x) for H-connected pairs: locate a family state containing both
/// strings and return the squared amplitude ratio.
inline double magic_ratio(const MagicRatioHamiltonian& mr, const BitString& x,
                          const BitString& y) {
    bool saw_y_without_x = false;
    for (const auto& fam : mr.families)
        for (const auto& st : fam) {
            auto ix = st.find(x.bits);
            auto iy = st.find(y.bits);
            const bool hx = ix != st.end() && std::abs(ix->second) > 0;
            const bool hy = iy != st.end() && std::abs(iy->second) > 0;
            if (hx && hy) return std::norm(iy->second) / std::norm(ix->second);
            if (hy && !hx) saw_y_without_x = true;
        }
    if (saw_y_without_x)
        throw guard_error("magic_ratio: x outside the connecting projector support (pi(x) = 0)");
    throw guard_error("magic_ratio: no family connects the given strings");
}

/// Ratio oracle for chains. Pairs not directly connected by a projector are
/// handled by composing exact ratios along a path of connected strings (the
/// ratio telescopes); unreachable strings are treated as zero-probability.
class MagicRatioOracle : public GroundStateOracle {
public:
    explicit MagicRatioOracle(MagicRatioHamiltonian mr) : mr_(std::move(mr)) {}

    int n() const override { return mr_.n; }

    bool supp_member(const BitString& x) const override {
        for (const auto& fam : mr_.families)
            for (const auto& st : fam) {
                auto it = st.find(x.bits);
                if (it != st.end() && std::abs(it->second) > 0) return true;
            }
        return false;
    }

    double ratio(const BitString& x, const BitString& y) const override {
        if (x.bits == y.bits) return 1.0;
        // BFS from x through projector supports, accumulating the ratio
        std::map<std::uint64_t, double> rel; // pi(z)/pi(x)
        std::deque<std::uint64_t> queue;
        rel[x.bits] = 1.0;
        queue.push_back(x.bits);
        while (!queue.empty()) {
            const std::uint64_t cur = queue.front();
            queue.pop_front();
            if (cur == y.bits) return rel[cur];
            for (const auto& fam : mr_.families)
                for (const auto& st : fam) {
                    auto ic = st.find(cur);
                    if (ic == st.end() || std::abs(ic->second) == 0) continue;
                    for (const auto& [z, az] : st) {
                        if (std::abs(az) == 0 || rel.count(z)) continue;
                        rel[z] = rel[cur] * std::norm(az) / std::norm(ic->second);
                        queue.push_back(z);
                    }
                }
        }
        return 0.0; // y unreachable from x: treat as pi(y) = 0
    }

private:
    MagicRatioHamiltonian mr_;
};

struct MagicRatioReport {
    bool disjoint_supports = true;
    bool frustration_free = true;  // P_a psi = psi for every family
    double frustration_residual = 0;
    double ground_energy = 0;
    double sensitivity_value = 0;
    int m = 0;
    bool sensitivity_le_m = false;
};

constexpr int kMagicRatioVerifyMaxQubits = 12;

/// Builds H explicitly and verifies the structural promises: disjoint
/// supports, frustration-freeness of the ground state, and s <= m.
inline MagicRatioReport verify_magic_ratio_structure(const MagicRatioHamiltonian& mr,
                                                     bool force = false) {
    if (!force && mr.n > kMagicRatioVerifyMaxQubits)
        throw guard_error("verify_magic_ratio_structure: n exceeds guard");
    MagicRatioReport rep;
    rep.m = mr.m();

    for (const auto& fam : mr.families) {
        std::set<std::uint64_t> seen;
        for (const auto& st : fam)
            for (const auto& [xb, amp] : st)
                if (std::abs(amp) > 0 && !seen.insert(xb).second) rep.disjoint_supports = false;
    }

    SparseHamiltonian h = to_hamiltonian(mr);
    GroundStateResult gs = exact_ground_state(h, force);
    rep.ground_energy = gs.e0;

    // P_a psi = psi for each a
    for (const auto& fam : mr.families) {
        Vec projected = Vec::Zero(gs.psi.size());
        for (const auto& st : fam) {
            cplx overlap = 0;
            for (const auto& [xb, amp] : st)
                overlap += std::conj(amp) * gs.psi[static_cast<Eigen::Index>(xb)];
            for (const auto& [xb, amp] : st)
                projected[static_cast<Eigen::Index>(xb)] += amp * overlap;
        }
        rep.frustration_residual =
            std::max(rep.frustration_residual, (projected - gs.psi).norm());
    }
    rep.frustration_free = rep.frustration_residual <= 1e-8;

    rep.sensitivity_value = sensitivity(h, gs.psi);
    rep.sensitivity_le_m = rep.sensitivity_value <= static_cast<double>(rep.m) + 1e-9;
    return rep;
}

} // namespace ampsamp
