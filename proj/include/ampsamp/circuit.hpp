#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ampsamp/gate.hpp"

namespace ampsamp {

/// Classical control attached to one gate slot: the gate actually applied at
/// that step is looked up from the values of the control bits, which must
/// already be fixed (measured) when the slot is reached.
struct AdaptiveRule {
    std::vector<int> controls;
    std::map<std::uint64_t, Gate> table; // complete: one entry per pattern
    std::string table_path;              // for re-serialization
};

struct Circuit {
    int n = 0;
    std::vector<Gate> gates;
    std::map<int, AdaptiveRule> adaptive; // gate index -> rule

    int m() const { return static_cast<int>(gates.size()); }
    bool is_adaptive(int t) const { return adaptive.count(t) > 0; }
    bool has_adaptive() const { return !adaptive.empty(); }

    /// Gate applied at slot t given the current string x.
    const Gate& resolve(int t, const BitString& x) const {
        auto it = adaptive.find(t);
        if (it == adaptive.end()) return gates[static_cast<std::size_t>(t)];
        std::uint64_t pat = x.restrict_to(it->second.controls);
        return it->second.table.at(pat);
    }

    void require_nonadaptive(const std::string& who) const {
        if (has_adaptive())
            throw guard_error(who + ": adaptive circuits need sampler-driven resolution");
    }

    int max_arity() const {
        int k = 0;
        for (const auto& g : gates) k = std::max(k, g.arity());
        return k;
    }
};

namespace detail {

inline cplx parse_complex_token(const std::string& tok, const std::string& file, int line) {
    auto comma = tok.find(',');
    if (comma == std::string::npos) throw parse_error(file, line, "expected re,im pair: " + tok);
    try {
        return {std::stod(tok.substr(0, comma)), std::stod(tok.substr(comma + 1))};
    } catch (const std::exception&) {
        throw parse_error(file, line, "bad complex literal: " + tok);
    }
}

inline std::vector<std::string> tokenize(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> toks;
    std::string t;
    while (ss >> t) {
        if (t[0] == '#') break;
        toks.push_back(t);
    }
    return toks;
}

/// Parses one gate spec starting at toks[pos]; `support` is the host support.
/// Grammar: "<name>" | "rz <theta>" | "matrix <2^w x 2^w re,im entries>".
inline Gate parse_gate_spec(const std::vector<std::string>& toks, std::size_t pos,
                            const std::vector<int>& support, const std::string& file, int line) {
    const std::string& name = toks[pos];
    if (name == "rz") {
        if (pos + 1 >= toks.size()) throw parse_error(file, line, "rz needs an angle");
        return make_gate("rz", support, std::stod(toks[pos + 1]));
    }
    if (name == "matrix") {
        const int w = static_cast<int>(support.size());
        const std::size_t d = std::size_t{1} << w;
        if (toks.size() - pos - 1 != d * d)
            throw parse_error(file, line, "matrix needs " + std::to_string(d * d) + " entries");
        Gate g;
        g.support = support;
        g.label = "matrix";
        g.matrix = Mat(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
        for (std::size_t i = 0; i < d * d; ++i)
            g.matrix(static_cast<Eigen::Index>(i / d), static_cast<Eigen::Index>(i % d)) =
                parse_complex_token(toks[pos + 1 + i], file, line);
        return g;
    }
    return make_gate(name, support);
}

} // namespace detail

/// Parses a control-table file. Lines: "controls <q...>" then
/// "<pattern> <gate spec>". Patterns not listed fall back to the host gate.
inline AdaptiveRule parse_control_table(const std::string& path, const Gate& host_gate) {
    std::ifstream in(path);
    if (!in) throw parse_error(path, 0, "cannot open control table");
    AdaptiveRule rule;
    rule.table_path = path;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = detail::tokenize(line);
        if (toks.empty()) continue;
        if (toks[0] == "controls") {
            for (std::size_t i = 1; i < toks.size(); ++i)
                rule.controls.push_back(std::stoi(toks[i]));
            continue;
        }
        if (rule.controls.empty())
            throw parse_error(path, lineno, "controls line must come first");
        if (toks[0].size() != rule.controls.size())
            throw parse_error(path, lineno, "pattern length != number of controls");
        std::uint64_t pat = 0;
        for (std::size_t i = 0; i < toks[0].size(); ++i) {
            if (toks[0][i] != '0' && toks[0][i] != '1')
                throw parse_error(path, lineno, "bad pattern: " + toks[0]);
            if (toks[0][i] == '1') pat |= std::uint64_t{1} << i;
        }
        if (toks.size() < 2) throw parse_error(path, lineno, "missing gate spec");
        Gate g = detail::parse_gate_spec(toks, 1, host_gate.support, path, lineno);
        g.label += "/ctrl";
        rule.table[pat] = std::move(g);
    }
    if (rule.controls.empty()) throw parse_error(path, 0, "control table has no controls line");
    // complete the table with the host gate
    const std::uint64_t npat = std::uint64_t{1} << rule.controls.size();
    for (std::uint64_t p = 0; p < npat; ++p)
        if (!rule.table.count(p)) rule.table[p] = host_gate;
    return rule;
}

inline Circuit parse_circuit(const std::string& text, const std::string& file = "<string>") {
    Circuit c;
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
            c.n = std::stoi(toks[1]);
            if (c.n <= 0 || c.n > 63) throw parse_error(file, lineno, "qubit count out of range");
            have_n = true;
            continue;
        }
        // strip "ctrl <table>" suffix
        std::string ctrl_path;
        if (toks.size() >= 2 && toks[toks.size() - 2] == "ctrl") {
            ctrl_path = toks.back();
            toks.resize(toks.size() - 2);
        }
        try {
            Gate g;
            if (toks[0] == "matrix") {
                if (toks.size() < 2) throw parse_error(file, lineno, "matrix needs arity");
                const int w = std::stoi(toks[1]);
                if (w < 1 || w > kMaxGateArity)
                    throw parse_error(file, lineno, "matrix arity out of range");
                if (toks.size() < static_cast<std::size_t>(2 + w))
                    throw parse_error(file, lineno, "missing qubit indices");
                std::vector<int> support;
                for (int i = 0; i < w; ++i) support.push_back(std::stoi(toks[2 + i]));
                std::vector<std::string> rest(toks.begin() + 1 + w, toks.end());
                rest[0] = "matrix";
                g = detail::parse_gate_spec(rest, 0, support, file, lineno);
            } else if (toks[0] == "rz") {
                if (toks.size() != 3) throw parse_error(file, lineno, "usage: rz <qubit> <theta>");
                g = make_gate("rz", {std::stoi(toks[1])}, std::stod(toks[2]));
            } else {
                std::vector<int> support;
                for (std::size_t i = 1; i < toks.size(); ++i) support.push_back(std::stoi(toks[i]));
                g = make_gate(toks[0], support);
            }
            validate_gate(g, c.n);
            const int t = c.m();
            c.gates.push_back(g);
            if (!ctrl_path.empty()) {
                AdaptiveRule rule = parse_control_table(ctrl_path, g);
                for (int q : rule.controls) {
                    if (q < 0 || q >= c.n)
                        throw parse_error(file, lineno, "control qubit out of range");
                    for (int s : g.support)
                        if (s == q)
                            throw parse_error(file, lineno, "control qubit inside gate support");
                }
                for (auto& [pat, gate] : rule.table) validate_gate(gate, c.n);
                c.adaptive[t] = std::move(rule);
            }
        } catch (const guard_error& e) {
            throw parse_error(file, lineno, e.what());
        }
    }
    if (!have_n) throw parse_error(file, lineno, "empty circuit file");
    // measured (control) bits must stay untouched by later gates
    for (const auto& [t, rule] : c.adaptive)
        for (int s = t; s < c.m(); ++s) {
            const Gate& g = c.gates[static_cast<std::size_t>(s)];
            for (int q : g.support)
                for (int cq : rule.controls)
                    if (q == cq)
                        throw parse_error(file, 0,
                                          "control qubit " + std::to_string(cq) +
                                              " of gate " + std::to_string(t) +
                                              " reused in support of gate " + std::to_string(s));
        }
    return c;
}

inline Circuit parse_circuit_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error(path, 0, "cannot open circuit file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_circuit(ss.str(), path);
}

namespace detail {

inline std::string format_complex(cplx v) {
    std::ostringstream os;
    os.precision(17);
    os << v.real() << ',' << v.imag();
    return os.str();
}

inline std::string gate_spec_string(const Gate& g) {
    static const std::vector<std::string> named = {"h", "x",  "y",   "z",  "s",   "sdg", "t",
                                                   "tdg", "id", "cx", "cnot", "cz", "swap"};
    std::ostringstream os;
    bool is_named = false;
    for (const auto& nm : named)
        if (g.label == nm) is_named = true;
    if (is_named) {
        os << g.label;
        for (int q : g.support) os << ' ' << q;
    } else if (g.label == "rz") {
        os.precision(17);
        os << "rz " << g.support[0] << ' ' << 2.0 * std::arg(g.matrix(1, 1));
    } else {
        os << "matrix " << g.arity();
        for (int q : g.support) os << ' ' << q;
        for (Eigen::Index r = 0; r < g.matrix.rows(); ++r)
            for (Eigen::Index col = 0; col < g.matrix.cols(); ++col)
                os << ' ' << format_complex(g.matrix(r, col));
    }
    return os.str();
}

} // namespace detail

inline std::string serialize_circuit(const Circuit& c) {
    std::ostringstream os;
    os << "qubits " << c.n << '\n';
    for (int t = 0; t < c.m(); ++t) {
        os << detail::gate_spec_string(c.gates[static_cast<std::size_t>(t)]);
        auto it = c.adaptive.find(t);
        if (it != c.adaptive.end()) os << " ctrl " << it->second.table_path;
        os << '\n';
    }
    return os.str();
}

} // namespace ampsamp
