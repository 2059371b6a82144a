#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ampsamp/bitstring.hpp"
#include "ampsamp/circuit.hpp" // tokenize / parse_complex_token
#include "ampsamp/gate.hpp"    // cplx / Mat / Vec aliases

namespace ampsamp {

constexpr int kEigensolveMaxQubits = 12;
constexpr double kHermiticityTol = 1e-10;
constexpr double kSupportTol2 = 1e-24; // |<x|psi>|^2 above this counts as in-support

/// Hermitian operator on n qubits, stored as a column-sparse matrix.
/// k is the locality parameter: <x|H|y> = 0 whenever d(x, y) > k.
struct SparseHamiltonian {
    int n = 0;
    int k = 0;
    // columns[x] = nonzero entries of H|x>, i.e. pairs (y, <y|H|x>)
    std::map<std::uint64_t, std::map<std::uint64_t, cplx>> columns;

    cplx entry(std::uint64_t y, std::uint64_t x) const {
        auto ic = columns.find(x);
        if (ic == columns.end()) return 0.0;
        auto ie = ic->second.find(y);
        return ie == ic->second.end() ? cplx{0, 0} : ie->second;
    }

    void add_entry(std::uint64_t y, std::uint64_t x, cplx v) {
        if (v == cplx{0, 0}) return;
        columns[x][y] += v;
        k = std::max(k, hamming_distance(x, y));
    }

    void check_hermitian() const {
        for (const auto& [x, col] : columns)
            for (const auto& [y, v] : col)
                if (std::abs(v - std::conj(entry(x, y))) > kHermiticityTol)
                    throw guard_error("Hamiltonian is not Hermitian at entry (" +
                                      std::to_string(y) + "," + std::to_string(x) + ")");
    }

    Mat dense(bool force = false) const {
        if (!force && n > kEigensolveMaxQubits)
            throw guard_error("dense Hamiltonian: n exceeds guard of " +
                              std::to_string(kEigensolveMaxQubits) + " qubits");
        const Eigen::Index dim = Eigen::Index{1} << n;
        Mat h = Mat::Zero(dim, dim);
        for (const auto& [x, col] : columns)
            for (const auto& [y, v] : col) h(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) = v;
        return h;
    }
};

namespace detail {

/// Adds coeff * (tensor product of single-qubit Paulis) to H.
/// word[i] in {I, X, Y, Z} acts on qubit i.
inline void add_pauli_term(SparseHamiltonian& h, cplx coeff, const std::string& word) {
    std::uint64_t flip = 0;
    std::vector<int> ys, zs;
    for (int i = 0; i < h.n; ++i) {
        switch (word[static_cast<std::size_t>(i)]) {
        case 'I': break;
        case 'X': flip |= std::uint64_t{1} << i; break;
        case 'Y': flip |= std::uint64_t{1} << i; ys.push_back(i); break;
        case 'Z': zs.push_back(i); break;
        default: throw guard_error("bad Pauli letter in term: " + word);
        }
    }
    const std::uint64_t dim = std::uint64_t{1} << h.n;
    for (std::uint64_t x = 0; x < dim; ++x) {
        cplx v = coeff;
        for (int i : ys) v *= ((x >> i) & 1) ? cplx{0, -1} : cplx{0, 1}; // Y|b> = i(-1)^b |1-b>
        for (int i : zs) v *= ((x >> i) & 1) ? -1.0 : 1.0;
        h.add_entry(x ^ flip, x, v);
    }
}

} // namespace detail

/// Hamiltonian file: "qubits N", then "term <re,im> <pauli-word>" lines
/// and/or "matrix-file <path>" (entry lines "x y re im", Hermitian pairs
/// completed automatically).
inline SparseHamiltonian parse_hamiltonian(const std::string& text,
                                           const std::string& file = "<string>") {
    SparseHamiltonian h;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool have_n = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ss(line);
        std::string tok;
        if (!(ss >> tok) || tok[0] == '#') continue;
        if (!have_n) {
            if (tok != "qubits") throw parse_error(file, lineno, "expected 'qubits N' first");
            if (!(ss >> h.n) || h.n < 1 || h.n > 20)
                throw parse_error(file, lineno, "qubit count out of range");
            have_n = true;
            continue;
        }
        if (tok == "term") {
            std::string cs, word;
            if (!(ss >> cs >> word)) throw parse_error(file, lineno, "usage: term <re,im> <word>");
            if (static_cast<int>(word.size()) != h.n)
                throw parse_error(file, lineno, "Pauli word length != qubit count");
            detail::add_pauli_term(h, detail::parse_complex_token(cs, file, lineno), word);
        } else if (tok == "matrix-file") {
            std::string path;
            if (!(ss >> path)) throw parse_error(file, lineno, "matrix-file needs a path");
            std::ifstream mf(path);
            if (!mf) throw parse_error(path, 0, "cannot open matrix file");
            std::string ml;
            int mln = 0;
            while (std::getline(mf, ml)) {
                ++mln;
                std::istringstream ms(ml);
                std::uint64_t x, y;
                double re, im;
                std::string first;
                if (!(ms >> first) || first[0] == '#') continue;
                try {
                    x = std::stoull(first);
                } catch (const std::exception&) {
                    throw parse_error(path, mln, "expected 'x y re im'");
                }
                if (!(ms >> y >> re >> im)) throw parse_error(path, mln, "expected 'x y re im'");
                if (x >= (std::uint64_t{1} << h.n) || y >= (std::uint64_t{1} << h.n))
                    throw parse_error(path, mln, "basis index out of range");
                if (h.entry(y, x) == cplx{0, 0}) h.add_entry(y, x, {re, im});
                if (x != y && h.entry(x, y) == cplx{0, 0}) h.add_entry(x, y, {re, -im});
            }
        } else {
            throw parse_error(file, lineno, "unknown directive: " + tok);
        }
    }
    if (!have_n) throw parse_error(file, lineno, "empty Hamiltonian file");
    h.check_hermitian();
    return h;
}

inline SparseHamiltonian parse_hamiltonian_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error(path, 0, "cannot open Hamiltonian file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_hamiltonian(ss.str(), path);
}

struct GroundStateResult {
    double e0 = 0;
    double gap = 0;
    Vec psi;
};

constexpr double kDegeneracyTol = 1e-8;

/// Dense eigensolve of the full spectrum; errors on (near-)degenerate
/// ground spaces since the sampler assumes a unique ground state.
inline GroundStateResult exact_ground_state(const SparseHamiltonian& h, bool force = false) {
    Mat dense = h.dense(force);
    Eigen::SelfAdjointEigenSolver<Mat> solver(dense);
    if (solver.info() != Eigen::Success) throw guard_error("eigensolve failed");
    GroundStateResult r;
    r.e0 = solver.eigenvalues()[0];
    r.gap = solver.eigenvalues()[1] - solver.eigenvalues()[0];
    r.psi = solver.eigenvectors().col(0);
    if (r.gap < kDegeneracyTol)
        throw guard_error("degenerate ground state (gap " + std::to_string(r.gap) + ")");
    return r;
}

/// s = max_{x != y} |<y|H|x><x|psi>| / |<y|psi>|, over y with <y|psi> != 0;
/// 0 when H has no off-diagonal entries.
inline double sensitivity(const SparseHamiltonian& h, const Vec& psi) {
    double s = 0;
    bool any_offdiag = false, any_valid = false;
    for (const auto& [x, col] : h.columns)
        for (const auto& [y, v] : col) {
            if (y == x) continue;
            any_offdiag = true;
            const double ay = std::abs(psi[static_cast<Eigen::Index>(y)]);
            if (ay * ay <= kSupportTol2) continue;
            any_valid = true;
            s = std::max(s, std::abs(v) * std::abs(psi[static_cast<Eigen::Index>(x)]) / ay);
        }
    if (any_offdiag && !any_valid)
        throw guard_error("sensitivity: psi vanishes on every connected string");
    return s;
}

struct StoquasticReport {
    bool is_stoquastic = false;
    double bound = 0; // max diagonal - E0 (meaningful when is_stoquastic)
};

inline StoquasticReport stoquastic_check_and_bound(const SparseHamiltonian& h,
                                                   bool force = false) {
    StoquasticReport rep;
    rep.is_stoquastic = true;
    for (const auto& [x, col] : h.columns)
        for (const auto& [y, v] : col)
            if (y != x && (std::abs(v.imag()) > 1e-12 || v.real() > 1e-12))
                rep.is_stoquastic = false;
    double maxdiag = 0;
    bool first = true;
    const std::uint64_t dim = std::uint64_t{1} << h.n;
    for (std::uint64_t x = 0; x < dim; ++x) {
        const double d = h.entry(x, x).real();
        if (first || d > maxdiag) maxdiag = d;
        first = false;
    }
    Eigen::SelfAdjointEigenSolver<Mat> solver(h.dense(force));
    if (solver.info() != Eigen::Success) throw guard_error("eigensolve failed");
    rep.bound = maxdiag - solver.eigenvalues()[0]; // E0 alone; degeneracy is fine here
    return rep;
}

/// Exhaustive check of the locality promise: no entry between strings
/// farther apart than k.
inline bool check_locality(const SparseHamiltonian& h, int k) {
    for (const auto& [x, col] : h.columns)
        for (const auto& [y, v] : col)
            if (std::abs(v) > 0 && hamming_distance(x, y) > k) return false;
    return true;
}

} // namespace ampsamp
