#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ampsamp/circuit.hpp"

namespace ampsamp {

/// Pauli operator i^r X^x Z^z (canonical per-qubit order X before Z).
/// Hermitian iff r = |x & z| (mod 2).
struct Pauli {
    std::uint64_t x = 0;
    std::uint64_t z = 0;
    int r = 0; // exponent of i, mod 4

    friend Pauli operator*(const Pauli& a, const Pauli& b) {
        Pauli p;
        p.x = a.x ^ b.x;
        p.z = a.z ^ b.z;
        p.r = (a.r + b.r + 2 * (__builtin_popcountll(a.z & b.x) & 1)) & 3;
        return p;
    }
};

namespace detail {

/// Dense matrix of the local Pauli X^a Z^b on w qubits (support-ordered
/// little-endian, matching Gate's index convention).
inline Mat local_pauli_matrix(int w, int a, int b) {
    const int d = 1 << w;
    Mat m = Mat::Zero(d, d);
    for (int col = 0; col < d; ++col) {
        int row = col ^ a;
        int sign = __builtin_popcount(col & b) & 1; // Z acts first on |col>
        m(row, col) = sign ? -1.0 : 1.0;
    }
    return m;
}

struct ConjEntry {
    int a = 0, b = 0, k = 0;
};

/// Conjugation table of a Clifford gate: for each local Pauli X^a Z^b,
/// U (X^a Z^b) U^dag = i^k X^a' Z^b'. Returns nullopt if U is not Clifford.
inline std::optional<std::vector<ConjEntry>> clifford_conjugation_table(const Gate& g,
                                                                        double tol = 1e-8) {
    const int w = g.arity();
    if (w > 3) return std::nullopt; // Clifford recognition only for small supports
    const int d = 1 << w;
    const int np = d * d;
    std::vector<ConjEntry> table(static_cast<std::size_t>(np));
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            Mat m = g.matrix * local_pauli_matrix(w, a, b) * g.matrix.adjoint();
            bool found = false;
            for (int a2 = 0; a2 < d && !found; ++a2)
                for (int b2 = 0; b2 < d && !found; ++b2) {
                    cplx coeff =
                        (local_pauli_matrix(w, a2, b2).adjoint() * m).trace() / double(d);
                    if (std::abs(coeff) < 0.5) continue;
                    int k = static_cast<int>(std::lround(std::arg(coeff) / (std::numbers::pi / 2)));
                    k = ((k % 4) + 4) % 4;
                    const cplx ik = (k == 0) ? cplx{1, 0}
                                  : (k == 1) ? cplx{0, 1}
                                  : (k == 2) ? cplx{-1, 0}
                                             : cplx{0, -1};
                    if (std::abs(coeff - ik) > tol) return std::nullopt;
                    // verify it's exactly this Pauli
                    if ((m - ik * local_pauli_matrix(w, a2, b2)).cwiseAbs().maxCoeff() > tol)
                        return std::nullopt;
                    table[static_cast<std::size_t>(a * d + b)] = {a2, b2, k};
                    found = true;
                }
            if (!found) return std::nullopt;
        }
    return table;
}

} // namespace detail

inline bool is_clifford_gate(const Gate& g) {
    return detail::clifford_conjugation_table(g).has_value();
}

/// Stabilizer simulation with exact global phase: a sign-and-i tracking
/// tableau plus one tracked reference amplitude <x0|psi>. Any amplitude is
/// then a Pauli-product phase times the reference, O(n^2) per query.
class StabilizerEngine {
public:
    explicit StabilizerEngine(int n) : n_(n) {
        if (n < 1 || n > 63) throw guard_error("stabilizer engine: bad qubit count");
        gens_.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) gens_[static_cast<std::size_t>(i)].z = std::uint64_t{1} << i;
        x0_ = 0;
        a0_ = 1.0;
        rebuild_echelon();
    }

    int n() const { return n_; }

    void apply(const Gate& g) {
        auto table = detail::clifford_conjugation_table(g);
        if (!table) throw guard_error("non-Clifford gate: " + g.label);
        const int w = g.arity();
        const int d = 1 << w;

        // keep the old solver state for reference-amplitude transport
        StabilizerEngine old = *this;

        for (auto& p : gens_) {
            int lx = 0, lz = 0;
            for (int j = 0; j < w; ++j) {
                const int q = g.support[static_cast<std::size_t>(j)];
                lx |= static_cast<int>((p.x >> q) & 1) << j;
                lz |= static_cast<int>((p.z >> q) & 1) << j;
            }
            const auto& e = (*table)[static_cast<std::size_t>(lx * d + lz)];
            for (int j = 0; j < w; ++j) {
                const int q = g.support[static_cast<std::size_t>(j)];
                const std::uint64_t bit = std::uint64_t{1} << q;
                p.x = ((e.a >> j) & 1) ? (p.x | bit) : (p.x & ~bit);
                p.z = ((e.b >> j) & 1) ? (p.z | bit) : (p.z & ~bit);
            }
            p.r = (p.r + e.k) & 3;
        }
        rebuild_echelon();
        pick_reference();

        // a0' = sum_y <x0'|U|y> <y|psi_old>, y ranging over the support block
        const std::uint64_t row = BitString(x0_, n_).restrict_to(g.support);
        cplx acc = 0;
        for (int col = 0; col < d; ++col) {
            const cplx mv = g.matrix(static_cast<Eigen::Index>(row), col);
            if (std::abs(mv) < 1e-300) continue;
            std::uint64_t y = x0_;
            for (int j = 0; j < w; ++j) {
                const std::uint64_t bit = std::uint64_t{1} << g.support[static_cast<std::size_t>(j)];
                if ((col >> j) & 1)
                    y |= bit;
                else
                    y &= ~bit;
            }
            acc += mv * old.amplitude_bits(y);
        }
        a0_ = acc;
        if (std::abs(a0_) < 1e-9)
            throw guard_error("stabilizer engine: reference amplitude vanished (internal error)");
    }

    cplx amplitude(const BitString& x) const { return amplitude_bits(x.bits); }

    cplx amplitude_bits(std::uint64_t x) const {
        // membership + phase via the X-part echelon
        std::uint64_t cur = x ^ x0_;
        Pauli p; // identity
        for (const auto& [bit, gen] : pivots_) {
            if (cur & (std::uint64_t{1} << bit)) {
                p = p * gen;
                cur ^= gen.x;
            }
        }
        if (cur != 0) return 0.0;
        // <x|psi> = i^r (-1)^{b.x0} a0 with p = i^r X^(x^x0) Z^b
        int k = p.r & 3;
        double sign = (__builtin_popcountll(p.z & x0_) & 1) ? -1.0 : 1.0;
        const cplx ik = (k == 0) ? cplx{1, 0} : (k == 1) ? cplx{0, 1} : (k == 2) ? cplx{-1, 0}
                                                                                 : cplx{0, -1};
        return ik * sign * a0_;
    }

    /// Number of X-part pivots; the support has 2^rank strings of equal weight.
    int support_rank() const { return static_cast<int>(pivots_.size()); }

private:
    void rebuild_echelon() {
        pivots_.clear();
        ztype_.clear();
        std::vector<Pauli> work = gens_;
        for (int bit = 0; bit < n_; ++bit) {
            int found = -1;
            for (std::size_t i = 0; i < work.size(); ++i)
                if (work[i].x & (std::uint64_t{1} << bit)) {
                    found = static_cast<int>(i);
                    break;
                }
            if (found < 0) continue;
            Pauli piv = work[static_cast<std::size_t>(found)];
            work.erase(work.begin() + found);
            for (auto& p : work)
                if (p.x & (std::uint64_t{1} << bit)) p = p * piv;
            pivots_.emplace_back(bit, piv);
        }
        for (const auto& p : work) {
            // x-part is zero now; Hermiticity forces r even
            ztype_.push_back(p);
        }
    }

    void pick_reference() {
        // solve (-1)^{z.x} = i^{-r} over the Z-type stabilizers
        struct Row {
            std::uint64_t mask;
            int rhs;
        };
        std::vector<Row> rows;
        for (const auto& p : ztype_) rows.push_back({p.z, (p.r >> 1) & 1});
        std::uint64_t x = 0;
        std::vector<int> pivot_bits;
        std::size_t rank = 0;
        for (int bit = 0; bit < n_ && rank < rows.size(); ++bit) {
            std::size_t sel = rows.size();
            for (std::size_t i = rank; i < rows.size(); ++i)
                if (rows[i].mask & (std::uint64_t{1} << bit)) {
                    sel = i;
                    break;
                }
            if (sel == rows.size()) continue;
            std::swap(rows[rank], rows[sel]);
            for (std::size_t i = 0; i < rows.size(); ++i)
                if (i != rank && (rows[i].mask & (std::uint64_t{1} << bit))) {
                    rows[i].mask ^= rows[rank].mask;
                    rows[i].rhs ^= rows[rank].rhs;
                }
            pivot_bits.push_back(bit);
            ++rank;
        }
        for (std::size_t i = rank; i < rows.size(); ++i)
            if (rows[i].rhs != 0)
                throw guard_error("stabilizer engine: inconsistent constraints (internal error)");
        for (std::size_t i = 0; i < rank; ++i)
            if (rows[i].rhs) x |= std::uint64_t{1} << pivot_bits[i];
        x0_ = x;
    }

    int n_;
    std::vector<Pauli> gens_;
    std::vector<std::pair<int, Pauli>> pivots_; // X-part echelon with products tracked
    std::vector<Pauli> ztype_;                  // generators with zero X part
    std::uint64_t x0_ = 0;
    cplx a0_ = 1.0;
};

/// <x|C|0^n> for a Clifford-only circuit, global phase included.
inline cplx clifford_amplitude(const Circuit& c, const BitString& x) {
    c.require_nonadaptive("clifford_amplitude");
    StabilizerEngine eng(c.n);
    for (const auto& g : c.gates) eng.apply(g);
    return eng.amplitude(x);
}

} // namespace ampsamp
