#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "ampsamp/bitstring.hpp"
#include "ampsamp/error.hpp"

namespace ampsamp {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

constexpr double kUnitarityTol = 1e-10;
constexpr double kClassifyTol = 1e-12;
constexpr int kMaxGateArity = 12;

/// A unitary on an ordered support. Matrix indices are little-endian in the
/// support order: the first listed qubit is the least significant bit of the
/// row/column index.
struct Gate {
    Mat matrix;
    std::vector<int> support;
    std::string label;

    int arity() const { return static_cast<int>(support.size()); }
    int dim() const { return static_cast<int>(matrix.rows()); }
};

enum class GateClass { Diagonal, BasisPermutation, General };

inline bool is_unitary(const Mat& m, double tol = kUnitarityTol) {
    Mat d = m.adjoint() * m - Mat::Identity(m.rows(), m.cols());
    return d.cwiseAbs().maxCoeff() <= tol;
}

inline void validate_gate(const Gate& g, int n) {
    const int w = g.arity();
    if (w == 0 || w > kMaxGateArity)
        throw guard_error("gate arity out of range: " + g.label);
    if (g.dim() != (1 << w) || g.matrix.cols() != g.matrix.rows())
        throw guard_error("gate matrix dimension does not match support: " + g.label);
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int q : g.support) {
        if (q < 0 || q >= n)
            throw guard_error("qubit index out of range in gate " + g.label);
        if (seen[static_cast<std::size_t>(q)])
            throw guard_error("repeated qubit index in gate " + g.label);
        seen[static_cast<std::size_t>(q)] = true;
    }
    if (!is_unitary(g.matrix))
        throw guard_error("gate matrix is not unitary: " + g.label);
}

inline GateClass classify_gate(const Gate& g, double tol = kClassifyTol) {
    const int d = g.dim();
    bool diagonal = true;
    for (int r = 0; r < d && diagonal; ++r)
        for (int c = 0; c < d; ++c)
            if (r != c && std::abs(g.matrix(r, c)) > tol) {
                diagonal = false;
                break;
            }
    if (diagonal) return GateClass::Diagonal;

    bool perm = true;
    for (int c = 0; c < d && perm; ++c) {
        int hits = 0;
        for (int r = 0; r < d; ++r) {
            double a = std::abs(g.matrix(r, c));
            if (a > tol) {
                if (std::abs(a - 1.0) > tol) {
                    perm = false;
                    break;
                }
                ++hits;
            }
        }
        if (hits != 1) perm = false;
    }
    return perm ? GateClass::BasisPermutation : GateClass::General;
}

/// For a basis-permutation gate, g|x> = phase * |y>. Returns (y, phase).
inline std::pair<BitString, cplx> apply_permutation_gate(const Gate& g, const BitString& x,
                                                         double tol = kClassifyTol) {
    const int d = g.dim();
    const std::uint64_t col = x.restrict_to(g.support);
    int row = -1;
    cplx phase;
    for (int r = 0; r < d; ++r) {
        if (std::abs(g.matrix(r, static_cast<Eigen::Index>(col))) > tol) {
            if (row >= 0) throw guard_error("gate is not a basis permutation: " + g.label);
            row = r;
            phase = g.matrix(r, static_cast<Eigen::Index>(col));
        }
    }
    if (row < 0 || std::abs(std::abs(phase) - 1.0) > tol)
        throw guard_error("gate is not a basis permutation: " + g.label);
    BitString y = x;
    for (int j = 0; j < g.arity(); ++j)
        y.set_bit(g.support[static_cast<std::size_t>(j)], (row >> j) & 1);
    return {y, phase};
}

// ---- standard gate matrices ----

namespace gates {

inline Mat h() {
    Mat m(2, 2);
    const double r = 1.0 / std::numbers::sqrt2;
    m << r, r, r, -r;
    return m;
}
inline Mat x() {
    Mat m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}
inline Mat y() {
    Mat m(2, 2);
    m << cplx(0, 0), cplx(0, -1), cplx(0, 1), cplx(0, 0);
    return m;
}
inline Mat z() {
    Mat m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}
inline Mat s() {
    Mat m(2, 2);
    m << 1, 0, 0, cplx(0, 1);
    return m;
}
inline Mat sdg() {
    Mat m(2, 2);
    m << 1, 0, 0, cplx(0, -1);
    return m;
}
inline Mat t() {
    Mat m(2, 2);
    m << 1, 0, 0, std::polar(1.0, std::numbers::pi / 4);
    return m;
}
inline Mat tdg() {
    Mat m(2, 2);
    m << 1, 0, 0, std::polar(1.0, -std::numbers::pi / 4);
    return m;
}
inline Mat id() { return Mat::Identity(2, 2); }
inline Mat rz(double theta) {
    Mat m(2, 2);
    m << std::polar(1.0, -theta / 2), 0, 0, std::polar(1.0, theta / 2);
    return m;
}
// two-qubit matrices; first support qubit = least significant index bit
inline Mat cx() { // control = first qubit, target = second
    Mat m = Mat::Zero(4, 4);
    m(0, 0) = 1;
    m(1, 3) = 1;
    m(2, 2) = 1;
    m(3, 1) = 1;
    return m;
}
inline Mat cz() {
    Mat m = Mat::Identity(4, 4);
    m(3, 3) = -1;
    return m;
}
inline Mat swap() {
    Mat m = Mat::Zero(4, 4);
    m(0, 0) = 1;
    m(1, 2) = 1;
    m(2, 1) = 1;
    m(3, 3) = 1;
    return m;
}

} // namespace gates

inline Gate make_gate(const std::string& name, const std::vector<int>& support,
                      double theta = 0.0) {
    Gate g;
    g.support = support;
    g.label = name;
    if (name == "h") g.matrix = gates::h();
    else if (name == "x") g.matrix = gates::x();
    else if (name == "y") g.matrix = gates::y();
    else if (name == "z") g.matrix = gates::z();
    else if (name == "s") g.matrix = gates::s();
    else if (name == "sdg") g.matrix = gates::sdg();
    else if (name == "t") g.matrix = gates::t();
    else if (name == "tdg") g.matrix = gates::tdg();
    else if (name == "id") g.matrix = gates::id();
    else if (name == "rz") g.matrix = gates::rz(theta);
    else if (name == "cx" || name == "cnot") g.matrix = gates::cx();
    else if (name == "cz") g.matrix = gates::cz();
    else if (name == "swap") g.matrix = gates::swap();
    else throw guard_error("unknown gate name: " + name);
    if (g.dim() != (1 << support.size()))
        throw guard_error("wrong qubit count for gate " + name);
    return g;
}

} // namespace ampsamp
