#pragma once

#include "ampsamp/planar.hpp"

namespace ampsamp {

/// Vertex gadget for 2-factor weights: a triangle t0-t1-t2 of a-weighted
/// edges (a = e^{i pi/3}), a b-weighted spoke ti-ui at each corner
/// (b = 3^{-1/4}), and one dangling edge per ui. Realizes W(000) = 0 and
/// W = 1 on the weight-2 inputs, with tau = 1.
inline PlanarGraph theta_gadget() {
    const cplx a = std::polar(1.0, std::numbers::pi / 3);
    const cplx b = std::pow(3.0, -0.25);
    // vertices: t0=0 t1=1 t2=2, u0=3 u1=4 u2=5
    PlanarGraph g;
    int id = 0;
    auto edge = [&](int u, int v, cplx w) { g.edges.push_back({id++, u, v, w}); };
    auto dangle = [&](int u) { g.edges.push_back({id++, u, -1, 1.0}); };
    dangle(3);        // 0: z1
    dangle(4);        // 1: z2
    dangle(5);        // 2: z3
    edge(0, 3, b);    // 3
    edge(1, 4, b);    // 4
    edge(2, 5, b);    // 5
    edge(0, 1, a);    // 6
    edge(1, 2, a);    // 7
    edge(2, 0, a);    // 8
    return g;
}

inline double theta_tau() { return 1.0; }

/// Crossing gadget: outer vertices v1..v4 (one dangling edge each, d-weighted
/// link vi-wi), inner square w1..w4 with a-weighted edges w1-w2 and w3-w4,
/// b-weighted edges w1-p, w2-q, w3-q, w4-p, and a c-weighted bridge p-q.
/// Dangling order (e1, e2, e3, e4) is the outer-face clockwise order, with
/// (e1, e3) and (e2, e4) the two pass-through pairs. This edge list
/// reproduces the five published cycle polynomials:
///   Cycle(0000) = 1 + 2ab^2c + a^2b^4
///   Cycle(1100) = d^2 (a + b^2 c + a b^4 + a^2 b^2 c)
///   Cycle(1010) = d^2 (b^2 c + 2 a b^2 + a^2 b^2 c)
///   Cycle(0110) = d^2 (b^2 + a^2 b^2 + 2 a b^2 c)
///   Cycle(1111) = d^4 (a^2 + b^4 + 2 a b^2 c)
inline PlanarGraph crossing_gadget() {
    const cplx a = std::polar(1.0, std::numbers::pi / 4);
    const cplx b = std::polar(1.0, -std::numbers::pi / 6);
    const cplx c = -1.0 / std::numbers::sqrt2;
    const double d = std::sqrt(std::abs(1.0 - std::numbers::sqrt2 * std::polar(1.0, std::numbers::pi / 12) +
                                        std::polar(1.0, std::numbers::pi / 6)));
    // vertices: v1..v4 = 0..3, w1..w4 = 4..7, p = 8, q = 9
    PlanarGraph g;
    int id = 0;
    auto edge = [&](int u, int v, cplx w) { g.edges.push_back({id++, u, v, w}); };
    auto dangle = [&](int u) { g.edges.push_back({id++, u, -1, 1.0}); };
    dangle(0);              // 0: e1 at v1
    dangle(1);              // 1: e2 at v2
    dangle(2);              // 2: e3 at v3
    dangle(3);              // 3: e4 at v4
    edge(0, 4, d);          // 4: v1-w1
    edge(1, 5, d);          // 5: v2-w2
    edge(2, 6, d);          // 6: v3-w3
    edge(3, 7, d);          // 7: v4-w4
    edge(4, 5, a);          // 8: w1-w2
    edge(6, 7, a);          // 9: w3-w4
    edge(4, 8, b);          // 10: w1-p
    edge(5, 9, b);          // 11: w2-q
    edge(6, 9, b);          // 12: w3-q
    edge(7, 8, b);          // 13: w4-p
    edge(8, 9, c);          // 14: p-q
    return g;
}

inline double crossing_tau() {
    const cplx a = std::polar(1.0, std::numbers::pi / 4);
    const cplx b = std::polar(1.0, -std::numbers::pi / 6);
    const cplx c = -1.0 / std::numbers::sqrt2;
    return 1.0 / std::norm(1.0 + 2.0 * a * b * b * c + a * a * b * b * b * b);
}

struct GadgetReport {
    bool theta_zero_ok = false;      // Cycle(Theta, 000) = 0
    bool theta_weight2_ok = false;   // |Cycle(Theta, weight-2 z)| = 1
    bool crossing_zero_ok = false;   // Cycle(Gamma, 1100) = Cycle(Gamma, 0110) = 0 (and mirrors)
    bool crossing_pass_ok = false;   // |Cycle| equal on 0000 / 1010 / 0101 / 1111
    bool crossing_symmetric = false; // Cycle(z1z2z3z4) = Cycle(z4z3z2z1) = Cycle(z2z1z4z3)
    double tau = 0;
    double max_residual = 0;

    bool all_ok() const {
        return theta_zero_ok && theta_weight2_ok && crossing_zero_ok && crossing_pass_ok &&
               crossing_symmetric;
    }
};

/// Numerically checks every identity the two gadgets must satisfy.
inline GadgetReport verify_gadgets() {
    GadgetReport rep;
    auto note = [&rep](double r) { rep.max_residual = std::max(rep.max_residual, r); };

    const PlanarGraph th = theta_gadget();
    const double r000 = std::abs(weighted_cycle_sum(th, 0b000));
    rep.theta_zero_ok = r000 <= 1e-12;
    note(r000);
    rep.theta_weight2_ok = true;
    for (std::uint64_t z : {0b011ull, 0b101ull, 0b110ull}) {
        const double r = std::abs(std::abs(weighted_cycle_sum(th, z)) - 1.0);
        if (r > 1e-12) rep.theta_weight2_ok = false;
        note(r);
    }

    const PlanarGraph cr = crossing_gadget();
    cplx cyc[16];
    for (std::uint64_t z = 0; z < 16; ++z) cyc[z] = weighted_cycle_sum(cr, z);
    rep.crossing_zero_ok = true;
    for (std::uint64_t z : {0b0011ull, 0b0110ull, 0b1001ull, 0b1100ull}) {
        // mask bit i corresponds to z_{i+1}; literals read z4 z3 z2 z1
        const double r = std::abs(cyc[z]);
        if (r > 1e-9) rep.crossing_zero_ok = false;
        note(r);
    }
    const double ref = std::norm(cyc[0b0000]);
    rep.tau = 1.0 / ref;
    rep.crossing_pass_ok = true;
    for (std::uint64_t z : {0b0101ull, 0b1010ull, 0b1111ull}) {
        const double r = std::abs(std::norm(cyc[z]) - ref);
        if (r > 1e-9) rep.crossing_pass_ok = false;
        note(r);
    }
    rep.crossing_symmetric = true;
    for (std::uint64_t z = 0; z < 16; ++z) {
        const std::uint64_t rev = ((z & 1) << 3) | ((z & 2) << 1) | ((z & 4) >> 1) | ((z & 8) >> 3);
        const std::uint64_t swp = ((z & 1) << 1) | ((z & 2) >> 1) | ((z & 4) << 1) | ((z & 8) >> 1);
        const double r = std::max(std::abs(cyc[z] - cyc[rev]), std::abs(cyc[z] - cyc[swp]));
        if (r > 1e-9) rep.crossing_symmetric = false;
        note(r);
    }
    return rep;
}

} // namespace ampsamp
