#pragma once

#include <cmath>
#include <cstdint>
#include <map>

#include "ampsamp/bitstring.hpp"

namespace ampsamp {

/// Probability distribution over n-bit strings, stored sparsely.
struct Distribution {
    int n = 0;
    std::map<std::uint64_t, double> p;

    double prob(std::uint64_t x) const {
        auto it = p.find(x);
        return it == p.end() ? 0.0 : it->second;
    }
    void add(std::uint64_t x, double mass) {
        if (mass != 0.0) p[x] += mass;
    }
    double total() const {
        double s = 0;
        for (const auto& [x, v] : p) s += v;
        return s;
    }
    /// Drops entries below a floor and rescales to total 1.
    void normalize(double floor = 0.0) {
        double s = 0;
        for (auto it = p.begin(); it != p.end();) {
            if (it->second <= floor)
                it = p.erase(it);
            else {
                s += it->second;
                ++it;
            }
        }
        if (s <= 0) throw guard_error("distribution has no mass");
        for (auto& [x, v] : p) v /= s;
    }
};

struct TvReport {
    double l1 = 0;  // sum_x |p - q|
    double tv = 0;  // l1 / 2
};

inline TvReport tv_distance(const Distribution& a, const Distribution& b) {
    if (a.n != b.n) throw guard_error("tv_distance: dimension mismatch");
    TvReport r;
    auto ia = a.p.begin();
    auto ib = b.p.begin();
    while (ia != a.p.end() || ib != b.p.end()) {
        if (ib == b.p.end() || (ia != a.p.end() && ia->first < ib->first)) {
            r.l1 += std::abs(ia->second);
            ++ia;
        } else if (ia == a.p.end() || ib->first < ia->first) {
            r.l1 += std::abs(ib->second);
            ++ib;
        } else {
            r.l1 += std::abs(ia->second - ib->second);
            ++ia;
            ++ib;
        }
    }
    r.tv = r.l1 / 2;
    return r;
}

namespace detail {

/// Regularized upper incomplete gamma Q(a, x), series + continued fraction.
inline double gamma_q(double a, double x) {
    if (x < 0 || a <= 0) throw guard_error("gamma_q: bad arguments");
    if (x == 0) return 1.0;
    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        // P(a,x) by series, return 1 - P
        double ap = a, sum = 1.0 / a, del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-15) break;
        }
        return 1.0 - sum * std::exp(-x + a * std::log(x) - lg);
    }
    // Q(a,x) by Lentz continued fraction
    double b = x + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::abs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - lg) * h;
}

} // namespace detail

struct ChiSquareReport {
    double statistic = 0;
    double p_value = 0;
    int dof = 0;
    bool out_of_support = false; // a sample landed where ref assigns zero mass
};

/// Pearson goodness of fit of counts against ref (restricted to its support).
/// Any observed mass outside the support is an automatic failure.
inline ChiSquareReport chi_square_gof(const std::vector<BitString>& samples,
                                      const Distribution& ref) {
    if (ref.p.empty()) throw guard_error("chi_square_gof: empty reference");
    double pmin = 1.0;
    for (const auto& [x, v] : ref.p)
        if (v > 0) pmin = std::min(pmin, v);
    const double ns = static_cast<double>(samples.size());
    if (ns < 5.0 / pmin)
        throw guard_error("chi_square_gof: need at least " +
                          std::to_string(static_cast<long long>(std::ceil(5.0 / pmin))) +
                          " samples");
    std::map<std::uint64_t, long long> counts;
    for (const auto& s : samples) ++counts[s.bits];

    ChiSquareReport rep;
    for (const auto& [x, c] : counts)
        if (ref.prob(x) <= 0) rep.out_of_support = true;
    for (const auto& [x, q] : ref.p) {
        if (q <= 0) continue;
        const double expd = ns * q;
        const double obs = static_cast<double>(counts.count(x) ? counts.at(x) : 0);
        rep.statistic += (obs - expd) * (obs - expd) / expd;
        ++rep.dof;
    }
    rep.dof -= 1;
    rep.p_value = rep.dof > 0 ? detail::gamma_q(rep.dof / 2.0, rep.statistic / 2.0) : 1.0;
    if (rep.out_of_support) rep.p_value = 0.0;
    return rep;
}

} // namespace ampsamp
