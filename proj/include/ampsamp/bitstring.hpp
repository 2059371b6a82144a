#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ampsamp/error.hpp"

namespace ampsamp {

/// A length-n binary word. Bit i (of the packed word) is qubit i; qubit 0 is
/// printed first, so the textual form reads qubit 0, qubit 1, ...
struct BitString {
    std::uint64_t bits = 0;
    int n = 0;

    BitString() = default;
    BitString(std::uint64_t b, int nq) : bits(b), n(nq) {}

    int bit(int i) const { return static_cast<int>((bits >> i) & 1u); }
    void set_bit(int i, int v) {
        if (v)
            bits |= (std::uint64_t{1} << i);
        else
            bits &= ~(std::uint64_t{1} << i);
    }

    /// Restriction onto an ordered index set A: bit j of the result is the
    /// A[j]-th bit of this string.
    std::uint64_t restrict_to(const std::vector<int>& a) const {
        std::uint64_t r = 0;
        for (std::size_t j = 0; j < a.size(); ++j)
            r |= static_cast<std::uint64_t>(bit(a[j])) << j;
        return r;
    }

    bool operator==(const BitString& o) const { return bits == o.bits && n == o.n; }

    std::string str() const {
        std::string s(static_cast<std::size_t>(n), '0');
        for (int i = 0; i < n; ++i)
            if (bit(i)) s[static_cast<std::size_t>(i)] = '1';
        return s;
    }

    static BitString parse(const std::string& s) {
        BitString b(0, static_cast<int>(s.size()));
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] != '0' && s[i] != '1')
                throw guard_error("bad bit string: " + s);
            b.set_bit(static_cast<int>(i), s[i] == '1');
        }
        return b;
    }
};

inline int hamming_distance(std::uint64_t a, std::uint64_t b) {
    return __builtin_popcountll(a ^ b);
}

} // namespace ampsamp
