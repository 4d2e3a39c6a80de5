#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gapred {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

// Error taxonomy shared by the library and the CLI exit-code mapping.
struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& msg) : std::runtime_error(msg) {}
};
struct budget_error : std::runtime_error {
    explicit budget_error(const std::string& msg) : std::runtime_error(msg) {}
};
struct verify_error : std::runtime_error {
    explicit verify_error(const std::string& msg) : std::runtime_error(msg) {}
};
struct sampling_error : std::runtime_error {
    explicit sampling_error(const std::string& msg) : std::runtime_error(msg) {}
};

inline std::string u128_to_string(u128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
        s.push_back(static_cast<char>('0' + static_cast<unsigned>(v % 10)));
        v /= 10;
    }
    return std::string(s.rbegin(), s.rend());
}

inline u128 u128_from_string(const std::string& s) {
    if (s.empty()) throw parse_error("empty integer token");
    u128 v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') throw parse_error("bad integer token '" + s + "'");
        u128 next = v * 10 + static_cast<unsigned>(c - '0');
        if (next < v) throw parse_error("integer overflow in token '" + s + "'");
        v = next;
    }
    return v;
}

// p^e with overflow detection, used for group sizes and enumeration budgets.
inline u128 pow_u128(u64 base, unsigned exp) {
    u128 r = 1;
    for (unsigned i = 0; i < exp; ++i) {
        u128 next = r * base;
        if (base != 0 && next / base != r) throw budget_error("power overflows 128 bits");
        r = next;
    }
    return r;
}

inline u64 pow_u64_checked(u64 base, unsigned exp) {
    u128 r = pow_u128(base, exp);
    if (r > UINT64_MAX) throw budget_error("power overflows 64 bits");
    return static_cast<u64>(r);
}

// Exact nonnegative fraction for rejection rates and distances.
struct fraction {
    u64 num = 0;
    u64 den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool is_zero() const { return num == 0; }

    // this >= other, exact
    bool ge(const fraction& o) const {
        return static_cast<u128>(num) * o.den >= static_cast<u128>(o.num) * den;
    }
    bool le(const fraction& o) const { return o.ge(*this); }

    static fraction min(const fraction& a, const fraction& b) { return a.le(b) ? a : b; }

    // this >= other / 2, exact
    bool ge_half_of(const fraction& o) const {
        return static_cast<u128>(num) * o.den * 2 >= static_cast<u128>(o.num) * den;
    }

    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

} // namespace gapred
