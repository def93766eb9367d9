#pragma once

// Exact rational arithmetic used throughout model generation. Floating
// point appears only at emission time and inside the numeric solver.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pbcp {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt big_from_u128(unsigned __int128 v) {
    const std::uint64_t hi = static_cast<std::uint64_t>(v >> 64);
    const std::uint64_t lo = static_cast<std::uint64_t>(v);
    BigInt r = hi;
    r <<= 64;
    r += lo;
    return r;
}

inline Rational rational_from_u128(unsigned __int128 num, unsigned __int128 den) {
    return Rational(big_from_u128(num), big_from_u128(den));
}

inline double to_double(const Rational& r) {
    return r.convert_to<double>();
}

// Renders as "num/den", or just "num" for integers.
inline std::string to_string(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

// Accepts "3", "-3", "17/20" and decimal literals like "0.85" (kept exact).
inline Rational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        BigInt num(text.substr(0, slash));
        BigInt den(text.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("rational with zero denominator: " + text);
        return Rational(num, den);
    }
    const auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(BigInt(text));
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    const std::size_t frac_len = text.size() - dot - 1;
    bool neg = false;
    if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) neg = digits[0] == '-';
    BigInt num(digits);
    BigInt den = 1;
    for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
    (void)neg;
    return Rational(num, den);
}

}  // namespace pbcp
