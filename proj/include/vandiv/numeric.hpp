/*
Copyright 2026 the vandiv authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace vandiv {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline unsigned bit_length(const BigInt& v) {
    return v.is_zero() ? 0u : static_cast<unsigned>(boost::multiprecision::msb(v)) + 1u;
}

inline unsigned bit_length(std::uint64_t v) {
    return v == 0 ? 0u : 64u - static_cast<unsigned>(std::countl_zero(v));
}

/// Natural log of a positive integer. Values up to 64 bits convert through
/// double directly; larger values are split as log(top 64 bits) +
/// (bit length - 64) * log 2, which keeps relative error near machine
/// epsilon no matter how large the integer gets.
inline double log_value(const BigInt& v) {
    if (v <= 0) throw std::domain_error("log_value: argument must be positive");
    const unsigned bits = bit_length(v);
    if (bits <= 64) return std::log(v.convert_to<double>());
    const unsigned shift = bits - 64;
    const BigInt top = v >> shift;
    return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::numbers::ln2;
}

inline double log_value(std::uint64_t v) {
    if (v == 0) throw std::domain_error("log_value: argument must be positive");
    return std::log(static_cast<double>(v));
}

/// base^exp by binary exponentiation (boost's pow takes unsigned only).
inline BigInt ipow(const BigInt& base, std::uint64_t exp) {
    BigInt result = 1;
    BigInt b = base;
    while (exp != 0) {
        if (exp & 1u) result *= b;
        exp >>= 1;
        if (exp != 0) b *= b;
    }
    return result;
}

/// Floor of the k-th root, by Newton iteration from an over-estimate.
inline BigInt iroot_floor(const BigInt& x, unsigned k) {
    if (k == 0) throw std::domain_error("iroot_floor: k must be >= 1");
    if (x < 0) throw std::domain_error("iroot_floor: argument must be >= 0");
    if (x <= 1 || k == 1) return x;
    const unsigned bits = bit_length(x);
    BigInt r = BigInt(1) << ((bits + k - 1) / k);  // r^k >= x
    while (true) {
        const BigInt next = ((k - 1) * r + x / ipow(r, k - 1)) / k;
        if (next >= r) break;
        r = next;
    }
    while (ipow(r, k) > x) --r;
    while (ipow(r + 1, k) <= x) ++r;
    return r;
}

inline bool is_perfect_square(const BigInt& v) {
    if (v < 0) return false;
    const BigInt r = boost::multiprecision::sqrt(v);
    return r * r == v;
}

inline bool is_perfect_square(std::uint64_t v) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(v)));
    while (r > 0 && r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r * r == v;
}

/// Parses "123", "0.25", or "3/8" into an exact rational. Decimal input is
/// taken literally (0.1 becomes 1/10), which is what makes downstream
/// integer-power comparisons exact.
inline BigRat parse_rational(const std::string& text) {
    const auto bad = [&] { return std::invalid_argument("not a rational number: '" + text + "'"); };
    if (text.empty()) throw bad();
    std::size_t pos = 0;
    bool negative = false;
    if (text[pos] == '+' || text[pos] == '-') {
        negative = text[pos] == '-';
        ++pos;
    }
    const auto digits = [&](std::size_t from, std::size_t to) {
        if (from >= to) throw bad();
        for (std::size_t i = from; i < to; ++i)
            if (text[i] < '0' || text[i] > '9') throw bad();
        return BigInt(text.substr(from, to - from));
    };
    BigRat value;
    if (const auto slash = text.find('/', pos); slash != std::string::npos) {
        const BigInt num = digits(pos, slash);
        const BigInt den = digits(slash + 1, text.size());
        if (den.is_zero()) throw bad();
        value = BigRat(num, den);
    } else if (const auto dot = text.find('.', pos); dot != std::string::npos) {
        const BigInt whole = dot > pos ? digits(pos, dot) : BigInt(0);
        const std::size_t frac_len = text.size() - dot - 1;
        const BigInt frac = frac_len > 0 ? digits(dot + 1, text.size()) : BigInt(0);
        if (dot == pos && frac_len == 0) throw bad();
        value = BigRat(whole * ipow(BigInt(10), frac_len) + frac, ipow(BigInt(10), frac_len));
    } else {
        value = BigRat(digits(pos, text.size()));
    }
    return negative ? -value : value;
}

inline std::uint64_t checked_u64(const BigInt& v, const char* what) {
    if (v < 0 || v > std::numeric_limits<std::uint64_t>::max())
        throw std::overflow_error(std::string(what) + " does not fit in 64 bits");
    return v.convert_to<std::uint64_t>();
}

inline double to_double(const BigRat& q) { return q.convert_to<double>(); }

}  // namespace vandiv
