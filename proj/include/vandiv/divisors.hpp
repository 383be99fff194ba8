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

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "vandiv/arith.hpp"
#include "vandiv/errors.hpp"
#include "vandiv/numeric.hpp"

namespace vandiv {

inline constexpr std::uint64_t kDefaultDivisorCap = 1u << 16;

/// Guard on exact rational-power comparisons: refuse exponents that would
/// build integers beyond this many bits.
inline constexpr std::uint64_t kExactPowerBitGuard = 1u << 27;

/// The sorted divisors 1 = d_1 < d_2 < ... < d_tau = n.
template <class Int>
struct DivisorList {
    Int n{1};
    std::vector<Int> divisors;

    std::uint64_t count() const { return divisors.size(); }
};

using DivisorList64 = DivisorList<std::uint64_t>;
using DivisorListBig = DivisorList<BigInt>;

/// All divisors of f.value in ascending order. Refuses to enumerate more
/// than `cap` divisors.
template <class Int>
DivisorList<Int> divisors(const Factorization<Int>& f, std::uint64_t cap = kDefaultDivisorCap) {
    const std::uint64_t count = tau(f);
    if (count > cap) throw cap_exceeded("divisor enumeration", cap, count);
    DivisorList<Int> list;
    list.n = f.value;
    list.divisors.reserve(count);
    list.divisors.push_back(Int(1));
    for (const auto& pp : f.factors) {
        const std::size_t base_size = list.divisors.size();
        Int power = pp.prime;
        for (unsigned e = 1; e <= pp.exponent; ++e) {
            for (std::size_t i = 0; i < base_size; ++i)
                list.divisors.push_back(list.divisors[i] * power);
            if (e < pp.exponent) power *= pp.prime;
        }
    }
    std::sort(list.divisors.begin(), list.divisors.end());
    return list;
}

template <class Int>
struct ConcentrationReport {
    std::uint64_t max_count = 1;
    Int witness_x{1};
    std::optional<double> normalized;  // max_count * sqrt(omega2) / tau; absent for n = 1
};

/// Maximum number of divisors in any closed interval [X, 2X], X real.
/// Sliding X right until it hits a divisor never shrinks the window's
/// contents, so scanning windows [d_i, 2 d_i] with two pointers is exact.
/// The witness is the smallest maximizing divisor.
template <class Int>
ConcentrationReport<Int> dyadic_concentration(const DivisorList<Int>& list,
                                              const Factorization<Int>& f) {
    ConcentrationReport<Int> report;
    const auto& d = list.divisors;
    report.witness_x = d.front();
    report.max_count = 0;
    std::size_t j = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (j < i) j = i;
        // d[j+1] <= 2 d[i], written subtraction-first so it cannot overflow.
        while (j + 1 < d.size() && d[j + 1] - d[i] <= d[i]) ++j;
        const std::uint64_t count = j - i + 1;
        if (count > report.max_count) {
            report.max_count = count;
            report.witness_x = d[i];
        }
    }
    if (list.n >= 2)
        report.normalized = static_cast<double>(report.max_count) *
                            std::sqrt(static_cast<double>(omega2(f))) /
                            static_cast<double>(list.count());
    return report;
}

namespace detail {

/// Exact divisor classification against the window
/// |log d - (log n)/2| vs eps * log n, eps = r/s > 0, using only integer
/// powers: d is far-low when d^(2s) * n^(2r) <= n^s, far-high when
/// d^(2s) >= n^s * n^(2r). Both sides stay in non-negative exponents, so
/// the comparison is exact for every rational eps.
template <class Int>
struct LogWindow {
    BigInt n_s;       // n^s
    BigInt n_2r;      // n^(2r)
    std::uint64_t two_s;

    LogWindow(const Int& n, const BigRat& eps) {
        if (n < 2) throw std::domain_error("log window: n must be >= 2");
        if (eps <= 0) throw std::invalid_argument("log window: eps must be positive");
        const BigInt r = boost::multiprecision::numerator(eps);
        const BigInt s = boost::multiprecision::denominator(eps);
        const std::uint64_t s64 = checked_u64(s, "window denominator");
        const std::uint64_t r64 = checked_u64(r, "window numerator");
        const BigInt big_n = BigInt(n);
        const std::uint64_t worst_exp = std::max(2 * s64, s64 + 2 * r64);
        if (worst_exp * static_cast<std::uint64_t>(bit_length(big_n)) > kExactPowerBitGuard)
            throw std::invalid_argument("log window: eps denominator too fine for exact comparison");
        n_s = ipow(big_n, s64);
        n_2r = ipow(big_n, 2 * r64);
        two_s = 2 * s64;
    }

    bool far_low(const Int& d) const { return ipow(BigInt(d), two_s) * n_2r <= n_s; }
    bool far_high(const Int& d) const { return ipow(BigInt(d), two_s) >= n_s * n_2r; }
};

}  // namespace detail

/// Count of divisors with |log d - (log n)/2| >= delta * log n, resolved
/// with exact integer-power comparisons (ties at the boundary count).
/// delta must be a rational in (0, 1/2]; n must be >= 2.
template <class Int>
std::uint64_t far_divisor_count(const DivisorList<Int>& list, const BigRat& delta) {
    if (list.n < 2) throw std::domain_error("far_divisor_count: n must be >= 2");
    if (delta <= 0 || delta > BigRat(1, 2))
        throw std::invalid_argument("far_divisor_count: delta must lie in (0, 1/2]");
    const detail::LogWindow<Int> window(list.n, delta);
    const auto& d = list.divisors;
    // Both predicates are monotone along the sorted list.
    const auto low_end = std::partition_point(
        d.begin(), d.end(), [&](const Int& v) { return window.far_low(v); });
    const auto high_begin = std::partition_point(
        d.begin(), d.end(), [&](const Int& v) { return !window.far_high(v); });
    return static_cast<std::uint64_t>(low_end - d.begin()) +
           static_cast<std::uint64_t>(d.end() - high_begin);
}

struct WindowCounts {
    std::uint64_t far_low = 0;
    std::uint64_t inside = 0;  // strict: |log d - (log n)/2| < eps * log n
    std::uint64_t far_high = 0;
};

/// Partition counts for the strict window |log d - (log n)/2| < eps log n.
/// eps may be any positive rational (above 1/2 every interior divisor
/// qualifies).
template <class Int>
WindowCounts log_window_counts(const DivisorList<Int>& list, const BigRat& eps) {
    const detail::LogWindow<Int> window(list.n, eps);
    const auto& d = list.divisors;
    const auto low_end = std::partition_point(
        d.begin(), d.end(), [&](const Int& v) { return window.far_low(v); });
    const auto high_begin = std::partition_point(
        d.begin(), d.end(), [&](const Int& v) { return !window.far_high(v); });
    WindowCounts counts;
    counts.far_low = static_cast<std::uint64_t>(low_end - d.begin());
    counts.far_high = static_cast<std::uint64_t>(d.end() - high_begin);
    counts.inside = d.size() - counts.far_low - counts.far_high;
    return counts;
}

}  // namespace vandiv
