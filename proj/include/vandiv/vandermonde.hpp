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

#include <cstdint>
#include <optional>

#include "vandiv/divisors.hpp"
#include "vandiv/errors.hpp"
#include "vandiv/kahan.hpp"

namespace vandiv {

inline constexpr std::uint64_t kDefaultExactCap = 1024;

/// Exact V(n): the product of all pairwise divisor differences d_j - d_i,
/// i < j. Grows super-exponentially (~tau^2/2 factors), hence the cap.
template <class Int>
BigInt exact_v(const DivisorList<Int>& list, std::uint64_t cap = kDefaultExactCap) {
    if (list.count() > cap) throw cap_exceeded("exact Vandermonde divisor-count", cap, list.count());
    const auto& d = list.divisors;
    BigInt product = 1;
    for (std::size_t j = 1; j < d.size(); ++j)
        for (std::size_t i = 0; i < j; ++i) product *= BigInt(d[j] - d[i]);
    return product;
}

/// log V(n) = sum over i < j of log(d_j - d_i), compensated, in the fixed
/// j-major i-minor order. 0 for n = 1 (empty product).
template <class Int>
double log_v(const DivisorList<Int>& list) {
    const auto& d = list.divisors;
    KahanAccumulator acc;
    for (std::size_t j = 1; j < d.size(); ++j)
        for (std::size_t i = 0; i < j; ++i) acc.add(log_value(Int(d[j] - d[i])));
    return acc.value();
}

/// S(n) = sum of (i - 1) log d_i over the sorted divisors (1-based i).
template <class Int>
double s_of_n(const DivisorList<Int>& list) {
    KahanAccumulator acc;
    for (std::size_t i = 1; i < list.divisors.size(); ++i)
        acc.add(static_cast<double>(i) * log_value(list.divisors[i]));
    return acc.value();
}

/// S*(n) = sum of (tau - i) log d_i, the reversed-weight companion of S.
/// The i = 1 term is always zero (log 1), as is the i = tau weight.
template <class Int>
double s_star(const DivisorList<Int>& list) {
    const auto& d = list.divisors;
    KahanAccumulator acc;
    for (std::size_t i = 1; i + 1 < d.size(); ++i)
        acc.add(static_cast<double>(d.size() - 1 - i) * log_value(d[i]));
    return acc.value();
}

template <class Int>
struct VandermondeReport {
    Int n{1};
    std::uint64_t tau = 1;
    std::uint64_t omega2 = 0;
    bool is_square = true;
    double log_n = 0.0;
    double log_v = 0.0;
    double s = 0.0;
    double s_star = 0.0;
    double residual = 0.0;  // s - log_v, nonnegative
    std::optional<BigInt> exact_v;
    // Ratios against the bound shapes; defined for n >= 2 only.
    std::optional<double> lower_ratio;          // log_v / (tau^2/4 * log n)
    std::optional<double> upper_ratio;          // log_v / (3 tau^2/8 * log n)
    std::optional<double> s_ratio;              // s / (tau^2 log n)
    std::optional<double> normalized_residual;  // residual / (tau^2 log n / sqrt(omega2) + tau^2)
};

/// Assembles the full report from an already-computed factorization and
/// divisor list. When want_exact is set but the divisor count exceeds
/// exact_cap, exact_v is simply left absent.
template <class Int>
VandermondeReport<Int> report(const Factorization<Int>& f, const DivisorList<Int>& list,
                              bool want_exact = false, std::uint64_t exact_cap = kDefaultExactCap) {
    VandermondeReport<Int> r;
    r.n = f.value;
    r.tau = list.count();
    r.omega2 = omega2(f);
    r.is_square = is_perfect_square(f.value);
    r.log_v = log_v(list);
    r.s = s_of_n(list);
    r.s_star = s_star(list);
    r.residual = r.s - r.log_v;
    if (want_exact && r.tau <= exact_cap) r.exact_v = exact_v(list, exact_cap);
    if (f.value >= 2) {
        r.log_n = log_value(f.value);
        const double t2 = static_cast<double>(r.tau) * static_cast<double>(r.tau);
        r.lower_ratio = r.log_v / (t2 / 4.0 * r.log_n);
        r.upper_ratio = r.log_v / (3.0 * t2 / 8.0 * r.log_n);
        r.s_ratio = r.s / (t2 * r.log_n);
        r.normalized_residual =
            r.residual / (t2 * r.log_n / std::sqrt(static_cast<double>(r.omega2)) + t2);
    }
    return r;
}

/// Convenience overload: factors n and enumerates its divisors first.
template <class Int>
VandermondeReport<Int> report(const Int& n, bool want_exact = false,
                              std::uint64_t exact_cap = kDefaultExactCap,
                              std::uint64_t divisor_cap = kDefaultDivisorCap) {
    const auto f = factor(n);
    const auto list = divisors(f, divisor_cap);
    return report(f, list, want_exact, exact_cap);
}

}  // namespace vandiv
