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
#include <stdexcept>

#include "vandiv/arith.hpp"
#include "vandiv/divisors.hpp"
#include "vandiv/errors.hpp"
#include "vandiv/vandermonde.hpp"

namespace vandiv {

/// Limit value g(kappa) = (2 + 3 kappa) / (8 + 8 kappa) of the ratio
/// S(N) / (tau(N)^2 log N) along the N = p n construction. Increases from
/// 1/4 (kappa -> 0) to 3/8 (kappa -> infinity).
inline double target_ratio(double kappa) {
    if (!(kappa > 0)) throw std::invalid_argument("target_ratio: kappa must be positive");
    return (2.0 + 3.0 * kappa) / (8.0 + 8.0 * kappa);
}

/// Smallest probable prime in [lo, hi] that is not a prime factor of
/// `exclude`. Absence is a value, not an error.
inline std::optional<BigInt> find_prime_in_range(const BigInt& lo, const BigInt& hi,
                                                 const FactorizationBig& exclude) {
    if (lo > hi) throw std::invalid_argument("find_prime_in_range: lo > hi");
    const auto excluded = [&](const BigInt& p) {
        for (const auto& pp : exclude.factors)
            if (pp.prime == p) return true;
        return false;
    };
    BigInt c = lo < 2 ? BigInt(2) : lo;
    if (c == 2) {
        if (hi >= 2 && !excluded(BigInt(2))) return BigInt(2);
        c = 3;
    } else if ((c & 1u) == 0) {
        ++c;
    }
    for (; c <= hi; c += 2) {
        bool composite = false;
        for (std::uint32_t p : small_primes()) {
            if (p >= 1000) break;
            if (c % p == 0) {
                composite = c != p;
                break;
            }
        }
        if (composite) continue;
        if (!is_probable_prime(c)) continue;
        if (excluded(c)) continue;
        return c;
    }
    return std::nullopt;
}

/// Product of the first k primes, each to exponent one: the smoothest
/// squarefree base available for the construction.
inline FactorizationBig primorial_base(unsigned k) {
    if (k == 0) throw std::invalid_argument("primorial_base: k must be >= 1");
    std::vector<PrimePower<BigInt>> parts;
    parts.reserve(k);
    std::uint32_t limit = 32;
    while (true) {
        const auto primes = sieve_primes(limit);
        if (primes.size() >= k) {
            for (unsigned i = 0; i < k; ++i) parts.push_back({BigInt(primes[i]), 1});
            break;
        }
        limit *= 2;
    }
    return make_factorization(std::move(parts));
}

struct LimitPointOptions {
    BigRat widen_step{1, 20};     // added to epsilon when the interval holds no prime
    unsigned max_widenings = 10;
    std::uint64_t divisor_cap = kDefaultDivisorCap;
};

struct LimitPointExperiment {
    BigInt base_n;
    FactorizationBig base;
    double kappa = 0.0;
    double epsilon_requested = 0.0;
    double epsilon_used = 0.0;   // after widening
    unsigned widenings = 0;
    bool kappa_constraint_ok = true;  // kappa > 2 epsilon
    BigInt search_lo;
    BigInt search_hi;
    BigInt found_prime;
    bool prime_certified = true;
    BigInt big_n;                // found_prime * base_n
    std::uint64_t tau_big_n = 0;
    double s_big_n = 0.0;        // S(N)
    double measured_ratio = 0.0; // S(N) / (tau(N)^2 log N)
    double target = 0.0;         // g(kappa)
    double deviation = 0.0;      // |measured - target|
    double theta_max_base = 0.0;
    // Partition of the divisors of N: divisors of n inside the strict window
    // |log d - (log n)/2| < eps log n (d1), their multiples by p (d2, same
    // size by construction), and the rest (d3).
    std::uint64_t d1_count = 0;
    std::uint64_t d2_count = 0;
    std::uint64_t d3_count = 0;
    // How far the experiment sits from the asymptotic regime: the
    // construction wants log2 tau(N) to dominate 1 / (4 theta_max(n)).
    double log2_tau = 0.0;
    double regime_required_log2_tau = 0.0;
};

namespace detail {

/// ceil(n^(a/b)) and floor(n^(a/b)) through exact integer roots:
/// n^(a/b) = (n^a)^(1/b). Never admits an endpoint outside the true
/// real-exponent interval.
inline BigInt pow_rational_floor(const BigInt& n, const BigRat& e) {
    const BigInt a = boost::multiprecision::numerator(e);
    const BigInt b = boost::multiprecision::denominator(e);
    const std::uint64_t a64 = checked_u64(a, "exponent numerator");
    const std::uint64_t b64 = checked_u64(b, "exponent denominator");
    if (a64 * static_cast<std::uint64_t>(bit_length(n)) > kExactPowerBitGuard)
        throw std::invalid_argument("rational power: exponent too fine for exact evaluation");
    return iroot_floor(ipow(n, a64), static_cast<unsigned>(b64));
}

inline BigInt pow_rational_ceil(const BigInt& n, const BigRat& e) {
    const BigInt a = boost::multiprecision::numerator(e);
    const BigInt b = boost::multiprecision::denominator(e);
    const std::uint64_t a64 = checked_u64(a, "exponent numerator");
    const std::uint64_t b64 = checked_u64(b, "exponent denominator");
    if (a64 * static_cast<std::uint64_t>(bit_length(n)) > kExactPowerBitGuard)
        throw std::invalid_argument("rational power: exponent too fine for exact evaluation");
    const BigInt power = ipow(n, a64);
    const BigInt root = iroot_floor(power, static_cast<unsigned>(b64));
    return ipow(root, static_cast<unsigned>(b64)) == power ? root : root + 1;
}

}  // namespace detail

/// Runs the N = p n construction: finds the smallest prime
/// p in [n^kappa, n^(kappa + eps)] coprime to n (widening eps in steps when
/// the interval holds none), forms N, and measures S(N) / (tau(N)^2 log N)
/// against g(kappa). The kappa > 2 eps constraint is flagged, not enforced.
inline LimitPointExperiment construct_limit_point(const FactorizationBig& base, const BigRat& kappa,
                                                  const BigRat& epsilon,
                                                  const LimitPointOptions& options = {}) {
    if (base.value < 2) throw std::invalid_argument("construct_limit_point: base must be >= 2");
    if (kappa <= 0) throw std::invalid_argument("construct_limit_point: kappa must be positive");
    if (epsilon <= 0) throw std::invalid_argument("construct_limit_point: epsilon must be positive");
    const std::uint64_t tau_base = tau(base);
    if (2 * tau_base > options.divisor_cap)
        throw cap_exceeded("divisor enumeration", options.divisor_cap, 2 * tau_base);

    LimitPointExperiment ex;
    ex.base_n = base.value;
    ex.base = base;
    ex.kappa = to_double(kappa);
    ex.epsilon_requested = to_double(epsilon);
    ex.kappa_constraint_ok = kappa > 2 * epsilon;
    ex.theta_max_base = theta_max(base);
    ex.target = target_ratio(ex.kappa);

    ex.search_lo = detail::pow_rational_ceil(base.value, kappa);
    BigRat eps = epsilon;
    std::optional<BigInt> prime;
    BigInt scan_from = ex.search_lo;
    for (unsigned attempt = 0;; ++attempt) {
        ex.search_hi = detail::pow_rational_floor(base.value, kappa + eps);
        if (scan_from <= ex.search_hi) {
            prime = find_prime_in_range(scan_from, ex.search_hi, base);
            if (prime) break;
            scan_from = ex.search_hi + 1;
        }
        if (attempt >= options.max_widenings) break;
        eps += options.widen_step;
        ex.widenings = attempt + 1;
    }
    if (!prime)
        throw prime_search_exhausted("[" + ex.search_lo.str() + ", " + ex.search_hi.str() +
                                     "] for base " + base.value.str() + " (after " +
                                     std::to_string(ex.widenings) + " widenings)");
    ex.epsilon_used = to_double(eps);
    ex.found_prime = *prime;
    ex.prime_certified = primality_is_certified(*prime);
    ex.big_n = *prime * base.value;

    auto merged = base.factors;
    const auto pos = std::lower_bound(
        merged.begin(), merged.end(), *prime,
        [](const PrimePower<BigInt>& pp, const BigInt& p) { return pp.prime < p; });
    merged.insert(pos, PrimePower<BigInt>{*prime, 1});
    const FactorizationBig big = make_factorization(std::move(merged));

    const DivisorListBig divs = divisors(big, options.divisor_cap);
    ex.tau_big_n = divs.count();
    if (ex.tau_big_n != 2 * tau_base)
        throw invariant_violation(ex.big_n.str(), "tau(N) = 2 tau(n)",
                                  "tau " + std::to_string(ex.tau_big_n));
    ex.s_big_n = s_of_n(divs);
    const double log_n = log_value(ex.big_n);
    const double t2 = static_cast<double>(ex.tau_big_n) * static_cast<double>(ex.tau_big_n);
    ex.measured_ratio = ex.s_big_n / (t2 * log_n);
    ex.deviation = std::abs(ex.measured_ratio - ex.target);
    // The measured ratio inherits the S(N) bounds; a value outside the band
    // means a computation bug, not an unlucky experiment.
    if (!(ex.measured_ratio >= 0.25 * (1 - 1e-9) && ex.measured_ratio <= 0.375 * (1 + 1e-9)))
        throw invariant_violation(ex.big_n.str(), "measured ratio in [1/4, 3/8]",
                                  "ratio " + std::to_string(ex.measured_ratio));

    const DivisorListBig base_divs = divisors(base, options.divisor_cap);
    const WindowCounts window = log_window_counts(base_divs, eps);
    ex.d1_count = window.inside;
    ex.d2_count = window.inside;  // multiplying by p is a bijection
    ex.d3_count = ex.tau_big_n - 2 * window.inside;

    ex.log2_tau = std::log2(static_cast<double>(ex.tau_big_n));
    ex.regime_required_log2_tau = 1.0 / (4.0 * ex.theta_max_base);
    return ex;
}

}  // namespace vandiv
