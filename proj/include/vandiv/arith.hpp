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
#include <numeric>
#include <stdexcept>
#include <vector>

#include "vandiv/numeric.hpp"

namespace vandiv {

template <class Int>
struct PrimePower {
    Int prime;
    unsigned exponent = 1;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Canonical prime-power decomposition: primes strictly increasing, every
/// exponent >= 1, product of prime^exponent equal to value. value == 1 holds
/// exactly when the factor list is empty.
template <class Int>
struct Factorization {
    Int value{1};
    std::vector<PrimePower<Int>> factors;
};

using Factorization64 = Factorization<std::uint64_t>;
using FactorizationBig = Factorization<BigInt>;

/// Simple sieve of Eratosthenes; returns all primes <= limit.
inline std::vector<std::uint32_t> sieve_primes(std::uint32_t limit) {
    std::vector<std::uint32_t> primes;
    if (limit < 2) return primes;
    std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
    for (std::uint64_t p = 2; p <= limit; ++p) {
        if (composite[p]) continue;
        primes.push_back(static_cast<std::uint32_t>(p));
        for (std::uint64_t m = p * p; m <= limit; m += p) composite[m] = true;
    }
    return primes;
}

inline const std::vector<std::uint32_t>& small_primes() {
    static const std::vector<std::uint32_t> table = sieve_primes(10'000);
    return table;
}

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<__uint128_t>(a) * b % m);
}

inline std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t result = 1;
    base %= m;
    while (exp != 0) {
        if (exp & 1u) result = mulmod_u64(result, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return result;
}

/// One strong-pseudoprime round for witness a (a already reduced, 1 < a < n).
inline bool strong_probable_prime_u64(std::uint64_t n, std::uint64_t a, std::uint64_t d, int s) {
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mulmod_u64(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

// Witness schedule for the strong probable-prime test. The first twelve
// prime bases decide primality correctly for all n < 3317044064679887385961981
// (> 2^64), so every machine-range answer is exact. Larger inputs run the
// full 24-base schedule; callers can label those results "probable".
inline constexpr std::uint64_t kWitnesses[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                                               41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};

inline const BigInt& deterministic_mr_bound() {
    static const BigInt bound("3317044064679887385961981");
    return bound;
}

}  // namespace detail

/// Deterministic primality for 64-bit inputs (strong test, 12 fixed bases).
inline bool is_probable_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1u) == 0) {
        d >>= 1;
        ++s;
    }
    for (int i = 0; i < 12; ++i)
        if (!detail::strong_probable_prime_u64(n, detail::kWitnesses[i], d, s)) return false;
    return true;
}

/// Strong probable-prime test with the fixed 24-base witness schedule.
/// Output is deterministic; it is provably correct below
/// 3317044064679887385961981 and a (very strong) probable-prime verdict above.
inline bool is_probable_prime(const BigInt& n) {
    if (n < 2) return false;
    if (n <= std::numeric_limits<std::uint64_t>::max())
        return is_probable_prime(n.convert_to<std::uint64_t>());
    for (std::uint64_t p : detail::kWitnesses) {
        if (n % p == 0) return false;  // n > 89^2 here, so divisibility means composite
    }
    BigInt d = n - 1;
    int s = 0;
    while ((d & 1u) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : detail::kWitnesses) {
        BigInt x = boost::multiprecision::powm(BigInt(a), d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = x * x % n;
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

/// True when the fixed witness schedule proves primality outright rather
/// than giving a probable-prime verdict.
inline bool primality_is_certified(const BigInt& n) { return n < detail::deterministic_mr_bound(); }

namespace detail {

/// Pollard rho, Brent variant, for odd composite n with no factor <= 10^4.
/// The polynomial offset c advances deterministically until a split is found.
inline std::uint64_t pollard_brent_u64(std::uint64_t n) {
    for (std::uint64_t c = 1;; ++c) {
        std::uint64_t x = 2, y = 2, d = 1;
        std::uint64_t q = 1;
        std::uint64_t xs = 0;
        const auto step = [&](std::uint64_t v) { return (mulmod_u64(v, v, n) + c) % n; };
        for (std::uint64_t r = 1; d == 1; r <<= 1) {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i) y = step(y);
            for (std::uint64_t k = 0; k < r && d == 1; k += 128) {
                xs = y;
                const std::uint64_t chunk = std::min<std::uint64_t>(128, r - k);
                for (std::uint64_t i = 0; i < chunk; ++i) {
                    y = step(y);
                    q = mulmod_u64(q, x > y ? x - y : y - x, n);
                }
                d = std::gcd(q, n);
            }
        }
        if (d == n) {
            // Batch gcd overshot; redo the last chunk one step at a time.
            d = 1;
            std::uint64_t v = xs;
            while (d == 1) {
                v = step(v);
                d = std::gcd(x > v ? x - v : v - x, n);
            }
        }
        if (d != n) return d;
    }
}

inline void collect_prime_factors_u64(std::uint64_t n, std::vector<std::uint64_t>& out) {
    if (n == 1) return;
    if (is_probable_prime(n)) {
        out.push_back(n);
        return;
    }
    const std::uint64_t d = pollard_brent_u64(n);
    collect_prime_factors_u64(d, out);
    collect_prime_factors_u64(n / d, out);
}

}  // namespace detail

/// Canonical factorization of a 64-bit integer: trial division by the small
/// prime table, then rho splitting for whatever is left. Deterministic.
inline Factorization64 factor(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("factor: 0 has no canonical factorization");
    Factorization64 result;
    result.value = n;
    std::uint64_t m = n;
    for (std::uint32_t p : small_primes()) {
        if (static_cast<std::uint64_t>(p) * p > m) break;
        if (m % p != 0) continue;
        unsigned e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        result.factors.push_back({p, e});
    }
    if (m > 1) {
        std::vector<std::uint64_t> rest;
        detail::collect_prime_factors_u64(m, rest);
        std::sort(rest.begin(), rest.end());
        for (std::size_t i = 0; i < rest.size();) {
            std::size_t j = i;
            while (j < rest.size() && rest[j] == rest[i]) ++j;
            result.factors.push_back({rest[i], static_cast<unsigned>(j - i)});
            i = j;
        }
    }
    return result;
}

/// Arbitrary-precision front end. Trial division by the small prime table,
/// then: prime cofactor, perfect-power cofactor, or a 64-bit cofactor handed
/// to the machine-range path. Cofactors beyond those shapes are refused
/// rather than mis-factored.
inline FactorizationBig factor(const BigInt& n) {
    if (n.is_zero()) throw std::invalid_argument("factor: 0 has no canonical factorization");
    if (n < 0) throw std::invalid_argument("factor: argument must be positive");
    if (n <= std::numeric_limits<std::uint64_t>::max()) {
        const Factorization64 f64 = factor(n.convert_to<std::uint64_t>());
        FactorizationBig result;
        result.value = n;
        result.factors.reserve(f64.factors.size());
        for (const auto& pp : f64.factors) result.factors.push_back({BigInt(pp.prime), pp.exponent});
        return result;
    }

    FactorizationBig result;
    result.value = n;
    BigInt m = n;
    for (std::uint32_t p : small_primes()) {
        if (m % p != 0) continue;
        unsigned e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        result.factors.push_back({BigInt(p), e});
    }
    if (m > 1) {
        std::vector<PrimePower<BigInt>> rest;
        const auto push_merged = [&](const BigInt& p, unsigned e) {
            for (auto& pp : rest)
                if (pp.prime == p) {
                    pp.exponent += e;
                    return;
                }
            rest.push_back({p, e});
        };
        if (is_probable_prime(m)) {
            push_merged(m, 1);
        } else if (m <= std::numeric_limits<std::uint64_t>::max()) {
            std::vector<std::uint64_t> primes;
            detail::collect_prime_factors_u64(m.convert_to<std::uint64_t>(), primes);
            for (std::uint64_t p : primes) push_merged(BigInt(p), 1);
        } else {
            // Perfect power of a tractable base is the one big-cofactor shape
            // that still shows up in practice.
            bool split = false;
            for (unsigned k = 2; !split && (BigInt(1) << (bit_length(m) / k)) >= 2; ++k) {
                const BigInt r = iroot_floor(m, k);
                if (r < 2) break;
                if (ipow(r, k) != m) continue;
                const FactorizationBig sub = factor(r);
                for (const auto& pp : sub.factors) push_merged(pp.prime, pp.exponent * k);
                split = true;
            }
            if (!split)
                throw std::runtime_error(
                    "factor: cofactor " + m.str() + " is too large to factor (not prime, "
                    "not a perfect power, beyond 64 bits)");
        }
        std::sort(rest.begin(), rest.end(),
                  [](const auto& a, const auto& b) { return a.prime < b.prime; });
        result.factors.insert(result.factors.end(), rest.begin(), rest.end());
    }
    return result;
}

/// Builds a Factorization from an explicit (prime, exponent) list, checking
/// the structural invariants and computing the value. Does not test
/// primality of the entries; callers own that.
template <class Int>
Factorization<Int> make_factorization(std::vector<PrimePower<Int>> factors) {
    Factorization<Int> f;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (factors[i].prime < 2) throw std::invalid_argument("make_factorization: prime < 2");
        if (factors[i].exponent == 0) throw std::invalid_argument("make_factorization: exponent 0");
        if (i > 0 && !(factors[i - 1].prime < factors[i].prime))
            throw std::invalid_argument("make_factorization: primes not strictly increasing");
        for (unsigned e = 0; e < factors[i].exponent; ++e) f.value *= factors[i].prime;
    }
    f.factors = std::move(factors);
    return f;
}

/// Number of divisors: product of (exponent + 1).
template <class Int>
std::uint64_t tau(const Factorization<Int>& f) {
    std::uint64_t t = 1;
    for (const auto& pp : f.factors) {
        const std::uint64_t next = t * (pp.exponent + 1ull);
        if (next / (pp.exponent + 1ull) != t) throw std::overflow_error("tau overflows 64 bits");
        t = next;
    }
    return t;
}

/// Sum of squared exponents.
template <class Int>
std::uint64_t omega2(const Factorization<Int>& f) {
    std::uint64_t s = 0;
    for (const auto& pp : f.factors) s += static_cast<std::uint64_t>(pp.exponent) * pp.exponent;
    return s;
}

/// Largest share log(p^a) / log n over the prime-power parts of n.
/// Exactly 1.0 for prime powers; rejects n = 1 (log n = 0).
template <class Int>
double theta_max(const Factorization<Int>& f) {
    if (f.value == 1) throw std::domain_error("theta_max: undefined for n = 1");
    if (f.factors.size() == 1) return 1.0;
    const double log_n = log_value(f.value);
    double best = 0.0;
    for (const auto& pp : f.factors)
        best = std::max(best, pp.exponent * log_value(pp.prime) / log_n);
    return best;
}

}  // namespace vandiv
