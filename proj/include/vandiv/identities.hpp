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

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "vandiv/arith.hpp"
#include "vandiv/divisors.hpp"
#include "vandiv/errors.hpp"
#include "vandiv/kahan.hpp"
#include "vandiv/numeric.hpp"

namespace vandiv {

inline constexpr std::uint64_t kDefaultEq1BitCap = 1u << 20;

/// Symmetric quadratic form in one formal variable x_p per distinct prime
/// factor, with exact rational coefficients. Evaluating at x_p = log p
/// recovers the analytic quantity the form encodes.
struct QuadraticForm {
    std::vector<BigInt> variables;             // the primes, ascending
    std::vector<std::vector<BigRat>> coeff;    // symmetric, coeff[i][j] multiplies x_i x_j

    friend bool operator==(const QuadraticForm&, const QuadraticForm&) = default;

    QuadraticForm scaled(const BigRat& factor) const {
        QuadraticForm out = *this;
        for (auto& row : out.coeff)
            for (auto& c : row) c *= factor;
        return out;
    }

    /// Value at x_p = log p.
    double evaluate_at_logs() const {
        std::vector<double> logs(variables.size());
        for (std::size_t i = 0; i < variables.size(); ++i) logs[i] = log_value(variables[i]);
        double total = 0.0;
        for (std::size_t i = 0; i < variables.size(); ++i)
            for (std::size_t j = 0; j < variables.size(); ++j)
                total += to_double(coeff[i][j]) * logs[i] * logs[j];
        return total;
    }
};

namespace detail {

/// Walks the divisor exponent vectors of f in lexicographic order (rightmost
/// coordinate fastest) and hands each vector to the visitor.
template <class Int, class Visitor>
void for_each_exponent_vector(const Factorization<Int>& f, Visitor&& visit) {
    const std::size_t dim = f.factors.size();
    std::vector<unsigned> a(dim, 0);
    while (true) {
        visit(a);
        std::size_t i = dim;
        while (i > 0) {
            --i;
            if (a[i] < f.factors[i].exponent) {
                ++a[i];
                std::fill(a.begin() + i + 1, a.end(), 0u);
                break;
            }
            if (i == 0) return;
        }
        if (dim == 0) return;
    }
}

/// Gram matrix sum of v v^T over the divisor exponent vectors, where
/// v = weight(a). Accumulates in int64; the caller guarantees
/// tau * max|v_i v_j| fits (checked).
template <class Int, class Weight>
std::vector<std::vector<long long>> exponent_gram(const Factorization<Int>& f, Weight&& weight) {
    const std::size_t dim = f.factors.size();
    std::vector<std::vector<long long>> gram(dim, std::vector<long long>(dim, 0));
    std::vector<long long> v(dim);
    for_each_exponent_vector(f, [&](const std::vector<unsigned>& a) {
        for (std::size_t i = 0; i < dim; ++i) v[i] = weight(a[i], f.factors[i].exponent);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = i; j < dim; ++j) gram[i][j] += v[i] * v[j];
    });
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < i; ++j) gram[i][j] = gram[j][i];
    return gram;
}

template <class Int>
void require_n_at_least_2(const Factorization<Int>& f, const char* who) {
    if (f.value < 2) throw std::domain_error(std::string(who) + ": requires n >= 2");
}

template <class Int>
void guard_gram_overflow(const Factorization<Int>& f) {
    const std::uint64_t t = tau(f);
    std::uint64_t max_exp = 1;
    for (const auto& pp : f.factors) max_exp = std::max<std::uint64_t>(max_exp, pp.exponent);
    // Largest accumulated entry is tau * (2 max_exp)^2 in magnitude.
    if (t > (1ull << 40) / (4 * max_exp * max_exp + 1))
        throw std::invalid_argument("quadratic form expansion too large for exact accumulation");
}

template <class Int>
std::vector<BigInt> form_variables(const Factorization<Int>& f) {
    std::vector<BigInt> vars;
    vars.reserve(f.factors.size());
    for (const auto& pp : f.factors) vars.push_back(BigInt(pp.prime));
    return vars;
}

}  // namespace detail

/// Expansion route for the centered second moment of the divisor logs:
/// sum over d | n of (log d - (log n)/2)^2 as a quadratic form in x_p.
/// Each divisor contributes (sum_p (a_p - alpha_p/2) x_p)^2; the half-integer
/// weights are doubled for integer accumulation and the Gram matrix is
/// divided by 4 at the end.
template <class Int>
QuadraticForm centered_moment_expansion_form(const Factorization<Int>& f) {
    detail::require_n_at_least_2(f, "centered moment expansion");
    detail::guard_gram_overflow(f);
    const auto gram = detail::exponent_gram(
        f, [](unsigned a, unsigned alpha) { return 2ll * a - static_cast<long long>(alpha); });
    QuadraticForm form;
    form.variables = detail::form_variables(f);
    const std::size_t dim = form.variables.size();
    form.coeff.assign(dim, std::vector<BigRat>(dim));
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) form.coeff[i][j] = BigRat(gram[i][j], 4);
    return form;
}

/// Closed-form route for the same quantity: the diagonal form with entry
/// tau(n) * alpha (alpha + 2) / 12 at (p, p), equal to
/// tau(n) (log p^alpha)^2 (alpha + 2) / (12 alpha) once evaluated.
template <class Int>
QuadraticForm centered_moment_diagonal_form(const Factorization<Int>& f) {
    detail::require_n_at_least_2(f, "prime-power diagonal form");
    const std::uint64_t t = tau(f);
    QuadraticForm form;
    form.variables = detail::form_variables(f);
    const std::size_t dim = form.variables.size();
    form.coeff.assign(dim, std::vector<BigRat>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
        const std::uint64_t alpha = f.factors[i].exponent;
        form.coeff[i][i] = BigRat(BigInt(t) * alpha * (alpha + 2), 12);
    }
    return form;
}

/// Coefficient-wise exact equality of the two routes (both sides divided by
/// tau(n) first to keep the rationals small), plus a floating cross-check of
/// the evaluations at x_p = log p.
template <class Int>
bool verify_centered_moment(const Factorization<Int>& f, double float_tol = 1e-9) {
    const QuadraticForm lhs = centered_moment_expansion_form(f);
    const QuadraticForm rhs = centered_moment_diagonal_form(f);
    const BigRat inv_tau(1, BigInt(tau(f)));
    if (lhs.scaled(inv_tau) != rhs.scaled(inv_tau)) return false;
    const double a = lhs.evaluate_at_logs();
    const double b = rhs.evaluate_at_logs();
    return std::abs(a - b) <= float_tol * std::max(1.0, std::abs(a));
}

/// The expanded raw second moment: sum over d | n of (log d)^2 equals the
/// diagonal prime-power form plus the rank-one square
/// tau(n) (sum_p (alpha_p/2) x_p)^2. Verified as an exact form equality with
/// a floating cross-check.
template <class Int>
bool verify_second_moment(const Factorization<Int>& f, double float_tol = 1e-9) {
    detail::require_n_at_least_2(f, "second moment identity");
    detail::guard_gram_overflow(f);
    const auto gram =
        detail::exponent_gram(f, [](unsigned a, unsigned) { return static_cast<long long>(a); });
    QuadraticForm lhs;
    lhs.variables = detail::form_variables(f);
    const std::size_t dim = lhs.variables.size();
    lhs.coeff.assign(dim, std::vector<BigRat>(dim));
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) lhs.coeff[i][j] = BigRat(gram[i][j]);

    QuadraticForm rhs = centered_moment_diagonal_form(f);
    const BigInt t(tau(f));
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            const BigInt ai(f.factors[i].exponent);
            const BigInt aj(f.factors[j].exponent);
            rhs.coeff[i][j] += BigRat(t * ai * aj, 4);
        }

    const BigRat inv_tau(1, t);
    if (lhs.scaled(inv_tau) != rhs.scaled(inv_tau)) return false;
    const double a = lhs.evaluate_at_logs();
    const double b = rhs.evaluate_at_logs();
    return std::abs(a - b) <= float_tol * std::max(1.0, std::abs(a));
}

/// Exact form of the divisor product identity:
/// (prod over d | n of d)^2 == n^tau(n), checked in big integers. Refuses
/// when n^tau would exceed bit_cap bits; callers fall back to the floating
/// variant below.
template <class Int>
bool check_divisor_product_identity(const DivisorList<Int>& list,
                                    std::uint64_t bit_cap = kDefaultEq1BitCap) {
    const BigInt n = BigInt(list.n);
    const std::uint64_t bits_needed =
        static_cast<std::uint64_t>(bit_length(n)) * list.count();
    if (bits_needed > bit_cap) throw cap_exceeded("divisor product identity bit-size", bit_cap, bits_needed);
    BigInt product = 1;
    for (const auto& d : list.divisors) product *= BigInt(d);
    return product * product == ipow(n, list.count());
}

/// Floating fallback: |sum log d - (tau/2) log n| <= tol * scale.
template <class Int>
bool check_divisor_product_identity_float(const DivisorList<Int>& list, double tol = 1e-9) {
    KahanAccumulator acc;
    for (const auto& d : list.divisors) acc.add(log_value(d));
    const double rhs = list.n >= 2
                           ? static_cast<double>(list.count()) / 2.0 * log_value(list.n)
                           : 0.0;
    return std::abs(acc.value() - rhs) <= tol * std::max(1.0, std::abs(rhs));
}

}  // namespace vandiv
