// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "vandiv/divisors.hpp"

using namespace vandiv;

TEST_CASE("divisors: examples") {
    CHECK(divisors(factor(std::uint64_t{1})).divisors == std::vector<std::uint64_t>{1});
    CHECK(divisors(factor(std::uint64_t{12})).divisors ==
          std::vector<std::uint64_t>{1, 2, 3, 4, 6, 12});
    CHECK(divisors(factor(std::uint64_t{60})).divisors ==
          std::vector<std::uint64_t>{1, 2, 3, 4, 5, 6, 10, 12, 15, 20, 30, 60});
}

TEST_CASE("divisors: structural invariants over a range") {
    for (std::uint64_t n = 1; n <= 3000; ++n) {
        const auto f = factor(n);
        const auto list = divisors(f);
        REQUIRE(list.divisors == oracle::divisors_brute(n));
        REQUIRE(list.count() == tau(f));
        CHECK(list.divisors.front() == 1);
        CHECK(list.divisors.back() == n);
        // closed under d -> n/d
        for (std::uint64_t d : list.divisors) {
            CHECK(n % d == 0);
            CHECK(std::binary_search(list.divisors.begin(), list.divisors.end(), n / d));
        }
    }
}

TEST_CASE("divisors: random larger values stay structurally sound") {
    std::mt19937_64 rng(777);
    for (int i = 0; i < 50; ++i) {
        const std::uint64_t n = rng() % 1'000'000'000ull + 2;
        const auto f = factor(n);
        const auto list = divisors(f);
        CHECK(list.count() == tau(f));
        CHECK(std::is_sorted(list.divisors.begin(), list.divisors.end()));
        CHECK(std::adjacent_find(list.divisors.begin(), list.divisors.end()) ==
              list.divisors.end());
        for (std::uint64_t d : list.divisors) CHECK(n % d == 0);
    }
}

TEST_CASE("divisors: enumeration cap is enforced and named") {
    const auto f = factor(std::uint64_t{12});
    CHECK_THROWS_AS(divisors(f, 4), cap_exceeded);
    CHECK_THROWS_WITH(divisors(f, 4), Catch::Matchers::ContainsSubstring("cap 4"));
}

TEST_CASE("dyadic concentration: examples") {
    const auto conc = [](std::uint64_t n) {
        const auto f = factor(n);
        return dyadic_concentration(divisors(f), f);
    };
    CHECK(conc(5).max_count == 1);
    CHECK(conc(1024).max_count == 2);
    CHECK(conc(1024).witness_x == 1);
    CHECK(conc(12).max_count == 3);
    CHECK(conc(12).witness_x == 2);
    CHECK_THAT(conc(12).normalized.value(),
               Catch::Matchers::WithinRel(1.118033988749895, 1e-12));
    CHECK_FALSE(conc(1).normalized.has_value());
}

TEST_CASE("dyadic concentration: equals brute force over all windows") {
    for (std::uint64_t n = 1; n <= 3000; ++n) {
        const auto f = factor(n);
        const auto list = divisors(f);
        const auto report = dyadic_concentration(list, f);
        CHECK(report.max_count == oracle::dyadic_max_brute(list.divisors));
        CHECK(report.max_count >= 1);
        CHECK(report.max_count <= list.count());
        // the witness window really holds max_count divisors
        std::uint64_t at_witness = 0;
        for (std::uint64_t d : list.divisors)
            if (d >= report.witness_x && d <= 2 * report.witness_x) ++at_witness;
        CHECK(at_witness == report.max_count);
    }
}

TEST_CASE("dyadic concentration: powers of two") {
    std::uint64_t n = 1;
    for (unsigned k = 1; k <= 20; ++k) {
        n *= 2;
        const auto f = factor(n);
        const auto report = dyadic_concentration(divisors(f), f);
        CHECK(report.max_count == 2);
        CHECK_THAT(report.normalized.value(),
                   Catch::Matchers::WithinRel(2.0 * k / (k + 1), 1e-12));
    }
}

TEST_CASE("far divisor count: examples, including the exact boundary") {
    const auto far = [](std::uint64_t n, long num, long den) {
        return far_divisor_count(divisors(factor(n)), BigRat(num, den));
    };
    CHECK(far(7, 2, 5) == 2);    // both divisors of a prime are far at delta = 0.4
    CHECK(far(12, 1, 2) == 2);   // only 1 and 12
    CHECK(far(36, 1, 2) == 2);   // d = 6 sits exactly at the center: distance 0, not >= (1/2) log 36
    CHECK(far(64, 1, 4) == 4);   // {1, 2} and {32, 64}
}

TEST_CASE("far divisor count: preconditions") {
    const auto list12 = divisors(factor(std::uint64_t{12}));
    CHECK_THROWS_AS(far_divisor_count(divisors(factor(std::uint64_t{1})), BigRat(1, 4)),
                    std::domain_error);
    CHECK_THROWS_AS(far_divisor_count(list12, BigRat(0)), std::invalid_argument);
    CHECK_THROWS_AS(far_divisor_count(list12, BigRat(3, 5)), std::invalid_argument);
}

TEST_CASE("far divisor count: matches the per-divisor oracle and pairs up") {
    const std::vector<std::pair<std::uint64_t, std::uint64_t>> deltas = {
        {1, 10}, {1, 4}, {2, 5}, {1, 2}};
    for (std::uint64_t n = 2; n <= 2000; ++n) {
        const auto list = divisors(factor(n));
        for (const auto& [r, s] : deltas) {
            const std::uint64_t got = far_divisor_count(list, BigRat(r, s));
            CHECK(got == oracle::far_count_brute(n, list.divisors, r, s));
            CHECK(got % 2 == 0);  // d qualifies iff n/d qualifies, sqrt(n) never does
        }
        // complement symmetry, divisor by divisor
        for (std::uint64_t d : list.divisors)
            CHECK(oracle::divisor_is_far(n, d, 1, 4) == oracle::divisor_is_far(n, n / d, 1, 4));
    }
}

TEST_CASE("far divisor count: bounded by tau * theta_max / (4 delta^2)") {
    for (std::uint64_t n = 2; n <= 2000; ++n) {
        const auto f = factor(n);
        const auto list = divisors(f);
        const double theta = theta_max(f);
        for (const auto& [r, s] : std::vector<std::pair<double, BigRat>>{
                 {0.1, BigRat(1, 10)}, {0.25, BigRat(1, 4)}, {0.5, BigRat(1, 2)}}) {
            const double bound = static_cast<double>(tau(f)) * theta / (4.0 * r * r);
            CHECK(static_cast<double>(far_divisor_count(list, s)) <= bound * (1 + 1e-9));
        }
    }
}

TEST_CASE("smooth n: window holds at least (1 - eps) tau divisors") {
    // Whenever theta_max <= 4 eps^3, at least (1 - eps) tau(n) divisors sit
    // strictly inside the eps window around (log n)/2.
    std::uint64_t checked = 0;
    for (std::uint64_t n = 2; n <= 20'000; ++n) {
        const auto f = factor(n);
        const double theta = theta_max(f);
        for (const auto& [eps_f, eps] :
             std::vector<std::pair<double, BigRat>>{{0.4, BigRat(2, 5)}, {0.5, BigRat(1, 2)}}) {
            if (theta > 4 * eps_f * eps_f * eps_f) continue;
            const auto list = divisors(f);
            const std::uint64_t inside = list.count() - far_divisor_count(list, eps);
            CHECK(static_cast<double>(inside) >=
                  (1.0 - eps_f) * static_cast<double>(list.count()) * (1 - 1e-9));
            ++checked;
        }
    }
    CHECK(checked > 100);  // the hypothesis is satisfiable at desk scale
}

TEST_CASE("log window counts: strict window complements the far count") {
    for (std::uint64_t n = 2; n <= 500; ++n) {
        const auto list = divisors(factor(n));
        const auto counts = log_window_counts(list, BigRat(1, 4));
        CHECK(counts.far_low + counts.inside + counts.far_high == list.count());
        CHECK(counts.far_low + counts.far_high == far_divisor_count(list, BigRat(1, 4)));
        CHECK(counts.far_low == counts.far_high);
    }
}

TEST_CASE("log window counts: wide windows capture interior divisors") {
    // eps > 1/2: every divisor except the extremes is strictly inside; the
    // extremes have distance exactly (log n)/2 < eps log n, so they are
    // inside too.
    const auto list = divisors(factor(std::uint64_t{2}));
    const auto counts = log_window_counts(list, BigRat(3, 5));
    CHECK(counts.inside == 2);
    CHECK(counts.far_low == 0);
    CHECK(counts.far_high == 0);
    // the window used by the construction on base 6 with eps = 0.3
    const auto base6 = log_window_counts(divisors(factor(std::uint64_t{6})), BigRat(3, 10));
    CHECK(base6.far_low == 1);   // d = 1
    CHECK(base6.inside == 2);    // d = 2, 3
    CHECK(base6.far_high == 1);  // d = 6
}
