// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "vandiv/vandermonde.hpp"

using namespace vandiv;

namespace {

DivisorList64 divs_of(std::uint64_t n) { return divisors(factor(n)); }

}  // namespace

TEST_CASE("exact_v: examples") {
    CHECK(exact_v(divs_of(1)) == 1);
    CHECK(exact_v(divs_of(4)) == 6);
    CHECK(exact_v(divs_of(6)) == 120);
    CHECK(exact_v(divs_of(12)) == 68428800);
}

TEST_CASE("exact_v: cap refusal names the cap") {
    CHECK_THROWS_AS(exact_v(divs_of(360), 8), cap_exceeded);
    CHECK_THROWS_WITH(exact_v(divs_of(360), 8), Catch::Matchers::ContainsSubstring("cap 8"));
}

TEST_CASE("log_v: examples") {
    CHECK(log_v(divs_of(1)) == 0.0);
    CHECK_THAT(log_v(divs_of(13)), Catch::Matchers::WithinRel(std::log(12.0), 1e-12));
    CHECK_THAT(log_v(divs_of(6)), Catch::Matchers::WithinRel(std::log(120.0), 1e-12));
    CHECK_THAT(log_v(divs_of(12)), Catch::Matchers::WithinRel(18.041304346606573, 1e-12));
}

TEST_CASE("log_v agrees with the log of exact V") {
    for (std::uint64_t n = 1; n <= 2000; ++n) {
        const auto list = divs_of(n);
        const double lv = log_v(list);
        const double from_exact = n == 1 ? 0.0 : log_value(exact_v(list));
        CHECK(std::abs(lv - from_exact) <= 1e-9 * std::max(1.0, std::abs(lv)));
    }
}

TEST_CASE("s and s_star: examples") {
    CHECK(s_of_n(divs_of(1)) == 0.0);
    CHECK(s_star(divs_of(1)) == 0.0);
    CHECK_THAT(s_of_n(divs_of(13)), Catch::Matchers::WithinRel(std::log(13.0), 1e-12));
    CHECK(s_star(divs_of(13)) == 0.0);
    CHECK_THAT(s_of_n(divs_of(6)), Catch::Matchers::WithinRel(8.26565016558033, 1e-12));
    CHECK_THAT(s_star(divs_of(6)), Catch::Matchers::WithinRel(2.4849066497880004, 1e-12));
}

TEST_CASE("s and s_star match direct evaluation") {
    for (std::uint64_t n = 1; n <= 2000; ++n) {
        const auto list = divs_of(n);
        CHECK_THAT(s_of_n(list), Catch::Matchers::WithinAbs(oracle::s_direct(list.divisors), 1e-9));
        CHECK_THAT(s_star(list),
                   Catch::Matchers::WithinAbs(oracle::s_star_direct(list.divisors), 1e-9));
    }
}

TEST_CASE("pair identity: S + S* = (tau - 1)(tau / 2) log n") {
    for (std::uint64_t n = 1; n <= 100'000; ++n) {
        const auto f = factor(n);
        const auto list = divisors(f);
        const double lhs = s_of_n(list) + s_star(list);
        const double t = static_cast<double>(list.count());
        const double rhs = n >= 2 ? (t - 1.0) * (t / 2.0) * log_value(n) : 0.0;
        if (std::abs(lhs - rhs) > 1e-9 * std::max(1.0, std::abs(rhs))) {
            CAPTURE(n, lhs, rhs);
            FAIL("pair identity violated");
        }
    }
}

TEST_CASE("bounds and residual over a range") {
    for (std::uint64_t n = 2; n <= 20'000; ++n) {
        const auto list = divs_of(n);
        const double t2 = static_cast<double>(list.count()) * static_cast<double>(list.count());
        const double log_n = log_value(n);
        const double s = s_of_n(list);
        const double lv = log_v(list);
        const double lower = t2 / 4.0 * log_n;
        const double upper = 3.0 * t2 / 8.0 * log_n;
        if (!(s >= lower - 1e-9 * lower && s <= upper + 1e-9 * upper)) {
            CAPTURE(n, s, lower, upper);
            FAIL("S(n) out of bounds");
        }
        if (!(lv <= upper + 1e-9 * upper)) {
            CAPTURE(n, lv, upper);
            FAIL("log V(n) above the upper bound");
        }
        if (!(s - lv >= -1e-9 * std::max(1.0, s))) {
            CAPTURE(n, s, lv);
            FAIL("residual negative");
        }
    }
}

TEST_CASE("report: prime attains the lower bound exactly") {
    const auto rep = report(std::uint64_t{2});
    CHECK(rep.s_ratio.value() == 0.25);
    CHECK(rep.tau == 2);
    CHECK(rep.log_v == 0.0);  // single pair, difference 1
    CHECK_THAT(rep.residual, Catch::Matchers::WithinRel(std::log(2.0), 1e-12));
}

TEST_CASE("report: n = 12 values") {
    const auto rep = report(std::uint64_t{12}, /*want_exact=*/true);
    CHECK(rep.tau == 6);
    CHECK(rep.omega2 == 5);
    CHECK_FALSE(rep.is_square);
    CHECK_THAT(rep.log_v, Catch::Matchers::WithinRel(18.041304346606573, 1e-12));
    CHECK_THAT(rep.s, Catch::Matchers::WithinRel(26.640825967108057, 1e-12));
    CHECK_THAT(rep.s_star, Catch::Matchers::WithinRel(10.632773779711947, 1e-12));
    CHECK_THAT(rep.residual, Catch::Matchers::WithinRel(8.599521620501484, 1e-9));
    CHECK(rep.exact_v.value() == 68428800);
    // upper bound 3 tau^2/8 log 12 = 33.5462...; the ratio stays below 1
    CHECK(rep.upper_ratio.value() < 1.0);
    CHECK_THAT(rep.s_ratio.value(), Catch::Matchers::WithinRel(0.2978071403985797, 1e-12));
    CHECK_THAT(rep.normalized_residual.value(),
               Catch::Matchers::WithinRel(0.1131423325073711, 1e-9));
}

TEST_CASE("report: n = 1 degenerate") {
    const auto rep = report(std::uint64_t{1});
    CHECK(rep.tau == 1);
    CHECK(rep.omega2 == 0);
    CHECK(rep.is_square);
    CHECK(rep.log_v == 0.0);
    CHECK(rep.s == 0.0);
    CHECK(rep.residual == 0.0);
    CHECK_FALSE(rep.lower_ratio.has_value());
    CHECK_FALSE(rep.upper_ratio.has_value());
    CHECK_FALSE(rep.s_ratio.has_value());
    CHECK_FALSE(rep.normalized_residual.has_value());
}

TEST_CASE("report: exact cap turns into an absent exact_v, not a failure") {
    const auto rep = report(std::uint64_t{360}, /*want_exact=*/true, /*exact_cap=*/8);
    CHECK_FALSE(rep.exact_v.has_value());
    CHECK(rep.tau == 24);
}

TEST_CASE("report: big-integer path matches the 64-bit path") {
    const auto small = report(std::uint64_t{5040}, true);
    const auto big = report(BigInt(5040), true);
    CHECK(big.tau == small.tau);
    CHECK(big.omega2 == small.omega2);
    CHECK(big.exact_v.value() == small.exact_v.value());
    CHECK_THAT(big.log_v, Catch::Matchers::WithinRel(small.log_v, 1e-12));
    CHECK_THAT(big.s, Catch::Matchers::WithinRel(small.s, 1e-12));
    CHECK_THAT(big.s_ratio.value(), Catch::Matchers::WithinRel(small.s_ratio.value(), 1e-12));
}
