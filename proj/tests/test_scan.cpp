// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "vandiv/scan.hpp"

using namespace vandiv;

namespace {

std::string scan_to_string(std::uint64_t from, std::uint64_t to, unsigned threads,
                           OutputFormat format = OutputFormat::csv) {
    ScanOptions options;
    options.from = from;
    options.to = to;
    options.threads = threads;
    options.config.output_format = format;
    std::string out;
    scan_range(options, [&](const ScanRecord& r) {
        out += format == OutputFormat::csv ? to_csv(r) : to_jsonl(r);
        out += '\n';
    });
    return out;
}

}  // namespace

TEST_CASE("csv header matches the published schema") {
    CHECK(std::string(kCsvHeader) ==
          "n,tau,omega2,is_square,log_v,s,s_star,residual,normalized_residual,lower_ratio,"
          "upper_ratio,s_ratio,conc_max,conc_normalized,theta_max");
}

TEST_CASE("format_double: 12 significant digits, shortest form") {
    CHECK(format_double(0.1234567890123456) == "0.123456789012");
    CHECK(format_double(2.0) == "2");
    CHECK(format_double(0.25) == "0.25");
    CHECK(format_double(18.041304346606573) == "18.0413043466");
}

TEST_CASE("compute_scan_record: n = 2") {
    const FactorContext context(10, false);
    const ScanRecord r = compute_scan_record(2, context, Config{});
    CHECK(r.n == 2);
    CHECK(r.tau == 2);
    CHECK(r.omega2 == 1);
    CHECK_FALSE(r.is_square);
    CHECK(r.log_v == 0.0);
    CHECK(r.s_ratio == 0.25);
    CHECK(r.lower_ratio == 0.0);
    CHECK(r.conc_max == 2);
    CHECK(r.theta_max == 1.0);
}

TEST_CASE("scan records: csv row shape") {
    const FactorContext context(20, false);
    const ScanRecord r = compute_scan_record(12, context, Config{});
    const std::string row = to_csv(r);
    CHECK(std::count(row.begin(), row.end(), ',') == 14);  // 15 fields
    CHECK(row.substr(0, 9) == "12,6,5,0,");
    const std::string json = to_jsonl(r);
    CHECK(json.find("\"n\":12") != std::string::npos);
    CHECK(json.find("\"is_square\":false") != std::string::npos);
    CHECK(json.find("\"s_ratio\":0.29780714") != std::string::npos);
}

TEST_CASE("scan: byte-identical across thread counts") {
    const std::string one = scan_to_string(2, 2000, 1);
    const std::string three = scan_to_string(2, 2000, 3);
    const std::string eight = scan_to_string(2, 2000, 8);
    CHECK(one == three);
    CHECK(one == eight);
    CHECK(std::count(one.begin(), one.end(), '\n') == 1999);
}

TEST_CASE("scan: jsonl mode carries the same field names") {
    const std::string out = scan_to_string(2, 5, 2, OutputFormat::jsonl);
    CHECK(out.find("\"lower_ratio\":") != std::string::npos);
    CHECK(out.find("\"conc_normalized\":") != std::string::npos);
}

TEST_CASE("scan: records arrive in ascending order with correct summary") {
    ScanOptions options;
    options.from = 2;
    options.to = 3000;
    options.threads = 4;
    std::vector<ScanRecord> records;
    const ScanSummary summary = scan_range(options, [&](const ScanRecord& r) {
        records.push_back(r);
    });
    REQUIRE(records.size() == 2999);
    for (std::size_t i = 0; i < records.size(); ++i) REQUIRE(records[i].n == i + 2);

    ScanSummary expected;
    for (const auto& r : records) expected.absorb(r);
    CHECK(summary.records == expected.records);
    CHECK(summary.max_conc_normalized == expected.max_conc_normalized);
    CHECK(summary.argmax_conc_normalized == expected.argmax_conc_normalized);
    CHECK(summary.min_lower_ratio == expected.min_lower_ratio);
    CHECK(summary.argmin_lower_ratio == expected.argmin_lower_ratio);
    CHECK(summary.max_s_ratio == expected.max_s_ratio);
    CHECK(summary.argmax_s_ratio == expected.argmax_s_ratio);
    CHECK(summary.max_normalized_residual == expected.max_normalized_residual);
    // n = 2 attains the smallest possible lower_ratio (log V = 0)
    CHECK(summary.min_lower_ratio == 0.0);
    CHECK(summary.argmin_lower_ratio == 2);
}

TEST_CASE("scan: spf sieve path produces identical output") {
    ScanOptions plain;
    plain.from = 2;
    plain.to = 4000;
    plain.threads = 2;
    ScanOptions sieved = plain;
    sieved.use_spf_sieve = true;
    std::string a, b;
    scan_range(plain, [&](const ScanRecord& r) { a += to_csv(r); a += '\n'; });
    scan_range(sieved, [&](const ScanRecord& r) { b += to_csv(r); b += '\n'; });
    CHECK(a == b);
}

TEST_CASE("scan: rejects bad ranges") {
    ScanOptions options;
    options.from = 5;
    options.to = 4;
    CHECK_THROWS_AS(scan_range(options, [](const ScanRecord&) {}), std::invalid_argument);
    options.from = 1;
    options.to = 4;
    CHECK_THROWS_AS(scan_range(options, [](const ScanRecord&) {}), std::invalid_argument);
}

TEST_CASE("scan: a violated record-only floor aborts naming n") {
    ScanOptions options;
    options.from = 2;
    options.to = 100;
    options.config.lower_ratio_floor = 0.9;  // n = 2 has lower_ratio 0
    try {
        scan_range(options, [](const ScanRecord&) {});
        FAIL("expected invariant_violation");
    } catch (const invariant_violation& e) {
        CHECK(e.n_text() == "2");
        CHECK(std::string(e.what()).find("n = 2") != std::string::npos);
    }
}

TEST_CASE("config: file parsing, env override, validation") {
    const std::string path = "vandiv_test_config.tmp";
    {
        std::ofstream out(path);
        out << "# comment line\n";
        out << "exact_cap = 512\n";
        out << "float_tol = 1e-10   # trailing comment\n";
        out << "output_format = jsonl\n";
        out << "thread_count = 3\n";
        out << "eq1_bitsize_cap = 4096\n";
        out << "divisor_cap = 1000\n";
        out << "lower_ratio_floor = 0\n";
    }
    const Config config = load_config_file(path);
    CHECK(config.exact_cap == 512);
    CHECK(config.float_tol == 1e-10);
    CHECK(config.output_format == OutputFormat::jsonl);
    CHECK(config.thread_count == 3);
    CHECK(config.eq1_bitsize_cap == 4096);
    CHECK(config.divisor_cap == 1000);
    std::remove(path.c_str());

    {
        std::ofstream out(path);
        out << "unknown_key = 7\n";
    }
    CHECK_THROWS_AS(load_config_file(path), std::invalid_argument);
    {
        std::ofstream out(path);
        out << "float_tol = 0.5\n";  // outside (0, 1e-3]
    }
    CHECK_THROWS_AS(load_config_file(path), std::invalid_argument);
    std::remove(path.c_str());

    Config env_config;
    ::setenv("VANDIV_THREADS", "7", 1);
    apply_env(env_config);
    CHECK(env_config.thread_count == 7);
    ::unsetenv("VANDIV_THREADS");
}
