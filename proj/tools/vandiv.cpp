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

// vandiv: divisor statistics of the Vandermonde determinant built on the
// divisors of n, with exact identity verification, a parallel range
// scanner, and the prime-times-base limit-point construction.
//
// Exit codes: 0 ok, 1 invariant/verify failure, 2 usage, 3 cap refusal,
// 4 I/O error, 5 prime search exhausted.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vandiv/vandiv.hpp"

namespace {

using namespace vandiv;

class usage_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class io_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

BigInt parse_big_uint(const std::string& text) {
    if (text.empty()) throw usage_error("malformed integer: ''");
    for (char c : text)
        if (c < '0' || c > '9') throw usage_error("malformed integer: '" + text + "'");
    return BigInt(text);
}

BigRat parse_positive_rational(const std::string& text, const char* what) {
    BigRat value;
    try {
        value = parse_rational(text);
    } catch (const std::invalid_argument& e) {
        throw usage_error(std::string(what) + ": " + e.what());
    }
    if (value <= 0) throw usage_error(std::string(what) + " must be positive, got " + text);
    return value;
}

struct CommonFlags {
    std::string config_path;
    unsigned threads = 0;
    std::string format;
    double tol = 0.0;
    std::uint64_t exact_cap = 0;
    std::uint64_t divisor_cap = 0;
    std::uint64_t eq1_bitcap = 0;
    double lower_floor = -1.0;

    bool has_threads = false, has_format = false, has_tol = false, has_exact_cap = false,
         has_divisor_cap = false, has_eq1_bitcap = false, has_lower_floor = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "key = value config file");
        cmd->add_option("--threads", threads, "worker threads (0 = hardware)")
            ->each([this](const std::string&) { has_threads = true; });
        cmd->add_option("--format", format, "machine output format: csv or jsonl")
            ->check(CLI::IsMember({"csv", "jsonl"}))
            ->each([this](const std::string&) { has_format = true; });
        cmd->add_option("--tol", tol, "relative float tolerance")
            ->each([this](const std::string&) { has_tol = true; });
        cmd->add_option("--exact-cap", exact_cap, "divisor-count cap for exact V(n)")
            ->each([this](const std::string&) { has_exact_cap = true; });
        cmd->add_option("--divisor-cap", divisor_cap, "divisor enumeration cap")
            ->each([this](const std::string&) { has_divisor_cap = true; });
        cmd->add_option("--eq1-bitcap", eq1_bitcap, "bit-size cap for the exact product identity")
            ->each([this](const std::string&) { has_eq1_bitcap = true; });
        cmd->add_option("--lower-floor", lower_floor,
                        "asserted floor for lower_ratio (default 0 = record only)")
            ->each([this](const std::string&) { has_lower_floor = true; });
    }

    Config resolve() const {
        Config config;
        if (!config_path.empty()) config = load_config_file(config_path, config);
        apply_env(config);
        if (has_threads) config.thread_count = threads;
        if (has_format) config.output_format = parse_output_format(format);
        if (has_tol) config.float_tol = tol;
        if (has_exact_cap) config.exact_cap = exact_cap;
        if (has_divisor_cap) config.divisor_cap = divisor_cap;
        if (has_eq1_bitcap) config.eq1_bitsize_cap = eq1_bitcap;
        if (has_lower_floor) config.lower_ratio_floor = lower_floor;
        try {
            validate(config);
        } catch (const std::invalid_argument& e) {
            throw usage_error(e.what());
        }
        return config;
    }
};

std::string opt_text(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("n/a");
}

/// Machine record mirroring the scan schema, with arbitrary-precision n and
/// absent ratios (n = 1) rendered as empty CSV fields / JSON nulls.
void print_machine_record(std::ostream& out, OutputFormat format,
                          const VandermondeReport<BigInt>& rep,
                          const ConcentrationReport<BigInt>& conc, double theta) {
    const auto opt_csv = [](const std::optional<double>& v) {
        return v ? format_double(*v) : std::string();
    };
    const auto opt_json = [](const std::optional<double>& v) {
        return v ? format_double(*v) : std::string("null");
    };
    if (format == OutputFormat::csv) {
        out << kCsvHeader << '\n';
        out << rep.n.str() << ',' << rep.tau << ',' << rep.omega2 << ','
            << (rep.is_square ? '1' : '0') << ',' << format_double(rep.log_v) << ','
            << format_double(rep.s) << ',' << format_double(rep.s_star) << ','
            << format_double(rep.residual) << ',' << opt_csv(rep.normalized_residual) << ','
            << opt_csv(rep.lower_ratio) << ',' << opt_csv(rep.upper_ratio) << ','
            << opt_csv(rep.s_ratio) << ',' << conc.max_count << ',' << opt_csv(conc.normalized)
            << ',' << (rep.n >= 2 ? format_double(theta) : std::string()) << '\n';
    } else {
        out << "{\"n\":" << rep.n.str() << ",\"tau\":" << rep.tau << ",\"omega2\":" << rep.omega2
            << ",\"is_square\":" << (rep.is_square ? "true" : "false")
            << ",\"log_v\":" << format_double(rep.log_v) << ",\"s\":" << format_double(rep.s)
            << ",\"s_star\":" << format_double(rep.s_star)
            << ",\"residual\":" << format_double(rep.residual)
            << ",\"normalized_residual\":" << opt_json(rep.normalized_residual)
            << ",\"lower_ratio\":" << opt_json(rep.lower_ratio)
            << ",\"upper_ratio\":" << opt_json(rep.upper_ratio)
            << ",\"s_ratio\":" << opt_json(rep.s_ratio) << ",\"conc_max\":" << conc.max_count
            << ",\"conc_normalized\":" << opt_json(conc.normalized) << ",\"theta_max\":"
            << (rep.n >= 2 ? format_double(theta) : std::string("null")) << "}\n";
    }
}

int cmd_report(const std::string& n_text, bool want_exact, const CommonFlags& flags) {
    const Config config = flags.resolve();
    const BigInt n = parse_big_uint(n_text);
    if (n < 1) throw usage_error("report: n must be >= 1");
    const FactorizationBig f = factor(n);
    const DivisorListBig divs = divisors(f, config.divisor_cap);
    if (want_exact && divs.count() > config.exact_cap)
        throw cap_exceeded("exact Vandermonde divisor-count", config.exact_cap, divs.count());
    const auto rep = report(f, divs, want_exact, config.exact_cap);
    const auto conc = dyadic_concentration(divs, f);
    const double theta = n >= 2 ? theta_max(f) : 0.0;

    std::cout << "n                   = " << n.str() << '\n';
    std::cout << "tau                 = " << rep.tau << '\n';
    std::cout << "omega2              = " << rep.omega2 << '\n';
    std::cout << "is_square           = " << (rep.is_square ? "yes" : "no") << '\n';
    std::cout << "theta_max           = " << (n >= 2 ? format_double(theta) : "n/a") << '\n';
    std::cout << "log_v               = " << format_double(rep.log_v) << '\n';
    std::cout << "s                   = " << format_double(rep.s) << '\n';
    std::cout << "s_star              = " << format_double(rep.s_star) << '\n';
    std::cout << "residual            = " << format_double(rep.residual) << '\n';
    std::cout << "normalized_residual = " << opt_text(rep.normalized_residual) << '\n';
    std::cout << "lower_ratio         = " << opt_text(rep.lower_ratio) << '\n';
    std::cout << "upper_ratio         = " << opt_text(rep.upper_ratio) << '\n';
    std::cout << "s_ratio             = " << opt_text(rep.s_ratio);
    if (rep.s_ratio && *rep.s_ratio == 0.25) std::cout << "  (lower bound attained)";
    std::cout << '\n';
    if (want_exact) std::cout << "exact_v             = " << rep.exact_v->str() << '\n';
    std::cout << "conc_max            = " << conc.max_count << " (witness X = "
              << conc.witness_x.str() << ")\n";
    std::cout << "conc_normalized     = " << opt_text(conc.normalized) << '\n';
    std::cout << '\n';
    print_machine_record(std::cout, config.output_format, rep, conc, theta);
    return 0;
}

int cmd_verify(const std::string& n_text, const CommonFlags& flags) {
    const Config config = flags.resolve();
    const BigInt n = parse_big_uint(n_text);
    if (n < 2) throw usage_error("verify: n must be >= 2");
    const FactorizationBig f = factor(n);
    const DivisorListBig divs = divisors(f, config.divisor_cap);
    const auto rep = report(f, divs, /*want_exact=*/false, config.exact_cap);

    bool all_ok = true;
    const auto line = [&](const std::string& name, bool ok, const std::string& detail) {
        std::cout << (ok ? "ok   " : "FAIL ") << name;
        if (!detail.empty()) std::cout << "  [" << detail << "]";
        std::cout << '\n';
        all_ok = all_ok && ok;
    };

    try {
        line("divisor product identity (exact)", check_divisor_product_identity(divs, config.eq1_bitsize_cap), "");
    } catch (const cap_exceeded&) {
        line("divisor product identity (float fallback)",
             check_divisor_product_identity_float(divs, config.float_tol), "bit-size cap exceeded");
    }
    line("centered moment identity (exact forms)", verify_centered_moment(f, config.float_tol), "");
    line("second moment identity (exact forms)", verify_second_moment(f, config.float_tol), "");

    const double log_n = log_value(n);
    const double t2 = static_cast<double>(rep.tau) * static_cast<double>(rep.tau);
    const double lower = t2 / 4.0 * log_n;
    const double upper = 3.0 * t2 / 8.0 * log_n;
    const double tol = config.float_tol;
    line("S(n) >= tau^2/4 log n", rep.s >= lower - tol * lower,
         "S " + format_double(rep.s) + ", bound " + format_double(lower));
    line("S(n) <= 3 tau^2/8 log n", rep.s <= upper + tol * upper,
         "S " + format_double(rep.s) + ", bound " + format_double(upper));
    line("log V(n) <= 3 tau^2/8 log n", rep.log_v <= upper + tol * upper,
         "log V " + format_double(rep.log_v) + ", bound " + format_double(upper));
    line("S(n) - log V(n) >= 0", rep.residual >= -tol * std::max(1.0, rep.s),
         "residual " + format_double(rep.residual));

    std::cout << (all_ok ? "all checks passed" : "CHECKS FAILED") << " for n = " << n.str()
              << '\n';
    return all_ok ? 0 : 1;
}

int cmd_scan(std::uint64_t from, std::uint64_t to, const std::string& out_path, bool use_sieve,
             const CommonFlags& flags) {
    const Config config = flags.resolve();
    if (from < 2 || from > to) throw usage_error("scan: need 2 <= from <= to");

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!out_path.empty()) {
        file.open(out_path, std::ios::binary);
        if (!file) throw io_error("scan: cannot open output file " + out_path);
        out = &file;
    }
    if (use_sieve && to > 30'000'000) {
        std::cerr << "scan: range too large for the smallest-prime-factor sieve; "
                     "falling back to trial division\n";
        use_sieve = false;
    }

    ScanOptions options;
    options.from = from;
    options.to = to;
    options.use_spf_sieve = use_sieve;
    options.config = config;

    std::string buffer;
    buffer.reserve(1 << 20);
    if (config.output_format == OutputFormat::csv) {
        buffer += kCsvHeader;
        buffer += '\n';
    }
    const auto flush = [&] {
        out->write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
        buffer.clear();
    };
    const ScanSummary summary = scan_range(options, [&](const ScanRecord& r) {
        buffer += config.output_format == OutputFormat::csv ? to_csv(r) : to_jsonl(r);
        buffer += '\n';
        if (buffer.size() > (1u << 20) - 512) flush();
    });
    flush();
    out->flush();
    if (!*out) throw io_error("scan: write failed" + (out_path.empty() ? "" : " for " + out_path));

    std::cerr << "scan [" << from << ", " << to << "] " << summary.to_string() << '\n';
    return 0;
}

void print_experiment(const LimitPointExperiment& ex, OutputFormat format) {
    std::cout << "base n              = " << ex.base_n.str() << '\n';
    std::cout << "kappa               = " << format_double(ex.kappa) << '\n';
    std::cout << "epsilon             = " << format_double(ex.epsilon_requested);
    if (ex.widenings > 0)
        std::cout << " (widened to " << format_double(ex.epsilon_used) << " in " << ex.widenings
                  << " steps)";
    std::cout << '\n';
    if (!ex.kappa_constraint_ok)
        std::cout << "constraint          = VIOLATED: kappa <= 2 epsilon (flagged, proceeding)\n";
    std::cout << "search interval     = [" << ex.search_lo.str() << ", " << ex.search_hi.str()
              << "]\n";
    std::cout << "found prime p       = " << ex.found_prime.str()
              << (ex.prime_certified ? "" : " (probable)") << '\n';
    std::cout << "N = p * n           = " << ex.big_n.str() << '\n';
    std::cout << "tau(N)              = " << ex.tau_big_n << '\n';
    std::cout << "S(N)                = " << format_double(ex.s_big_n) << '\n';
    std::cout << "measured ratio      = " << format_double(ex.measured_ratio) << '\n';
    std::cout << "target g(kappa)     = " << format_double(ex.target) << '\n';
    std::cout << "deviation           = " << format_double(ex.deviation) << '\n';
    std::cout << "theta_max(base)     = " << format_double(ex.theta_max_base) << '\n';
    std::cout << "|D1|, |D2|, |D3|    = " << ex.d1_count << ", " << ex.d2_count << ", "
              << ex.d3_count << '\n';
    std::cout << "log2 tau(N)         = " << format_double(ex.log2_tau)
              << "  (asymptotic regime wants >= " << format_double(ex.regime_required_log2_tau)
              << ")\n";
    if (format == OutputFormat::jsonl) {
        std::cout << "{\"base_n\":" << ex.base_n.str() << ",\"kappa\":" << format_double(ex.kappa)
                  << ",\"epsilon\":" << format_double(ex.epsilon_requested)
                  << ",\"epsilon_used\":" << format_double(ex.epsilon_used)
                  << ",\"kappa_constraint_ok\":" << (ex.kappa_constraint_ok ? "true" : "false")
                  << ",\"p\":" << ex.found_prime.str()
                  << ",\"prime_certified\":" << (ex.prime_certified ? "true" : "false")
                  << ",\"N\":" << ex.big_n.str() << ",\"tau_N\":" << ex.tau_big_n
                  << ",\"s_N\":" << format_double(ex.s_big_n)
                  << ",\"measured_ratio\":" << format_double(ex.measured_ratio)
                  << ",\"target\":" << format_double(ex.target)
                  << ",\"deviation\":" << format_double(ex.deviation)
                  << ",\"theta_max_base\":" << format_double(ex.theta_max_base)
                  << ",\"d1\":" << ex.d1_count << ",\"d2\":" << ex.d2_count
                  << ",\"d3\":" << ex.d3_count << "}\n";
    }
}

int cmd_limitpoint(const std::string& kappa_text, const std::string& base_text,
                   unsigned base_primorial, const std::string& epsilon_text,
                   const CommonFlags& flags) {
    const Config config = flags.resolve();
    if (base_text.empty() == (base_primorial == 0))
        throw usage_error("limitpoint: give exactly one of --base or --base-primorial");

    FactorizationBig base;
    if (!base_text.empty()) {
        const BigInt base_n = parse_big_uint(base_text);
        if (base_n < 2) throw usage_error("limitpoint: base must be >= 2");
        base = factor(base_n);
    } else {
        base = primorial_base(base_primorial);
    }
    const BigRat epsilon = parse_positive_rational(epsilon_text, "epsilon");

    std::vector<BigRat> kappas;
    if (!kappa_text.empty()) {
        kappas.push_back(parse_positive_rational(kappa_text, "kappa"));
    } else {
        // Default grid, spanning targets from about 0.275 to about 0.35.
        for (const char* k : {"0.25", "0.5", "1", "2", "4"}) kappas.push_back(parse_rational(k));
    }

    LimitPointOptions options;
    options.divisor_cap = config.divisor_cap;
    bool first = true;
    for (const BigRat& kappa : kappas) {
        if (!first) std::cout << '\n';
        first = false;
        const LimitPointExperiment ex = construct_limit_point(base, kappa, epsilon, options);
        if (!ex.kappa_constraint_ok)
            std::cerr << "limitpoint: warning: kappa <= 2 epsilon for kappa = "
                      << format_double(ex.kappa) << "; record flagged\n";
        print_experiment(ex, config.output_format);
    }
    return 0;
}

int cmd_concentration(const std::string& n_text, const CommonFlags& flags) {
    const Config config = flags.resolve();
    const BigInt n = parse_big_uint(n_text);
    if (n < 1) throw usage_error("concentration: n must be >= 1");
    const FactorizationBig f = factor(n);
    const DivisorListBig divs = divisors(f, config.divisor_cap);
    const auto conc = dyadic_concentration(divs, f);
    std::cout << "n               = " << n.str() << '\n';
    std::cout << "max_count       = " << conc.max_count << '\n';
    std::cout << "witness_x       = " << conc.witness_x.str() << "  (window ["
              << conc.witness_x.str() << ", " << BigInt(conc.witness_x * 2).str() << "])\n";
    std::cout << "normalized      = " << opt_text(conc.normalized) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    std::ios::sync_with_stdio(false);

    CLI::App app{"divisor statistics of the Vandermonde determinant of the divisors of n"};
    app.set_version_flag("--version", "vandiv 0.1.0");
    app.require_subcommand(1);

    std::string n_text;
    bool want_exact = false;
    CommonFlags report_flags;
    auto* report_cmd = app.add_subcommand("report", "full statistics report for one n");
    report_cmd->add_option("n", n_text, "the integer to analyze")->required();
    report_cmd->add_flag("--exact", want_exact, "also compute V(n) exactly");
    report_flags.attach(report_cmd);

    std::string verify_n;
    CommonFlags verify_flags;
    auto* verify_cmd = app.add_subcommand("verify", "run all identity and bound checks for one n");
    verify_cmd->add_option("n", verify_n, "the integer to verify")->required();
    verify_flags.attach(verify_cmd);

    std::uint64_t scan_from = 0, scan_to = 0;
    std::string scan_out;
    bool scan_sieve = false;
    CommonFlags scan_flags;
    auto* scan_cmd = app.add_subcommand("scan", "scan a range and emit one record per n");
    scan_cmd->add_option("--from", scan_from, "first n (>= 2)")->required();
    scan_cmd->add_option("--to", scan_to, "last n")->required();
    scan_cmd->add_option("--out", scan_out, "output file (default: stdout)");
    scan_cmd->add_flag("--sieve", scan_sieve, "use a smallest-prime-factor sieve fast path");
    scan_flags.attach(scan_cmd);

    std::string kappa_text, base_text, epsilon_text = "0.1";
    unsigned base_primorial = 0;
    CommonFlags limit_flags;
    auto* limit_cmd = app.add_subcommand("limitpoint", "run the N = p*n construction");
    limit_cmd->add_option("--kappa", kappa_text, "exponent kappa (> 0); default: a small grid");
    limit_cmd->add_option("--base", base_text, "base integer n >= 2");
    limit_cmd->add_option("--base-primorial", base_primorial, "use the product of the first k primes");
    limit_cmd->add_option("--epsilon", epsilon_text, "interval width exponent (> 0), default 0.1");
    limit_flags.attach(limit_cmd);

    std::string conc_n;
    CommonFlags conc_flags;
    auto* conc_cmd = app.add_subcommand("concentration", "max divisors in a closed dyadic window");
    conc_cmd->add_option("n", conc_n, "the integer to analyze")->required();
    conc_flags.attach(conc_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (report_cmd->parsed()) return cmd_report(n_text, want_exact, report_flags);
        if (verify_cmd->parsed()) return cmd_verify(verify_n, verify_flags);
        if (scan_cmd->parsed()) return cmd_scan(scan_from, scan_to, scan_out, scan_sieve, scan_flags);
        if (limit_cmd->parsed())
            return cmd_limitpoint(kappa_text, base_text, base_primorial, epsilon_text, limit_flags);
        if (conc_cmd->parsed()) return cmd_concentration(conc_n, conc_flags);
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const cap_exceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const prime_search_exhausted& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 5;
    } catch (const invariant_violation& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
