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

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "vandiv/config.hpp"
#include "vandiv/divisors.hpp"
#include "vandiv/errors.hpp"
#include "vandiv/identities.hpp"
#include "vandiv/vandermonde.hpp"

namespace vandiv {

/// One row of scanner output. Every float is a plain double; formatting is
/// centralized so CSV and JSONL agree digit for digit.
struct ScanRecord {
    std::uint64_t n = 0;
    std::uint64_t tau = 0;
    std::uint64_t omega2 = 0;
    bool is_square = false;
    double log_v = 0.0;
    double s = 0.0;
    double s_star = 0.0;
    double residual = 0.0;
    double normalized_residual = 0.0;
    double lower_ratio = 0.0;
    double upper_ratio = 0.0;
    double s_ratio = 0.0;
    std::uint64_t conc_max = 0;
    double conc_normalized = 0.0;
    double theta_max = 0.0;
};

inline constexpr const char* kCsvHeader =
    "n,tau,omega2,is_square,log_v,s,s_star,residual,normalized_residual,lower_ratio,"
    "upper_ratio,s_ratio,conc_max,conc_normalized,theta_max";

/// 12 significant digits, shortest form ("%.12g").
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string to_csv(const ScanRecord& r) {
    std::string line;
    line.reserve(200);
    line += std::to_string(r.n);
    line += ',';
    line += std::to_string(r.tau);
    line += ',';
    line += std::to_string(r.omega2);
    line += ',';
    line += r.is_square ? '1' : '0';
    for (double v : {r.log_v, r.s, r.s_star, r.residual, r.normalized_residual, r.lower_ratio,
                     r.upper_ratio, r.s_ratio}) {
        line += ',';
        line += format_double(v);
    }
    line += ',';
    line += std::to_string(r.conc_max);
    line += ',';
    line += format_double(r.conc_normalized);
    line += ',';
    line += format_double(r.theta_max);
    return line;
}

inline std::string to_jsonl(const ScanRecord& r) {
    std::string line;
    line.reserve(280);
    line += "{\"n\":" + std::to_string(r.n);
    line += ",\"tau\":" + std::to_string(r.tau);
    line += ",\"omega2\":" + std::to_string(r.omega2);
    line += std::string(",\"is_square\":") + (r.is_square ? "true" : "false");
    line += ",\"log_v\":" + format_double(r.log_v);
    line += ",\"s\":" + format_double(r.s);
    line += ",\"s_star\":" + format_double(r.s_star);
    line += ",\"residual\":" + format_double(r.residual);
    line += ",\"normalized_residual\":" + format_double(r.normalized_residual);
    line += ",\"lower_ratio\":" + format_double(r.lower_ratio);
    line += ",\"upper_ratio\":" + format_double(r.upper_ratio);
    line += ",\"s_ratio\":" + format_double(r.s_ratio);
    line += ",\"conc_max\":" + std::to_string(r.conc_max);
    line += ",\"conc_normalized\":" + format_double(r.conc_normalized);
    line += ",\"theta_max\":" + format_double(r.theta_max);
    line += "}";
    return line;
}

/// Extremes over a finished scan, with the n attaining each one (ties go to
/// the smallest n).
struct ScanSummary {
    std::uint64_t records = 0;
    double max_conc_normalized = 0.0;
    std::uint64_t argmax_conc_normalized = 0;
    double min_lower_ratio = 0.0;
    std::uint64_t argmin_lower_ratio = 0;
    double max_s_ratio = 0.0;
    std::uint64_t argmax_s_ratio = 0;
    double max_normalized_residual = 0.0;
    std::uint64_t argmax_normalized_residual = 0;

    void absorb(const ScanRecord& r) {
        if (records == 0 || r.conc_normalized > max_conc_normalized) {
            max_conc_normalized = r.conc_normalized;
            argmax_conc_normalized = r.n;
        }
        if (records == 0 || r.lower_ratio < min_lower_ratio) {
            min_lower_ratio = r.lower_ratio;
            argmin_lower_ratio = r.n;
        }
        if (records == 0 || r.s_ratio > max_s_ratio) {
            max_s_ratio = r.s_ratio;
            argmax_s_ratio = r.n;
        }
        if (records == 0 || r.normalized_residual > max_normalized_residual) {
            max_normalized_residual = r.normalized_residual;
            argmax_normalized_residual = r.n;
        }
        ++records;
    }

    std::string to_string() const {
        return "records=" + std::to_string(records) +
               " max_conc_normalized=" + format_double(max_conc_normalized) + " at n=" +
               std::to_string(argmax_conc_normalized) +
               " min_lower_ratio=" + format_double(min_lower_ratio) + " at n=" +
               std::to_string(argmin_lower_ratio) +
               " max_s_ratio=" + format_double(max_s_ratio) + " at n=" +
               std::to_string(argmax_s_ratio) +
               " max_normalized_residual=" + format_double(max_normalized_residual) + " at n=" +
               std::to_string(argmax_normalized_residual);
    }
};

/// Shared read-only factorization support for a scan over [from, to]:
/// a prime table up to sqrt(to), plus an optional smallest-prime-factor
/// sieve covering the whole range.
class FactorContext {
  public:
    FactorContext(std::uint64_t to, bool build_spf_sieve) {
        const auto root = static_cast<std::uint32_t>(std::sqrt(static_cast<double>(to))) + 2;
        primes_ = sieve_primes(root);
        if (build_spf_sieve) {
            spf_.assign(to + 1, 0);
            for (std::uint64_t i = 2; i <= to; ++i) {
                if (spf_[i] != 0) continue;
                for (std::uint64_t m = i; m <= to; m += i)
                    if (spf_[m] == 0) spf_[m] = static_cast<std::uint32_t>(i);
            }
        }
    }

    void factorize(std::uint64_t n, std::vector<PrimePower<std::uint64_t>>& out) const {
        out.clear();
        if (!spf_.empty() && n < spf_.size()) {
            while (n > 1) {
                const std::uint64_t p = spf_[n];
                unsigned e = 0;
                while (n % p == 0) {
                    n /= p;
                    ++e;
                }
                out.push_back({p, e});
            }
            return;
        }
        for (std::uint32_t p : primes_) {
            if (static_cast<std::uint64_t>(p) * p > n) break;
            if (n % p != 0) continue;
            unsigned e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            out.push_back({p, e});
        }
        if (n > 1) out.push_back({n, 1});  // prime remainder: table reaches sqrt(to)
    }

  private:
    std::vector<std::uint32_t> primes_;
    std::vector<std::uint32_t> spf_;
};

namespace detail {

inline void check_scan_invariants(const ScanRecord& r, const Factorization64& f,
                                  const DivisorList64& divs, const Config& config) {
    const double tol = config.float_tol;
    const double log_n = log_value(r.n);
    const double t2 = static_cast<double>(r.tau) * static_cast<double>(r.tau);
    const double lower_bound = t2 / 4.0 * log_n;
    const double upper_bound = 3.0 * t2 / 8.0 * log_n;
    const auto fail = [&](const char* check, double got, double bound) {
        throw invariant_violation(std::to_string(r.n), check,
                                  "value " + format_double(got) + " vs bound " +
                                      format_double(bound));
    };
    if (!(r.s >= lower_bound - tol * lower_bound)) fail("S(n) lower bound", r.s, lower_bound);
    if (!(r.s <= upper_bound + tol * upper_bound)) fail("S(n) upper bound", r.s, upper_bound);
    if (!(r.log_v <= upper_bound + tol * upper_bound))
        fail("log V(n) upper bound", r.log_v, upper_bound);
    if (!(r.residual >= -tol * std::max(1.0, r.s))) fail("residual >= 0", r.residual, 0.0);
    if (!(r.lower_ratio >= config.lower_ratio_floor))
        fail("lower-ratio floor", r.lower_ratio, config.lower_ratio_floor);
    if (r.conc_max < 1 || r.conc_max > r.tau)
        fail("concentration count range", static_cast<double>(r.conc_max),
             static_cast<double>(r.tau));

    bool product_identity;
    try {
        product_identity = check_divisor_product_identity(divs, config.eq1_bitsize_cap);
    } catch (const cap_exceeded&) {
        product_identity = check_divisor_product_identity_float(divs, tol);
    }
    if (!product_identity)
        throw invariant_violation(std::to_string(r.n), "divisor product identity", "");
    if (!verify_centered_moment(f, tol))
        throw invariant_violation(std::to_string(r.n), "centered moment identity", "");
    if (!verify_second_moment(f, tol))
        throw invariant_violation(std::to_string(r.n), "second moment identity", "");
}

}  // namespace detail

/// Computes the record for one n (n >= 2) and checks every asserted
/// invariant; throws invariant_violation naming n if any check fails.
inline ScanRecord compute_scan_record(std::uint64_t n, const FactorContext& context,
                                      const Config& config) {
    Factorization64 f;
    f.value = n;
    context.factorize(n, f.factors);
    const DivisorList64 divs = divisors(f, config.divisor_cap);
    const VandermondeReport<std::uint64_t> rep = report(f, divs, /*want_exact=*/false);
    const ConcentrationReport<std::uint64_t> conc = dyadic_concentration(divs, f);

    ScanRecord r;
    r.n = n;
    r.tau = rep.tau;
    r.omega2 = rep.omega2;
    r.is_square = rep.is_square;
    r.log_v = rep.log_v;
    r.s = rep.s;
    r.s_star = rep.s_star;
    r.residual = rep.residual;
    r.normalized_residual = rep.normalized_residual.value();
    r.lower_ratio = rep.lower_ratio.value();
    r.upper_ratio = rep.upper_ratio.value();
    r.s_ratio = rep.s_ratio.value();
    r.conc_max = conc.max_count;
    r.conc_normalized = conc.normalized.value();
    r.theta_max = theta_max(f);
    detail::check_scan_invariants(r, f, divs, config);
    return r;
}

struct ScanOptions {
    std::uint64_t from = 2;
    std::uint64_t to = 2;
    unsigned threads = 0;  // 0: config.thread_count, then hardware
    bool use_spf_sieve = false;
    Config config{};
};

/// Parallel scan over [from, to]. Work is dealt in fixed blocks to a worker
/// pool; a single consumer (the calling thread) replays completed blocks in
/// ascending order, so the sink sees records in ascending n regardless of
/// the thread count, byte for byte.
template <class Sink>
ScanSummary scan_range(const ScanOptions& options, Sink&& sink) {
    if (options.from < 2 || options.from > options.to)
        throw std::invalid_argument("scan_range: need 2 <= from <= to");
    validate(options.config);

    unsigned threads = options.threads != 0 ? options.threads : options.config.thread_count;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

    const FactorContext context(options.to, options.use_spf_sieve);
    constexpr std::uint64_t kBlock = 1024;
    const std::uint64_t total = options.to - options.from + 1;
    const std::uint64_t blocks = (total + kBlock - 1) / kBlock;
    const std::uint64_t backlog_window = 4ull * threads + 4;

    std::atomic<std::uint64_t> next_block{0};
    std::mutex mutex;
    std::condition_variable produced;
    std::condition_variable consumed_cv;
    std::map<std::uint64_t, std::vector<ScanRecord>> done;
    std::uint64_t consumed = 0;
    std::exception_ptr failure;
    bool abort = false;

    const auto worker = [&] {
        std::vector<ScanRecord> block_records;
        while (true) {
            const std::uint64_t b = next_block.fetch_add(1, std::memory_order_relaxed);
            if (b >= blocks) return;
            {
                // Do not run too far ahead of the consumer.
                std::unique_lock lock(mutex);
                consumed_cv.wait(lock, [&] { return abort || b < consumed + backlog_window; });
                if (abort) return;
            }
            const std::uint64_t lo = options.from + b * kBlock;
            const std::uint64_t hi = std::min(options.to, lo + kBlock - 1);
            block_records.clear();
            block_records.reserve(hi - lo + 1);
            try {
                for (std::uint64_t n = lo; n <= hi; ++n)
                    block_records.push_back(compute_scan_record(n, context, options.config));
            } catch (...) {
                std::lock_guard lock(mutex);
                if (!failure) failure = std::current_exception();
                abort = true;
                produced.notify_all();
                consumed_cv.notify_all();
                return;
            }
            {
                std::lock_guard lock(mutex);
                done.emplace(b, std::move(block_records));
                block_records = {};
                produced.notify_all();
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);

    ScanSummary summary;
    {
        std::unique_lock lock(mutex);
        while (consumed < blocks) {
            produced.wait(lock, [&] { return abort || done.count(consumed) != 0; });
            if (abort) break;
            std::vector<ScanRecord> block_records = std::move(done.at(consumed));
            done.erase(consumed);
            ++consumed;
            consumed_cv.notify_all();
            lock.unlock();
            for (const ScanRecord& r : block_records) {
                summary.absorb(r);
                sink(r);
            }
            lock.lock();
        }
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return summary;
}

}  // namespace vandiv
