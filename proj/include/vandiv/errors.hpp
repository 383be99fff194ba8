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
#include <stdexcept>
#include <string>

namespace vandiv {

/// A request would exceed a configured resource cap. The message names the
/// cap so callers can report it verbatim.
class cap_exceeded : public std::runtime_error {
  public:
    cap_exceeded(const std::string& what_cap, std::uint64_t cap, std::uint64_t requested)
        : std::runtime_error(what_cap + " cap exceeded: requested " + std::to_string(requested) +
                             ", cap " + std::to_string(cap)),
          cap_(cap),
          requested_(requested) {}

    std::uint64_t cap() const { return cap_; }
    std::uint64_t requested() const { return requested_; }

  private:
    std::uint64_t cap_;
    std::uint64_t requested_;
};

/// No qualifying prime in the searched interval, after all widenings.
class prime_search_exhausted : public std::runtime_error {
  public:
    explicit prime_search_exhausted(const std::string& range_text)
        : std::runtime_error("prime search exhausted: no qualifying prime in " + range_text) {}
};

/// A checked identity or inequality failed for a specific n. Raised by the
/// scanner and by the verification driver; carries the offending n.
class invariant_violation : public std::runtime_error {
  public:
    invariant_violation(const std::string& n_text, const std::string& check,
                        const std::string& detail)
        : std::runtime_error("invariant violated at n = " + n_text + ": " + check +
                             (detail.empty() ? "" : " (" + detail + ")")),
          n_text_(n_text),
          check_(check) {}

    const std::string& n_text() const { return n_text_; }
    const std::string& check() const { return check_; }

  private:
    std::string n_text_;
    std::string check_;
};

}  // namespace vandiv
