#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bellap {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad arguments or values outside an operation's mathematical domain.
struct domain_error : error {
    using error::error;
};

// A series or integral failed to settle: stopping rule never fired,
// partial sums blew past the overflow guard, or a denominator lost meaning.
struct divergence_error : error {
    using error::error;
};

// The requested integrand provably fails to be integrable on [0, inf).
struct non_integrable_error : error {
    using error::error;
};

// Adaptive subdivision budget exhausted before tolerances were met.
struct tolerance_error : error {
    using error::error;
};

// CLI misuse (unknown flags, missing arguments); maps to exit code 2.
struct usage_error : error {
    using error::error;
};

struct parse_error : error {
    std::size_t offset;
    std::string expected;

    parse_error(std::size_t off, std::string what_expected)
        : error("syntax error at offset " + std::to_string(off) +
                ": expected " + what_expected),
          offset(off),
          expected(std::move(what_expected)) {}
};

}  // namespace bellap
