#pragma once

#include <stdexcept>
#include <string>

namespace cubic {

struct ReducibleFormError : std::domain_error {
    using std::domain_error::domain_error;
};

struct OverflowError : std::overflow_error {
    using std::overflow_error::overflow_error;
};

// relation collection could not reach a certified lattice
struct CertificationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// quadratic characters failed to separate S-units modulo squares
struct SaturationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ResourceLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct WildPrimeError : std::domain_error {
    using std::domain_error::domain_error;
};

struct RangeError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

struct CorruptRecordError : std::runtime_error {
    CorruptRecordError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_no(line) {}
    std::size_t line_no;
};

}  // namespace cubic
