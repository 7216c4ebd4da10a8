#pragma once

#include <atomic>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ffcm {

/// Misuse of an operation: bad arguments, violated preconditions.
struct domain_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Operands belong to different fields.
struct field_mismatch_error : domain_error {
    using domain_error::domain_error;
};

/// An enumeration or kernel would touch more elements than the configured cap.
struct count_limit_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A truncated series does not carry enough coefficients to decide the result.
struct precision_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {
inline std::atomic<std::uint64_t>& count_limit_slot() {
    static std::atomic<std::uint64_t> limit{std::uint64_t(1) << 26};
    return limit;
}
}  // namespace detail

inline std::uint64_t count_limit() { return detail::count_limit_slot().load(); }
inline void set_count_limit(std::uint64_t n) { detail::count_limit_slot().store(n); }

/// Throws count_limit_error when n exceeds the global enumeration cap.
inline void guard_count(std::uint64_t n, const char* what) {
    if (n > count_limit())
        throw count_limit_error(std::string(what) + ": " + std::to_string(n) +
                                " elements exceeds limit " + std::to_string(count_limit()));
}

}  // namespace ffcm
