#pragma once

#include <stdexcept>
#include <string>

namespace arith_mm {

/// Input failed validation (bad argument, violated precondition).
class validation_error : public std::invalid_argument {
public:
    explicit validation_error(const std::string& what) : std::invalid_argument(what) {}
};

/// An enumeration or arithmetic budget was exceeded.
class cap_exceeded : public std::runtime_error {
public:
    explicit cap_exceeded(const std::string& what) : std::runtime_error(what) {}
};

/// An internal consistency check failed. Always a bug.
class invariant_violation : public std::logic_error {
public:
    explicit invariant_violation(const std::string& what) : std::logic_error(what) {}
};

namespace detail {

inline void require(bool ok, const std::string& what)
{
    if (!ok) throw validation_error(what);
}

inline void ensure(bool ok, const std::string& what)
{
    if (!ok) throw invariant_violation(what);
}

} // namespace detail
} // namespace arith_mm
