#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bsrinf {

class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class dimension_mismatch : public error {
public:
    using error::error;
};

class not_square : public error {
public:
    using error::error;
};

class non_coprime_input : public error {
public:
    using error::error;
};

class infinite_quotient : public error {
public:
    using error::error;
};

class parent_mismatch : public error {
public:
    using error::error;
};

/// Raised when an exhaustive step would exceed its configured cap.
/// Carries the size that was requested so callers can report it.
class bound_exceeded : public error {
public:
    bound_exceeded(const std::string& what, std::uint64_t requested)
        : error(what), requested_(requested) {}
    std::uint64_t requested() const { return requested_; }

private:
    std::uint64_t requested_;
};

class degenerate_params : public error {
public:
    using error::error;
};

class precondition_violated : public error {
public:
    using error::error;
};

class not_homomorphism : public error {
public:
    using error::error;
};

class not_bijective : public error {
public:
    using error::error;
};

class non_divisor : public error {
public:
    using error::error;
};

class inconsistency : public error {
public:
    using error::error;
};

class invalid_params : public error {
public:
    using error::error;
};

} // namespace bsrinf
