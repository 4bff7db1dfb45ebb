#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mdpgeom {

/// Base of every error raised by the library.
class MdpError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside an operation's domain (empty vector, non-stochastic matrix,
/// dimension mismatch).
class DomainError : public MdpError {
public:
    using MdpError::MdpError;
};

class InvalidPolicyError : public MdpError {
public:
    using MdpError::MdpError;
};

class EnumerationTooLargeError : public MdpError {
public:
    using MdpError::MdpError;
};

/// The induced chain has more than one closed class.
class NotUnichainError : public MdpError {
public:
    using MdpError::MdpError;
};

/// No power of the kernel up to the Wielandt bound is entrywise positive.
class NotPrimitiveError : public MdpError {
public:
    using MdpError::MdpError;
};

/// Discounted quantity requested at gamma = 1, or average-reward one at gamma < 1.
class CriterionMismatchError : public MdpError {
public:
    using MdpError::MdpError;
};

class UnsupportedSizeError : public MdpError {
public:
    using MdpError::MdpError;
};

class AssumptionViolatedError : public MdpError {
public:
    using MdpError::MdpError;
};

class InternalError : public MdpError {
public:
    using MdpError::MdpError;
};

/// Malformed model or spec document.
class SyntaxError : public MdpError {
public:
    using MdpError::MdpError;
};

class UnsupportedVersionError : public MdpError {
public:
    using MdpError::MdpError;
};

/// Parsed document describes a model that fails validate_model.
class ValidationError : public MdpError {
public:
    explicit ValidationError(std::vector<std::string> violations);

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

} // namespace mdpgeom
