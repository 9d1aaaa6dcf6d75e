#pragma once

#include <stdexcept>
#include <string>

namespace pweyl {

/// Base class for every error thrown by the library.  The CLI maps these to
/// exit codes, so new error kinds should subclass one of the categories below
/// rather than throwing std::runtime_error directly.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A stated precondition or internal consistency check failed.
struct AssertionError : Error {
    explicit AssertionError(const std::string& msg) : Error(msg) {}
};

/// The requested modulus is not an odd prime below 2^31.
struct BadPrimeError : Error {
    explicit BadPrimeError(const std::string& msg) : Error(msg) {}
};

/// An exponent left the supported range (< 2^16).
struct ExponentOverflowError : Error {
    explicit ExponentOverflowError(const std::string& msg) : Error(msg) {}
};

/// Two values from incompatible coefficient domains or variable counts met.
struct DomainMismatchError : AssertionError {
    explicit DomainMismatchError(const std::string& msg) : AssertionError(msg) {}
};

/// A work budget (reduction steps, sampling attempts, ...) ran out.
struct BudgetExceededError : Error {
    explicit BudgetExceededError(const std::string& msg) : Error(msg) {}
};

/// Input text did not match the polynomial / problem grammar.
struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t pos) : Error(msg), position(pos) {}
    std::size_t position;
};

/// Raised when an element expected to be central is not.
struct NotCentralError : AssertionError {
    explicit NotCentralError(const std::string& msg) : AssertionError(msg) {}
};

/// Raised when an operator expected to be monic in the derivation is not.
struct NotMonicError : AssertionError {
    explicit NotMonicError(const std::string& msg) : AssertionError(msg) {}
};

/// Degree-bound doubling failed to reach a stable answer within limits.
struct NonStableError : Error {
    explicit NonStableError(const std::string& msg) : Error(msg) {}
};

/// A sample fiber was degenerate for the quantity being measured.
struct SampleDegenerateError : Error {
    explicit SampleDegenerateError(const std::string& msg) : Error(msg) {}
};

/// A localized computation produced a denominator outside the declared one.
struct DenominatorEscapeError : Error {
    explicit DenominatorEscapeError(const std::string& msg) : Error(msg) {}
};

/// No smooth rational sample point was found within the search budget.
struct NoSmoothSampleError : Error {
    explicit NoSmoothSampleError(const std::string& msg) : Error(msg) {}
};

/// A connection (or lift) failed its flatness check.
struct FlatnessError : AssertionError {
    explicit FlatnessError(const std::string& msg) : AssertionError(msg) {}
};

/// A generator word broke a defining relation (bad determinant, bad shear).
struct RelationViolatedError : Error {
    explicit RelationViolatedError(const std::string& msg) : Error(msg) {}
};

/// A 1-form fed to the lift torsor action is not closed for the
/// End-connection differential, so it does not act on flat lifts.
struct NotClosedError : Error {
    explicit NotClosedError(const std::string& msg) : Error(msg) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw AssertionError(msg);
}

}  // namespace pweyl
