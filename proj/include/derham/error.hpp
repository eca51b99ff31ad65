#ifndef DERHAM_ERROR_HPP
#define DERHAM_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace derham {

/**
 * Base class for all errors raised by the library. Every error carries a
 * human readable message; subclasses add structured context where a caller
 * can act on it.
 */
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text; `offset` is the byte offset of the problem.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Evaluation failure: unbound variable or a vanishing denominator.
class EvalError : public Error {
public:
    using Error::Error;
};

/// An input violates a documented invariant (shapes, degrees, coordinates...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Numerical routine could not reach the requested tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace derham

#endif
