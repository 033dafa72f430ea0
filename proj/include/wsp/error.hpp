#pragma once

#include <stdexcept>
#include <string>

namespace wsp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the operation's domain (unassigned task, wrong arity, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A documented precondition of the callee was violated by the caller.
class ContractError : public Error {
public:
    using Error::Error;
};

/// A constraint does not belong to the class an operation requires
/// (e.g. the kernel was handed a non-regular constraint).
class ClassificationError : public Error {
public:
    using Error::Error;
};

/// An enumeration would exceed its configured cap.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// Malformed textual input.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Invalid generator parameters or gadget relation.
class ParameterError : public Error {
public:
    using Error::Error;
};

} // namespace wsp
