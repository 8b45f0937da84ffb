#pragma once

#include <stdexcept>
#include <string>

namespace traceexpr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree (polynomial arity, box arity, ...).
class DimensionError : public Error {
public:
	DimensionError() : Error("dimension mismatch") {}
	explicit DimensionError(const std::string &what) : Error("dimension mismatch: " + what) {}
};

/// A caller violated an operation's precondition.
class InvalidArgument : public Error {
public:
	using Error::Error;
};

} // namespace traceexpr
