#pragma once

#include "traceexpr/machine.hpp"

#include <string>
#include <vector>

namespace traceexpr {

/// One broken invariant. `location` names the offending state, edge or
/// declaration.
struct Violation {
	std::string location;
	std::string message;

	/// "message at location".
	[[nodiscard]] std::string to_string() const;
	friend bool operator==(const Violation &, const Violation &) = default;
};

/// Every invariant violation of the machine; empty means valid.
std::vector<Violation> validate(const Machine &m);

/// Throws InvalidArgument listing the violations when the machine is invalid.
void require_valid(const Machine &m);

} // namespace traceexpr
