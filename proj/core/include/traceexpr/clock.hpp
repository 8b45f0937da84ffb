#pragma once

#include "traceexpr/ids.hpp"
#include "traceexpr/rational.hpp"

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace traceexpr {

/// Values of all clocks; every entry is non-negative.
using ClockInterpretation = std::vector<Rational>;

/// Boolean combination of clock comparisons.
///
/// Atoms compare a clock with a rational constant (x < c, x <= c, x > c,
/// x >= c) or a clock with another clock plus a constant (x <= y + c,
/// x < y + c). True is the trivial guard.
class ClockConstraint {
public:
	enum class Kind { True, Lt, Le, Gt, Ge, DiagLe, DiagLt, Not, Or, And };

	ClockConstraint() : ClockConstraint(truth()) {}

	static ClockConstraint truth();
	static ClockConstraint lt(ClockId clock, const Rational &c);
	static ClockConstraint le(ClockId clock, const Rational &c);
	static ClockConstraint gt(ClockId clock, const Rational &c);
	static ClockConstraint ge(ClockId clock, const Rational &c);
	/// clock <= other + c
	static ClockConstraint diag_le(ClockId clock, ClockId other, const Rational &c);
	/// clock < other + c
	static ClockConstraint diag_lt(ClockId clock, ClockId other, const Rational &c);
	static ClockConstraint negation(const ClockConstraint &a);
	static ClockConstraint disjunction(const ClockConstraint &a, const ClockConstraint &b);
	static ClockConstraint conjunction(const ClockConstraint &a, const ClockConstraint &b);

	[[nodiscard]] Kind kind() const;
	[[nodiscard]] bool is_atom() const;
	[[nodiscard]] bool is_diagonal() const;
	[[nodiscard]] ClockId clock() const;          ///< Atoms only.
	[[nodiscard]] ClockId other() const;          ///< Diagonal atoms only.
	[[nodiscard]] const Rational &constant() const; ///< Atoms only.
	[[nodiscard]] const ClockConstraint &lhs() const;
	[[nodiscard]] const ClockConstraint &rhs() const;

	/// One past the largest clock index referenced; 0 if none.
	[[nodiscard]] std::size_t clock_bound() const;
	[[nodiscard]] bool contains_diagonal() const;
	/// Every atom in left-to-right order.
	[[nodiscard]] std::vector<ClockConstraint> atoms() const;

	/// DSL source form, e.g. "x < 1 && !(y >= 1/2)".
	[[nodiscard]] std::string to_string(std::span<const std::string> clock_names = {}) const;

	friend bool operator==(const ClockConstraint &a, const ClockConstraint &b);

private:
	struct Node;
	explicit ClockConstraint(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
	[[nodiscard]] std::string print(std::span<const std::string> names, int context) const;

	std::shared_ptr<const Node> node_;
};

/// Truth value of the constraint under the interpretation.
/// Throws InvalidArgument when the constraint names a clock outside iota.
bool constraint_sat(std::span<const Rational> iota, const ClockConstraint &con);

/// Largest constant compared against each clock (0 when a clock is unused).
/// Diagonal constants are attributed to both clocks by absolute value.
std::vector<Rational> max_constants(std::span<const ClockConstraint> guards, std::size_t clock_count);

} // namespace traceexpr
