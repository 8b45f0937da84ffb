#pragma once

#include "traceexpr/polynomial.hpp"
#include "traceexpr/rational.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace traceexpr {

/// Immutable expression tree over clock variables: rational constants,
/// variables, sums, products, negation, integer powers and exp.
/// Copies share structure.
class FuncExpr {
public:
	enum class Kind { Constant, Variable, Sum, Product, Negate, Power, Exp };

	FuncExpr() : FuncExpr(constant(0)) {}

	static FuncExpr constant(const Rational &value);
	static FuncExpr variable(std::size_t index);
	static FuncExpr from_polynomial(const Polynomial &p);

	friend FuncExpr operator+(const FuncExpr &a, const FuncExpr &b);
	friend FuncExpr operator-(const FuncExpr &a, const FuncExpr &b);
	friend FuncExpr operator*(const FuncExpr &a, const FuncExpr &b);
	friend FuncExpr operator-(const FuncExpr &a);
	friend FuncExpr pow(const FuncExpr &base, unsigned exponent);
	friend FuncExpr exp(const FuncExpr &argument);

	[[nodiscard]] Kind kind() const;
	[[nodiscard]] const Rational &value() const;        ///< Constant only.
	[[nodiscard]] std::size_t index() const;            ///< Variable only.
	[[nodiscard]] unsigned exponent() const;            ///< Power only.
	[[nodiscard]] const FuncExpr &lhs() const;          ///< First child.
	[[nodiscard]] const FuncExpr &rhs() const;          ///< Second child of Sum/Product.

	/// One past the largest variable index used; 0 for closed expressions.
	[[nodiscard]] std::size_t variable_bound() const;
	[[nodiscard]] bool contains_exp() const;

	[[nodiscard]] double evaluate(std::span<const double> point) const;
	/// Exact polynomial form; empty when the tree contains exp.
	[[nodiscard]] std::optional<Polynomial> to_polynomial(std::size_t arity) const;

	/// Source form accepted by the DSL expression grammar.
	[[nodiscard]] std::string to_string(std::span<const std::string> names = {}) const;

	friend bool operator==(const FuncExpr &a, const FuncExpr &b);

private:
	struct Node;
	explicit FuncExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

	std::string print(std::span<const std::string> names, int context) const;

	std::shared_ptr<const Node> node_;
};

/// Multivariate Taylor polynomial of total degree <= degree about the origin,
/// computed by truncated power-series arithmetic on the tree.
///
/// exp(g) needs g(0) = 0 so the coefficients stay rational; otherwise
/// InvalidArgument is thrown.
Polynomial taylor_truncate(const FuncExpr &f, unsigned degree, std::size_t arity);

/// True when taylor_truncate accepts f.
bool has_rational_taylor_series(const FuncExpr &f);

} // namespace traceexpr
