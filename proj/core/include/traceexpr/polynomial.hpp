#pragma once

#include "traceexpr/box.hpp"
#include "traceexpr/rational.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace traceexpr {

/// Exponent vector of a monomial; length equals the polynomial's arity.
using Monomial = std::vector<std::uint32_t>;

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are keyed by exponent vector; a stored coefficient is never zero,
/// so the zero polynomial has no terms.
class Polynomial {
public:
	explicit Polynomial(std::size_t arity = 0) : arity_(arity) {}

	static Polynomial constant(std::size_t arity, const Rational &c);
	/// The polynomial x_index.
	static Polynomial variable(std::size_t arity, std::size_t index);

	[[nodiscard]] std::size_t arity() const { return arity_; }
	[[nodiscard]] const std::map<Monomial, Rational> &terms() const { return terms_; }
	[[nodiscard]] bool is_zero() const { return terms_.empty(); }
	[[nodiscard]] std::size_t total_degree() const;
	[[nodiscard]] Rational coefficient(const Monomial &m) const;

	/// Adds c * m; drops the term if the result cancels.
	void add_term(const Monomial &m, const Rational &c);

	[[nodiscard]] Rational evaluate(std::span<const Rational> point) const;
	[[nodiscard]] double evaluate(std::span<const double> point) const;

	/// Drops every term of total degree above `degree`.
	[[nodiscard]] Polynomial truncated(std::size_t degree) const;
	/// Coefficient-wise absolute value.
	[[nodiscard]] Polynomial abs_coefficients() const;
	[[nodiscard]] Polynomial pow(unsigned exponent) const;

	Polynomial &operator+=(const Polynomial &o);
	Polynomial &operator-=(const Polynomial &o);
	Polynomial &operator*=(const Rational &c);

	friend Polynomial operator+(Polynomial a, const Polynomial &b) { return a += b; }
	friend Polynomial operator-(Polynomial a, const Polynomial &b) { return a -= b; }
	friend Polynomial operator-(Polynomial a) { return a *= Rational(-1); }
	friend Polynomial operator*(Polynomial a, const Rational &c) { return a *= c; }
	friend Polynomial operator*(const Rational &c, Polynomial a) { return a *= c; }
	friend Polynomial operator*(const Polynomial &a, const Polynomial &b);

	friend bool operator==(const Polynomial &, const Polynomial &) = default;

	/// Human readable form using the given variable names (x0, x1, ... if empty).
	[[nodiscard]] std::string to_string(std::span<const std::string> names = {}) const;

private:
	void check_arity(const Polynomial &o) const;

	std::size_t arity_;
	std::map<Monomial, Rational> terms_;
};

Polynomial poly_mul(const Polynomial &p, const Polynomial &q);

/// Exact integral of p over the box, by per-monomial antiderivatives.
/// Throws DimensionError when the arities differ.
Rational poly_integrate(const Polynomial &p, const Box &region);

/// Exact integral over the union of possibly overlapping boxes.
Rational poly_integrate(const Polynomial &p, std::span<const Box> region);

} // namespace traceexpr
