#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

namespace traceexpr {

/// Exact rational number. Always kept in lowest terms with a positive
/// denominator; backed by GMP.
class Rational {
public:
	Rational() = default;
	Rational(long value) : value_(value) {}                 // NOLINT(google-explicit-constructor)
	Rational(int value) : value_(value) {}                  // NOLINT(google-explicit-constructor)
	Rational(long numerator, long denominator);
	explicit Rational(mpq_class value);

	/// Accepts "a", "a/b", decimals ("0.25") and scientific notation ("1e-6").
	static Rational parse(std::string_view text);

	[[nodiscard]] mpz_class numerator() const { return value_.get_num(); }
	[[nodiscard]] mpz_class denominator() const { return value_.get_den(); }
	[[nodiscard]] const mpq_class &raw() const { return value_; }

	[[nodiscard]] bool is_zero() const { return sgn(value_) == 0; }
	[[nodiscard]] bool is_integer() const { return value_.get_den() == 1; }
	[[nodiscard]] int sign() const { return sgn(value_); }

	[[nodiscard]] double to_double() const { return value_.get_d(); }

	/// "n" for integers, "n/d" otherwise.
	[[nodiscard]] std::string to_string() const;
	/// Always "n/d", also for integers.
	[[nodiscard]] std::string to_fraction_string() const;

	[[nodiscard]] Rational abs() const;
	[[nodiscard]] Rational inverse() const;
	[[nodiscard]] Rational pow(long exponent) const;
	/// Largest integer not above the value.
	[[nodiscard]] mpz_class floor() const;

	Rational &operator+=(const Rational &o) { value_ += o.value_; return *this; }
	Rational &operator-=(const Rational &o) { value_ -= o.value_; return *this; }
	Rational &operator*=(const Rational &o) { value_ *= o.value_; return *this; }
	Rational &operator/=(const Rational &o);

	friend Rational operator+(Rational a, const Rational &b) { return a += b; }
	friend Rational operator-(Rational a, const Rational &b) { return a -= b; }
	friend Rational operator*(Rational a, const Rational &b) { return a *= b; }
	friend Rational operator/(Rational a, const Rational &b) { return a /= b; }
	friend Rational operator-(const Rational &a) { return Rational(mpq_class(-a.value_)); }

	friend bool operator==(const Rational &a, const Rational &b) { return a.value_ == b.value_; }
	friend std::strong_ordering operator<=>(const Rational &a, const Rational &b) {
		const int c = cmp(a.value_, b.value_);
		return c < 0 ? std::strong_ordering::less
		       : c > 0 ? std::strong_ordering::greater
		               : std::strong_ordering::equal;
	}

	friend std::ostream &operator<<(std::ostream &os, const Rational &r);

private:
	mpq_class value_{0};
};

/// Largest rational g such that every value is an integer multiple of g.
/// Throws InvalidArgument on an empty list or non-positive entries.
Rational rat_gcd(std::span<const Rational> values);

Rational factorial(unsigned n);

} // namespace traceexpr

template <> struct std::hash<traceexpr::Rational> {
	std::size_t operator()(const traceexpr::Rational &r) const noexcept {
		return std::hash<std::string>{}(r.to_string());
	}
};
