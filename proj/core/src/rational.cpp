#include "traceexpr/rational.hpp"

#include "traceexpr/error.hpp"

#include <cctype>
#include <ostream>

namespace traceexpr {

Rational::Rational(long numerator, long denominator) {
	if(denominator == 0) {
		throw InvalidArgument("rational with zero denominator");
	}
	value_ = mpq_class(numerator, denominator);
	value_.canonicalize();
}

Rational::Rational(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

namespace {

bool all_digits(std::string_view s) {
	if(s.empty()) {
		return false;
	}
	for(char c : s) {
		if(!std::isdigit(static_cast<unsigned char>(c))) {
			return false;
		}
	}
	return true;
}

mpz_class parse_integer(std::string_view s) {
	bool negative = false;
	if(!s.empty() && (s.front() == '-' || s.front() == '+')) {
		negative = s.front() == '-';
		s.remove_prefix(1);
	}
	if(!all_digits(s)) {
		throw InvalidArgument("malformed number");
	}
	mpz_class v(std::string(s), 10);
	return negative ? mpz_class(-v) : v;
}

mpz_class pow10(unsigned long e) {
	mpz_class r;
	mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
	return r;
}

} // namespace

Rational Rational::parse(std::string_view text) {
	const std::string original(text);
	try {
		if(text.empty()) {
			throw InvalidArgument("empty number");
		}
		if(const auto slash = text.find('/'); slash != std::string_view::npos) {
			const mpz_class num = parse_integer(text.substr(0, slash));
			const mpz_class den = parse_integer(text.substr(slash + 1));
			if(den == 0) {
				throw InvalidArgument("zero denominator");
			}
			return Rational(mpq_class(num, den));
		}
		long exponent = 0;
		if(const auto e = text.find_first_of("eE"); e != std::string_view::npos) {
			exponent = parse_integer(text.substr(e + 1)).get_si();
			text = text.substr(0, e);
		}
		bool negative = false;
		if(!text.empty() && (text.front() == '-' || text.front() == '+')) {
			negative = text.front() == '-';
			text.remove_prefix(1);
		}
		std::string digits;
		long scale = 0;
		if(const auto dot = text.find('.'); dot != std::string_view::npos) {
			const auto frac = text.substr(dot + 1);
			digits = std::string(text.substr(0, dot)) + std::string(frac);
			scale = static_cast<long>(frac.size());
		} else {
			digits = std::string(text);
		}
		if(!all_digits(digits)) {
			throw InvalidArgument("malformed number");
		}
		mpq_class value{mpz_class(digits, 10)};
		const long shift = exponent - scale;
		if(shift >= 0) {
			value *= pow10(static_cast<unsigned long>(shift));
		} else {
			value /= pow10(static_cast<unsigned long>(-shift));
		}
		value.canonicalize();
		return Rational(negative ? mpq_class(-value) : value);
	} catch(const InvalidArgument &) {
		throw InvalidArgument("cannot parse rational '" + original + "'");
	}
}

std::string Rational::to_string() const {
	if(is_integer()) {
		return value_.get_num().get_str();
	}
	return value_.get_str();
}

std::string Rational::to_fraction_string() const {
	return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

Rational Rational::abs() const { return Rational(mpq_class(::abs(value_))); }

Rational Rational::inverse() const {
	if(is_zero()) {
		throw InvalidArgument("inverse of zero");
	}
	return Rational(mpq_class(1 / value_));
}

Rational Rational::pow(long exponent) const {
	if(exponent < 0) {
		return inverse().pow(-exponent);
	}
	mpz_class num;
	mpz_class den;
	mpz_pow_ui(num.get_mpz_t(), value_.get_num_mpz_t(), static_cast<unsigned long>(exponent));
	mpz_pow_ui(den.get_mpz_t(), value_.get_den_mpz_t(), static_cast<unsigned long>(exponent));
	return Rational(mpq_class(num, den));
}

mpz_class Rational::floor() const {
	mpz_class r;
	mpz_fdiv_q(r.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
	return r;
}

Rational &Rational::operator/=(const Rational &o) {
	if(o.is_zero()) {
		throw InvalidArgument("division by zero");
	}
	value_ /= o.value_;
	return *this;
}

std::ostream &operator<<(std::ostream &os, const Rational &r) { return os << r.to_string(); }

Rational rat_gcd(std::span<const Rational> values) {
	if(values.empty()) {
		throw InvalidArgument("rat_gcd of an empty list");
	}
	mpz_class num_gcd = 0;
	mpz_class den_lcm = 1;
	for(const auto &v : values) {
		if(v.sign() <= 0) {
			throw InvalidArgument("rat_gcd requires positive values, got " + v.to_string());
		}
		mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), v.raw().get_num_mpz_t());
		mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), v.raw().get_den_mpz_t());
	}
	return Rational(mpq_class(num_gcd, den_lcm));
}

Rational factorial(unsigned n) {
	mpz_class r;
	mpz_fac_ui(r.get_mpz_t(), n);
	return Rational(mpq_class(r));
}

} // namespace traceexpr
