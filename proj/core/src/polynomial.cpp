#include "traceexpr/polynomial.hpp"

#include "traceexpr/error.hpp"

#include <numeric>

namespace traceexpr {

namespace {

std::size_t degree_of(const Monomial &m) { return std::accumulate(m.begin(), m.end(), std::size_t{0}); }

} // namespace

Polynomial Polynomial::constant(std::size_t arity, const Rational &c) {
	Polynomial p(arity);
	p.add_term(Monomial(arity, 0), c);
	return p;
}

Polynomial Polynomial::variable(std::size_t arity, std::size_t index) {
	if(index >= arity) {
		throw DimensionError("variable index " + std::to_string(index) + " in arity " + std::to_string(arity));
	}
	Monomial m(arity, 0);
	m[index] = 1;
	Polynomial p(arity);
	p.add_term(m, 1);
	return p;
}

std::size_t Polynomial::total_degree() const {
	std::size_t d = 0;
	for(const auto &[m, c] : terms_) {
		d = std::max(d, degree_of(m));
	}
	return d;
}

Rational Polynomial::coefficient(const Monomial &m) const {
	const auto it = terms_.find(m);
	return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const Monomial &m, const Rational &c) {
	if(m.size() != arity_) {
		throw DimensionError("monomial of length " + std::to_string(m.size()) + " in arity " + std::to_string(arity_));
	}
	if(c.is_zero()) {
		return;
	}
	auto [it, inserted] = terms_.try_emplace(m, c);
	if(!inserted) {
		it->second += c;
		if(it->second.is_zero()) {
			terms_.erase(it);
		}
	}
}

Rational Polynomial::evaluate(std::span<const Rational> point) const {
	if(point.size() != arity_) {
		throw DimensionError("evaluation point");
	}
	Rational sum = 0;
	for(const auto &[m, c] : terms_) {
		Rational term = c;
		for(std::size_t i = 0; i < arity_; ++i) {
			if(m[i] != 0) {
				term *= point[i].pow(m[i]);
			}
		}
		sum += term;
	}
	return sum;
}

double Polynomial::evaluate(std::span<const double> point) const {
	if(point.size() != arity_) {
		throw DimensionError("evaluation point");
	}
	double sum = 0.0;
	for(const auto &[m, c] : terms_) {
		double term = c.to_double();
		for(std::size_t i = 0; i < arity_; ++i) {
			for(std::uint32_t e = 0; e < m[i]; ++e) {
				term *= point[i];
			}
		}
		sum += term;
	}
	return sum;
}

Polynomial Polynomial::truncated(std::size_t degree) const {
	Polynomial out(arity_);
	for(const auto &[m, c] : terms_) {
		if(degree_of(m) <= degree) {
			out.terms_.emplace(m, c);
		}
	}
	return out;
}

Polynomial Polynomial::abs_coefficients() const {
	Polynomial out(arity_);
	for(const auto &[m, c] : terms_) {
		out.terms_.emplace(m, c.abs());
	}
	return out;
}

Polynomial Polynomial::pow(unsigned exponent) const {
	Polynomial result = constant(arity_, 1);
	Polynomial base = *this;
	while(exponent > 0) {
		if(exponent & 1U) {
			result = result * base;
		}
		exponent >>= 1U;
		if(exponent > 0) {
			base = base * base;
		}
	}
	return result;
}

void Polynomial::check_arity(const Polynomial &o) const {
	if(o.arity_ != arity_) {
		throw DimensionError("polynomial arities " + std::to_string(arity_) + " and " + std::to_string(o.arity_));
	}
}

Polynomial &Polynomial::operator+=(const Polynomial &o) {
	check_arity(o);
	for(const auto &[m, c] : o.terms_) {
		add_term(m, c);
	}
	return *this;
}

Polynomial &Polynomial::operator-=(const Polynomial &o) {
	check_arity(o);
	for(const auto &[m, c] : o.terms_) {
		add_term(m, -c);
	}
	return *this;
}

Polynomial &Polynomial::operator*=(const Rational &c) {
	if(c.is_zero()) {
		terms_.clear();
		return *this;
	}
	for(auto &[m, coeff] : terms_) {
		coeff *= c;
	}
	return *this;
}

Polynomial operator*(const Polynomial &a, const Polynomial &b) {
	a.check_arity(b);
	Polynomial out(a.arity_);
	Monomial m(a.arity_);
	for(const auto &[ma, ca] : a.terms_) {
		for(const auto &[mb, cb] : b.terms_) {
			for(std::size_t i = 0; i < a.arity_; ++i) {
				m[i] = ma[i] + mb[i];
			}
			out.add_term(m, ca * cb);
		}
	}
	return out;
}

std::string Polynomial::to_string(std::span<const std::string> names) const {
	if(terms_.empty()) {
		return "0";
	}
	std::string s;
	bool first = true;
	// Highest degree first reads more naturally.
	for(auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
		const auto &[m, c] = *it;
		Rational coeff = c;
		if(first) {
			if(coeff.sign() < 0) {
				s += "-";
				coeff = -coeff;
			}
		} else {
			s += coeff.sign() < 0 ? " - " : " + ";
			coeff = coeff.abs();
		}
		first = false;
		std::string mono;
		for(std::size_t i = 0; i < arity_; ++i) {
			if(m[i] == 0) {
				continue;
			}
			if(!mono.empty()) {
				mono += "*";
			}
			mono += i < names.size() ? names[i] : "x" + std::to_string(i);
			if(m[i] > 1) {
				mono += "^" + std::to_string(m[i]);
			}
		}
		if(mono.empty()) {
			s += coeff.to_string();
		} else if(coeff == Rational(1)) {
			s += mono;
		} else {
			s += coeff.to_string() + "*" + mono;
		}
	}
	return s;
}

Polynomial poly_mul(const Polynomial &p, const Polynomial &q) { return p * q; }

Rational poly_integrate(const Polynomial &p, const Box &region) {
	if(p.arity() != region.arity()) {
		throw DimensionError();
	}
	Rational total = 0;
	for(const auto &[m, c] : p.terms()) {
		Rational term = c;
		for(std::size_t i = 0; i < m.size(); ++i) {
			const long e = static_cast<long>(m[i]) + 1;
			term *= (region[i].hi.pow(e) - region[i].lo.pow(e)) / Rational(e);
			if(term.is_zero()) {
				break;
			}
		}
		total += term;
	}
	return total;
}

Rational poly_integrate(const Polynomial &p, std::span<const Box> region) {
	Rational total = 0;
	for(const auto &cell : disjoint_cells(region)) {
		total += poly_integrate(p, cell);
	}
	return total;
}

} // namespace traceexpr
