#include "traceexpr/func_expr.hpp"

#include "traceexpr/error.hpp"

#include <cmath>

namespace traceexpr {

struct FuncExpr::Node {
	Kind kind;
	Rational value;
	std::size_t index = 0;
	unsigned exponent = 0;
	std::vector<FuncExpr> children;
};

namespace {

// Printing precedence: higher binds tighter.
constexpr int kSumPrec = 1;
constexpr int kProductPrec = 2;
constexpr int kUnaryPrec = 3;
constexpr int kPowerPrec = 4;
constexpr int kPrimaryPrec = 5;

} // namespace

FuncExpr FuncExpr::constant(const Rational &value) {
	return FuncExpr(std::make_shared<const Node>(Node{Kind::Constant, value, 0, 0, {}}));
}

FuncExpr FuncExpr::variable(std::size_t index) {
	return FuncExpr(std::make_shared<const Node>(Node{Kind::Variable, 0, index, 0, {}}));
}

FuncExpr FuncExpr::from_polynomial(const Polynomial &p) {
	if(p.is_zero()) {
		return constant(0);
	}
	std::optional<FuncExpr> sum;
	for(auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
		const auto &[m, c] = *it;
		std::optional<FuncExpr> mono;
		for(std::size_t i = 0; i < m.size(); ++i) {
			if(m[i] == 0) {
				continue;
			}
			FuncExpr factor = m[i] == 1 ? variable(i) : pow(variable(i), m[i]);
			mono = mono ? *mono * factor : factor;
		}
		const bool negative = c.sign() < 0;
		const Rational mag = c.abs();
		FuncExpr term = !mono ? constant(mag) : mag == Rational(1) ? *mono : constant(mag) * *mono;
		if(!sum) {
			sum = negative ? -term : term;
		} else {
			sum = negative ? *sum - term : *sum + term;
		}
	}
	return *sum;
}

FuncExpr operator+(const FuncExpr &a, const FuncExpr &b) {
	return FuncExpr(std::make_shared<const FuncExpr::Node>(
	    FuncExpr::Node{FuncExpr::Kind::Sum, 0, 0, 0, {a, b}}));
}

FuncExpr operator-(const FuncExpr &a, const FuncExpr &b) { return a + (-b); }

FuncExpr operator*(const FuncExpr &a, const FuncExpr &b) {
	return FuncExpr(std::make_shared<const FuncExpr::Node>(
	    FuncExpr::Node{FuncExpr::Kind::Product, 0, 0, 0, {a, b}}));
}

FuncExpr operator-(const FuncExpr &a) {
	return FuncExpr(std::make_shared<const FuncExpr::Node>(FuncExpr::Node{FuncExpr::Kind::Negate, 0, 0, 0, {a}}));
}

FuncExpr pow(const FuncExpr &base, unsigned exponent) {
	return FuncExpr(
	    std::make_shared<const FuncExpr::Node>(FuncExpr::Node{FuncExpr::Kind::Power, 0, 0, exponent, {base}}));
}

FuncExpr exp(const FuncExpr &argument) {
	return FuncExpr(std::make_shared<const FuncExpr::Node>(FuncExpr::Node{FuncExpr::Kind::Exp, 0, 0, 0, {argument}}));
}

FuncExpr::Kind FuncExpr::kind() const { return node_->kind; }
const Rational &FuncExpr::value() const { return node_->value; }
std::size_t FuncExpr::index() const { return node_->index; }
unsigned FuncExpr::exponent() const { return node_->exponent; }
const FuncExpr &FuncExpr::lhs() const { return node_->children.at(0); }
const FuncExpr &FuncExpr::rhs() const { return node_->children.at(1); }

std::size_t FuncExpr::variable_bound() const {
	if(node_->kind == Kind::Variable) {
		return node_->index + 1;
	}
	std::size_t bound = 0;
	for(const auto &c : node_->children) {
		bound = std::max(bound, c.variable_bound());
	}
	return bound;
}

bool FuncExpr::contains_exp() const {
	if(node_->kind == Kind::Exp) {
		return true;
	}
	for(const auto &c : node_->children) {
		if(c.contains_exp()) {
			return true;
		}
	}
	return false;
}

double FuncExpr::evaluate(std::span<const double> point) const {
	switch(node_->kind) {
	case Kind::Constant: return node_->value.to_double();
	case Kind::Variable:
		if(node_->index >= point.size()) {
			throw DimensionError("variable x" + std::to_string(node_->index) + " outside evaluation point");
		}
		return point[node_->index];
	case Kind::Sum: return lhs().evaluate(point) + rhs().evaluate(point);
	case Kind::Product: return lhs().evaluate(point) * rhs().evaluate(point);
	case Kind::Negate: return -lhs().evaluate(point);
	case Kind::Power: return std::pow(lhs().evaluate(point), static_cast<double>(node_->exponent));
	case Kind::Exp: return std::exp(lhs().evaluate(point));
	}
	return 0.0;
}

std::optional<Polynomial> FuncExpr::to_polynomial(std::size_t arity) const {
	switch(node_->kind) {
	case Kind::Constant: return Polynomial::constant(arity, node_->value);
	case Kind::Variable: return Polynomial::variable(arity, node_->index);
	case Kind::Sum:
	case Kind::Product: {
		auto a = lhs().to_polynomial(arity);
		auto b = rhs().to_polynomial(arity);
		if(!a || !b) {
			return std::nullopt;
		}
		return node_->kind == Kind::Sum ? *a + *b : *a * *b;
	}
	case Kind::Negate: {
		auto a = lhs().to_polynomial(arity);
		if(!a) {
			return std::nullopt;
		}
		return -*a;
	}
	case Kind::Power: {
		auto a = lhs().to_polynomial(arity);
		if(!a) {
			return std::nullopt;
		}
		return a->pow(node_->exponent);
	}
	case Kind::Exp: return std::nullopt;
	}
	return std::nullopt;
}

std::string FuncExpr::to_string(std::span<const std::string> names) const { return print(names, 0); }

std::string FuncExpr::print(std::span<const std::string> names, int context) const {
	int prec = kPrimaryPrec;
	std::string s;
	switch(node_->kind) {
	case Kind::Constant: {
		const Rational &v = node_->value;
		if(v.sign() < 0) {
			prec = kUnaryPrec;
			s = "-" + FuncExpr::constant(v.abs()).print(names, kUnaryPrec);
		} else {
			prec = v.is_integer() ? kPrimaryPrec : kPowerPrec;
			s = v.to_string();
		}
		break;
	}
	case Kind::Variable:
		s = node_->index < names.size() ? names[node_->index] : "x" + std::to_string(node_->index);
		break;
	case Kind::Sum: {
		prec = kSumPrec;
		const FuncExpr &r = rhs();
		if(r.kind() == Kind::Negate) {
			s = lhs().print(names, kSumPrec) + " - " + r.lhs().print(names, kProductPrec);
		} else {
			s = lhs().print(names, kSumPrec) + " + " + r.print(names, kProductPrec);
		}
		break;
	}
	case Kind::Product:
		prec = kProductPrec;
		s = lhs().print(names, kProductPrec) + "*" + rhs().print(names, kUnaryPrec);
		break;
	case Kind::Negate:
		prec = kUnaryPrec;
		s = "-" + lhs().print(names, kUnaryPrec);
		break;
	case Kind::Power:
		prec = kPowerPrec;
		s = lhs().print(names, kPrimaryPrec) + "^" + std::to_string(node_->exponent);
		break;
	case Kind::Exp: s = "exp(" + lhs().print(names, 0) + ")"; break;
	}
	return prec < context ? "(" + s + ")" : s;
}

bool operator==(const FuncExpr &a, const FuncExpr &b) {
	if(a.node_ == b.node_) {
		return true;
	}
	const auto &x = *a.node_;
	const auto &y = *b.node_;
	return x.kind == y.kind && x.value == y.value && x.index == y.index && x.exponent == y.exponent
	       && x.children == y.children;
}

namespace {

Polynomial series(const FuncExpr &f, unsigned degree, std::size_t arity) {
	using Kind = FuncExpr::Kind;
	switch(f.kind()) {
	case Kind::Constant: return Polynomial::constant(arity, f.value());
	case Kind::Variable: return Polynomial::variable(arity, f.index()).truncated(degree);
	case Kind::Sum: return series(f.lhs(), degree, arity) + series(f.rhs(), degree, arity);
	case Kind::Product:
		return (series(f.lhs(), degree, arity) * series(f.rhs(), degree, arity)).truncated(degree);
	case Kind::Negate: return -series(f.lhs(), degree, arity);
	case Kind::Power: {
		const Polynomial base = series(f.lhs(), degree, arity);
		Polynomial result = Polynomial::constant(arity, 1);
		for(unsigned i = 0; i < f.exponent(); ++i) {
			result = (result * base).truncated(degree);
		}
		return result;
	}
	case Kind::Exp: {
		const Polynomial inner = series(f.lhs(), degree, arity);
		const Rational c0 = inner.coefficient(Monomial(arity, 0));
		if(!c0.is_zero()) {
			throw InvalidArgument("exp argument must vanish at the origin for a rational Taylor series (got constant term "
			                      + c0.to_string() + ")");
		}
		// exp(h) = sum h^n / n!; h has no constant term so h^n starts at degree n.
		Polynomial result = Polynomial::constant(arity, 1);
		Polynomial power = Polynomial::constant(arity, 1);
		for(unsigned n = 1; n <= degree; ++n) {
			power = (power * inner).truncated(degree);
			result += power * factorial(n).inverse();
		}
		return result;
	}
	}
	return Polynomial(arity);
}

} // namespace

Polynomial taylor_truncate(const FuncExpr &f, unsigned degree, std::size_t arity) {
	if(f.variable_bound() > arity) {
		throw DimensionError("expression uses x" + std::to_string(f.variable_bound() - 1) + " with arity "
		                     + std::to_string(arity));
	}
	return series(f, degree, arity).truncated(degree);
}

bool has_rational_taylor_series(const FuncExpr &f) {
	try {
		(void)taylor_truncate(f, 0, f.variable_bound());
		return true;
	} catch(const InvalidArgument &) {
		return false;
	}
}

} // namespace traceexpr
