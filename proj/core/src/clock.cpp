#include "traceexpr/clock.hpp"

#include "traceexpr/error.hpp"

#include <algorithm>

namespace traceexpr {

struct ClockConstraint::Node {
	Kind kind;
	ClockId clock = 0;
	ClockId other = 0;
	Rational constant;
	std::vector<ClockConstraint> children;
};

namespace {

constexpr int kOrPrec = 1;
constexpr int kAndPrec = 2;
constexpr int kNotPrec = 3;
constexpr int kAtomPrec = 3;
constexpr int kPrimaryPrec = 5;

std::string clock_name(std::span<const std::string> names, ClockId c) {
	return c < names.size() ? names[c] : "c" + std::to_string(c);
}

} // namespace

ClockConstraint ClockConstraint::truth() {
	static const ClockConstraint t(std::make_shared<const Node>(Node{Kind::True, 0, 0, 0, {}}));
	return t;
}

ClockConstraint ClockConstraint::lt(ClockId clock, const Rational &c) {
	return ClockConstraint(std::make_shared<const Node>(Node{Kind::Lt, clock, 0, c, {}}));
}
ClockConstraint ClockConstraint::le(ClockId clock, const Rational &c) {
	return ClockConstraint(std::make_shared<const Node>(Node{Kind::Le, clock, 0, c, {}}));
}
ClockConstraint ClockConstraint::gt(ClockId clock, const Rational &c) {
	return ClockConstraint(std::make_shared<const Node>(Node{Kind::Gt, clock, 0, c, {}}));
}
ClockConstraint ClockConstraint::ge(ClockId clock, const Rational &c) {
	return ClockConstraint(std::make_shared<const Node>(Node{Kind::Ge, clock, 0, c, {}}));
}
ClockConstraint ClockConstraint::diag_le(ClockId clock, ClockId other, const Rational &c) {
	return ClockConstraint(std::make_shared<const Node>(Node{Kind::DiagLe, clock, other, c, {}}));
}
ClockConstraint ClockConstraint::diag_lt(ClockId clock, ClockId other, const Rational &c) {
	return ClockConstraint(std::make_shared<const Node>(Node{Kind::DiagLt, clock, other, c, {}}));
}
ClockConstraint ClockConstraint::negation(const ClockConstraint &a) {
	return ClockConstraint(std::make_shared<const Node>(Node{Kind::Not, 0, 0, 0, {a}}));
}
ClockConstraint ClockConstraint::disjunction(const ClockConstraint &a, const ClockConstraint &b) {
	return ClockConstraint(std::make_shared<const Node>(Node{Kind::Or, 0, 0, 0, {a, b}}));
}
ClockConstraint ClockConstraint::conjunction(const ClockConstraint &a, const ClockConstraint &b) {
	return ClockConstraint(std::make_shared<const Node>(Node{Kind::And, 0, 0, 0, {a, b}}));
}

ClockConstraint::Kind ClockConstraint::kind() const { return node_->kind; }

bool ClockConstraint::is_atom() const {
	switch(node_->kind) {
	case Kind::Lt:
	case Kind::Le:
	case Kind::Gt:
	case Kind::Ge:
	case Kind::DiagLe:
	case Kind::DiagLt:
		return true;
	default:
		return false;
	}
}

bool ClockConstraint::is_diagonal() const { return node_->kind == Kind::DiagLe || node_->kind == Kind::DiagLt; }

ClockId ClockConstraint::clock() const {
	if(!is_atom()) {
		throw InvalidArgument("clock() on a non-atomic constraint");
	}
	return node_->clock;
}

ClockId ClockConstraint::other() const {
	if(!is_diagonal()) {
		throw InvalidArgument("other() on a non-diagonal constraint");
	}
	return node_->other;
}

const Rational &ClockConstraint::constant() const {
	if(!is_atom()) {
		throw InvalidArgument("constant() on a non-atomic constraint");
	}
	return node_->constant;
}

const ClockConstraint &ClockConstraint::lhs() const {
	if(node_->children.empty()) {
		throw InvalidArgument("constraint has no operands");
	}
	return node_->children[0];
}

const ClockConstraint &ClockConstraint::rhs() const {
	if(node_->children.size() < 2) {
		throw InvalidArgument("constraint has no second operand");
	}
	return node_->children[1];
}

std::size_t ClockConstraint::clock_bound() const {
	if(is_atom()) {
		std::size_t b = node_->clock + 1;
		if(is_diagonal()) {
			b = std::max(b, node_->other + 1);
		}
		return b;
	}
	std::size_t b = 0;
	for(const auto &c : node_->children) {
		b = std::max(b, c.clock_bound());
	}
	return b;
}

bool ClockConstraint::contains_diagonal() const {
	if(is_diagonal()) {
		return true;
	}
	return std::any_of(node_->children.begin(), node_->children.end(),
	                   [](const ClockConstraint &c) { return c.contains_diagonal(); });
}

std::vector<ClockConstraint> ClockConstraint::atoms() const {
	if(is_atom()) {
		return {*this};
	}
	std::vector<ClockConstraint> out;
	for(const auto &c : node_->children) {
		auto sub = c.atoms();
		out.insert(out.end(), sub.begin(), sub.end());
	}
	return out;
}

std::string ClockConstraint::to_string(std::span<const std::string> clock_names) const {
	return print(clock_names, 0);
}

std::string ClockConstraint::print(std::span<const std::string> names, int context) const {
	std::string s;
	int prec = kPrimaryPrec;
	const auto &n = *node_;
	auto atom = [&](const char *op) {
		prec = kAtomPrec;
		return clock_name(names, n.clock) + " " + op + " " + n.constant.to_string();
	};
	auto diag = [&](const char *op) {
		prec = kAtomPrec;
		std::string r = clock_name(names, n.clock) + " " + op + " " + clock_name(names, n.other);
		if(n.constant.sign() > 0) {
			r += " + " + n.constant.to_string();
		} else if(n.constant.sign() < 0) {
			r += " - " + n.constant.abs().to_string();
		}
		return r;
	};
	switch(n.kind) {
	case Kind::True:
		s = "true";
		break;
	case Kind::Lt:
		s = atom("<");
		break;
	case Kind::Le:
		s = atom("<=");
		break;
	case Kind::Gt:
		s = atom(">");
		break;
	case Kind::Ge:
		s = atom(">=");
		break;
	case Kind::DiagLe:
		s = diag("<=");
		break;
	case Kind::DiagLt:
		s = diag("<");
		break;
	case Kind::Not:
		prec = kNotPrec;
		s = "!" + lhs().print(names, kNotPrec + 1);
		break;
	case Kind::Or:
		prec = kOrPrec;
		s = lhs().print(names, kOrPrec) + " || " + rhs().print(names, kOrPrec + 1);
		break;
	case Kind::And:
		prec = kAndPrec;
		s = lhs().print(names, kAndPrec) + " && " + rhs().print(names, kAndPrec + 1);
		break;
	}
	return prec < context ? "(" + s + ")" : s;
}

bool operator==(const ClockConstraint &a, const ClockConstraint &b) {
	if(a.node_ == b.node_) {
		return true;
	}
	const auto &x = *a.node_;
	const auto &y = *b.node_;
	return x.kind == y.kind && x.clock == y.clock && x.other == y.other && x.constant == y.constant &&
	       x.children == y.children;
}

bool constraint_sat(std::span<const Rational> iota, const ClockConstraint &con) {
	using Kind = ClockConstraint::Kind;
	if(con.clock_bound() > iota.size()) {
		throw InvalidArgument("dangling clock index in constraint");
	}
	switch(con.kind()) {
	case Kind::True:
		return true;
	case Kind::Lt:
		return iota[con.clock()] < con.constant();
	case Kind::Le:
		return iota[con.clock()] <= con.constant();
	case Kind::Gt:
		return iota[con.clock()] > con.constant();
	case Kind::Ge:
		return iota[con.clock()] >= con.constant();
	case Kind::DiagLe:
		return iota[con.clock()] <= iota[con.other()] + con.constant();
	case Kind::DiagLt:
		return iota[con.clock()] < iota[con.other()] + con.constant();
	case Kind::Not:
		return !constraint_sat(iota, con.lhs());
	case Kind::Or:
		return constraint_sat(iota, con.lhs()) || constraint_sat(iota, con.rhs());
	case Kind::And:
		return constraint_sat(iota, con.lhs()) && constraint_sat(iota, con.rhs());
	}
	return false;
}

std::vector<Rational> max_constants(std::span<const ClockConstraint> guards, std::size_t clock_count) {
	std::vector<Rational> out(clock_count, Rational(0));
	for(const auto &g : guards) {
		for(const auto &a : g.atoms()) {
			const Rational c = a.is_diagonal() ? a.constant().abs() : a.constant();
			if(a.clock() < clock_count) {
				out[a.clock()] = std::max(out[a.clock()], c);
			}
			if(a.is_diagonal() && a.other() < clock_count) {
				out[a.other()] = std::max(out[a.other()], c);
			}
		}
	}
	return out;
}

} // namespace traceexpr
