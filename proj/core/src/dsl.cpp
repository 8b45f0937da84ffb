#include "traceexpr/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace traceexpr {

std::string SourceSpan::to_string() const { return std::to_string(begin.line) + ":" + std::to_string(begin.column); }

std::string Diagnostic::to_string(std::string_view source_name) const {
	std::string out;
	if(!source_name.empty()) {
		out += std::string(source_name) + ":";
	}
	out += span.to_string() + ": " + message;
	for(const auto &r : related) {
		out += " (see " + r.to_string() + ")";
	}
	return out;
}

namespace {

std::string join_messages(const std::vector<Diagnostic> &diags) {
	std::string out;
	for(const auto &d : diags) {
		if(!out.empty()) {
			out += "\n";
		}
		out += d.to_string();
	}
	return out;
}

} // namespace

ParseError::ParseError(std::vector<Diagnostic> diagnostics)
    : Error(join_messages(diagnostics)), diagnostics_(std::move(diagnostics)) {}

namespace {

enum class Tok { Word, Number, Symbol, End };

struct Token {
	Tok kind = Tok::End;
	std::string text;
	SourceSpan span;
};

[[noreturn]] void fail(const SourceSpan &span, std::string message, std::vector<SourceSpan> related = {}) {
	throw ParseError({Diagnostic{span, std::move(message), std::move(related)}});
}

bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

std::vector<Token> lex(std::string_view text) {
	std::vector<Token> out;
	SourcePos pos;
	std::size_t i = 0;
	auto advance = [&](std::size_t n) {
		for(std::size_t k = 0; k < n; ++k, ++i) {
			if(text[i] == '\n') {
				++pos.line;
				pos.column = 1;
			} else {
				++pos.column;
			}
		}
	};
	static const std::vector<std::string_view> two = {"->", "<=", ">=", "&&", "||"};
	static const std::string_view one = "{}()[];,+-*/^<>=!";
	while(i < text.size()) {
		const char c = text[i];
		if(std::isspace(static_cast<unsigned char>(c)) != 0) {
			advance(1);
			continue;
		}
		if(c == '#') {
			while(i < text.size() && text[i] != '\n') {
				advance(1);
			}
			continue;
		}
		const SourcePos start = pos;
		if(word_char(c)) {
			std::size_t j = i;
			while(j < text.size() && word_char(text[j])) {
				++j;
			}
			std::string w(text.substr(i, j - i));
			const bool digits = std::all_of(w.begin(), w.end(), [](char d) { return std::isdigit(static_cast<unsigned char>(d)) != 0; });
			advance(j - i);
			out.push_back({digits ? Tok::Number : Tok::Word, std::move(w), {start, pos}});
			continue;
		}
		bool matched = false;
		for(auto s : two) {
			if(text.substr(i, 2) == s) {
				advance(2);
				out.push_back({Tok::Symbol, std::string(s), {start, pos}});
				matched = true;
				break;
			}
		}
		if(matched) {
			continue;
		}
		if(one.find(c) != std::string_view::npos) {
			advance(1);
			out.push_back({Tok::Symbol, std::string(1, c), {start, pos}});
			continue;
		}
		SourcePos end = start;
		++end.column;
		std::ostringstream msg;
		if(std::isprint(static_cast<unsigned char>(c)) != 0) {
			msg << "unexpected character '" << c << "'";
		} else {
			msg << "unexpected byte 0x" << std::hex << static_cast<int>(static_cast<unsigned char>(c));
		}
		fail({start, end}, msg.str());
	}
	out.push_back({Tok::End, "", {pos, pos}});
	return out;
}

struct Named {
	std::string text;
	SourceSpan span;
};

struct RawClock {
	Named name;
	std::optional<Interval> domain;
	SourceSpan domain_span;
};

template <typename T> struct Attr {
	std::optional<T> value;
	SourceSpan span;
};

struct RawEdge {
	Named source;
	Named target;
	Named action;
	SourceSpan span;
	Attr<Rational> prob;
	Attr<ClockConstraint> guard;
	Attr<std::vector<Named>> resets;
	Attr<FuncExpr> fn;
	Attr<std::vector<Interval>> dom;
};

struct RawWeights {
	WeightingMap::Scope scope = WeightingMap::Scope::Actions;
	std::vector<std::pair<Named, Rational>> entries;
	SourceSpan span;
};

struct RawDoc {
	MachineClass cls = MachineClass::Nfa;
	Named name;
	Attr<std::vector<Named>> states;
	Attr<Named> init;
	Attr<std::vector<Named>> actions;
	Attr<std::vector<RawClock>> clocks;
	Attr<unsigned> degree;
	Attr<ProbabilityMode> mode;
	std::vector<RawEdge> edges;
	Attr<RawWeights> weights;
};

class Parser {
public:
	explicit Parser(std::string_view text) : toks_(lex(text)) {}

	RawDoc document() {
		RawDoc doc;
		const Token &head = peek();
		const auto cls = head.kind == Tok::Word ? class_from_keyword(head.text) : std::nullopt;
		if(!cls) {
			fail(head.span, "expected machine class keyword (nfa, ta, pa, pta, sta, tapd)");
		}
		next();
		doc.cls = *cls;
		doc.name = name("machine name");
		expect("{");
		while(!at("}")) {
			item(doc);
		}
		next();
		if(peek().kind != Tok::End) {
			fail(peek().span, "unexpected text after the machine body");
		}
		return doc;
	}

	RawWeights weights_only() {
		RawWeights w = weights_block();
		if(peek().kind != Tok::End) {
			fail(peek().span, "unexpected text after the weights block");
		}
		return w;
	}

private:
	const Token &peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
	const Token &next() {
		const Token &t = peek();
		if(pos_ < toks_.size() - 1) {
			++pos_;
		}
		return t;
	}
	bool at(std::string_view sym) const { return peek().kind == Tok::Symbol && peek().text == sym; }
	bool at_word(std::string_view w) const { return peek().kind == Tok::Word && peek().text == w; }

	static std::string describe(const Token &t) {
		return t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
	}

	const Token &expect(std::string_view sym) {
		if(!at(sym)) {
			fail(peek().span, "expected '" + std::string(sym) + "', found " + describe(peek()));
		}
		return next();
	}

	void expect_word(std::string_view w) {
		if(!at_word(w)) {
			fail(peek().span, "expected '" + std::string(w) + "', found " + describe(peek()));
		}
		next();
	}

	Named name(std::string_view what) {
		const Token &t = peek();
		if(t.kind != Tok::Word && t.kind != Tok::Number) {
			fail(t.span, "expected " + std::string(what) + ", found " + describe(t));
		}
		next();
		return {t.text, t.span};
	}

	std::vector<Named> names(std::string_view what) {
		std::vector<Named> out{name(what)};
		while(peek().kind == Tok::Word || peek().kind == Tok::Number) {
			out.push_back(name(what));
		}
		return out;
	}

	Rational rational() {
		const Token &t = peek();
		if(t.kind != Tok::Number) {
			fail(t.span, "expected a rational number, found " + describe(t));
		}
		next();
		mpz_class num(t.text);
		mpz_class den(1);
		if(at("/")) {
			next();
			const Token &d = peek();
			if(d.kind != Tok::Number) {
				fail(d.span, "expected a denominator, found " + describe(d));
			}
			next();
			den = mpz_class(d.text);
			if(den == 0) {
				fail(d.span, "zero denominator");
			}
		}
		return Rational(mpq_class(num, den));
	}

	Interval interval() {
		expect("[");
		Rational lo = rational();
		expect(",");
		Rational hi = rational();
		expect("]");
		return {std::move(lo), std::move(hi)};
	}

	template <typename T> void once(Attr<T> &slot, const SourceSpan &span, std::string_view what) {
		if(slot.value) {
			fail(span, "duplicate " + std::string(what), {slot.span});
		}
		slot.span = span;
	}

	void item(RawDoc &doc) {
		const Token &kw = peek();
		if(kw.kind != Tok::Word) {
			fail(kw.span, "expected a declaration, found " + describe(kw));
		}
		const SourceSpan span = kw.span;
		if(kw.text == "states") {
			next();
			once(doc.states, span, "states declaration");
			doc.states.value = names("state name");
		} else if(kw.text == "init") {
			next();
			once(doc.init, span, "init declaration");
			doc.init.value = name("state name");
		} else if(kw.text == "actions") {
			next();
			once(doc.actions, span, "actions declaration");
			doc.actions.value = names("action name");
		} else if(kw.text == "clocks") {
			next();
			once(doc.clocks, span, "clocks declaration");
			std::vector<RawClock> clocks;
			do {
				if(!clocks.empty()) {
					next();
				}
				RawClock c{name("clock name"), std::nullopt, {}};
				if(at_word("in")) {
					c.domain_span = next().span;
					c.domain = interval();
				}
				clock_index_.emplace(c.name.text, clock_index_.size());
				clocks.push_back(std::move(c));
			} while(at(","));
			doc.clocks.value = std::move(clocks);
		} else if(kw.text == "degree") {
			next();
			once(doc.degree, span, "degree declaration");
			const Token &t = peek();
			if(t.kind != Tok::Number || t.text.size() > 4) {
				fail(t.span, "expected a small non-negative integer degree, found " + describe(t));
			}
			next();
			doc.degree.value = static_cast<unsigned>(std::stoul(t.text));
		} else if(kw.text == "mode") {
			next();
			once(doc.mode, span, "mode declaration");
			if(at_word("direct")) {
				doc.mode.value = ProbabilityMode::Direct;
			} else if(at_word("normalized")) {
				doc.mode.value = ProbabilityMode::Normalized;
			} else {
				fail(peek().span, "expected 'direct' or 'normalized', found " + describe(peek()));
			}
			next();
		} else if(kw.text == "edge") {
			next();
			doc.edges.push_back(edge(span));
			return;
		} else if(kw.text == "weights") {
			once(doc.weights, span, "weights block");
			doc.weights.value = weights_block();
			return;
		} else {
			fail(span, "unknown declaration '" + kw.text + "'");
		}
		expect(";");
	}

	RawEdge edge(const SourceSpan &span) {
		RawEdge e;
		e.span = span;
		e.source = name("source state");
		expect("->");
		e.target = name("target state");
		expect_word("on");
		e.action = name("action name");
		while(!at(";")) {
			const Token &kw = peek();
			if(kw.kind != Tok::Word) {
				fail(kw.span, "expected an edge attribute or ';', found " + describe(kw));
			}
			const SourceSpan at_span = kw.span;
			if(kw.text == "prob") {
				next();
				once(e.prob, at_span, "prob attribute");
				e.prob.value = rational();
			} else if(kw.text == "when") {
				next();
				once(e.guard, at_span, "when attribute");
				e.guard.value = constraint();
			} else if(kw.text == "reset") {
				next();
				once(e.resets, at_span, "reset attribute");
				std::vector<Named> rs{name("clock name")};
				while(at(",")) {
					next();
					rs.push_back(name("clock name"));
				}
				e.resets.value = std::move(rs);
			} else if(kw.text == "fn") {
				next();
				once(e.fn, at_span, "fn attribute");
				expect("(");
				e.fn.value = expr();
				expect(")");
			} else if(kw.text == "dom") {
				next();
				once(e.dom, at_span, "dom attribute");
				std::vector<Interval> iv{interval()};
				while(at("[")) {
					iv.push_back(interval());
				}
				e.dom.value = std::move(iv);
			} else {
				fail(at_span, "unknown edge attribute '" + kw.text + "'");
			}
		}
		next();
		return e;
	}

	RawWeights weights_block() {
		RawWeights w;
		w.span = peek().span;
		expect_word("weights");
		if(at_word("actions")) {
			w.scope = WeightingMap::Scope::Actions;
		} else if(at_word("edges")) {
			w.scope = WeightingMap::Scope::Edges;
		} else {
			fail(peek().span, "expected 'actions' or 'edges', found " + describe(peek()));
		}
		next();
		expect("{");
		while(!at("}")) {
			Named key = name(w.scope == WeightingMap::Scope::Actions ? "action name" : "edge index");
			expect("=");
			Rational value = rational();
			expect(";");
			w.entries.emplace_back(std::move(key), std::move(value));
		}
		next();
		return w;
	}

	ClockId clock_ref() {
		const Token &t = peek();
		if(t.kind != Tok::Word) {
			fail(t.span, "expected a clock name, found " + describe(t));
		}
		const auto it = clock_index_.find(t.text);
		if(it == clock_index_.end()) {
			fail(t.span, "unknown clock '" + t.text + "'");
		}
		next();
		return it->second;
	}

	ClockConstraint constraint() {
		ClockConstraint c = conjunct();
		while(at("||")) {
			next();
			c = ClockConstraint::disjunction(c, conjunct());
		}
		return c;
	}

	ClockConstraint conjunct() {
		ClockConstraint c = negated();
		while(at("&&")) {
			next();
			c = ClockConstraint::conjunction(c, negated());
		}
		return c;
	}

	ClockConstraint negated() {
		if(at("!")) {
			next();
			return ClockConstraint::negation(negated());
		}
		if(at("(")) {
			next();
			ClockConstraint c = constraint();
			expect(")");
			return c;
		}
		if(at_word("true")) {
			next();
			return ClockConstraint::truth();
		}
		const ClockId x = clock_ref();
		const Token &op = peek();
		if(op.kind != Tok::Symbol || (op.text != "<" && op.text != "<=" && op.text != ">" && op.text != ">=")) {
			fail(op.span, "expected a comparison operator, found " + describe(op));
		}
		const std::string o = next().text;
		if(peek().kind == Tok::Number) {
			const Rational k = rational();
			if(o == "<") {
				return ClockConstraint::lt(x, k);
			}
			if(o == "<=") {
				return ClockConstraint::le(x, k);
			}
			if(o == ">") {
				return ClockConstraint::gt(x, k);
			}
			return ClockConstraint::ge(x, k);
		}
		const ClockId y = clock_ref();
		Rational k = 0;
		if(at("+") || at("-")) {
			const bool minus = next().text == "-";
			k = rational();
			if(minus) {
				k = -k;
			}
		}
		// x >= y + k is y <= x - k.
		if(o == "<") {
			return ClockConstraint::diag_lt(x, y, k);
		}
		if(o == "<=") {
			return ClockConstraint::diag_le(x, y, k);
		}
		if(o == ">") {
			return ClockConstraint::diag_lt(y, x, -k);
		}
		return ClockConstraint::diag_le(y, x, -k);
	}

	FuncExpr expr() {
		FuncExpr e = term();
		while(at("+") || at("-")) {
			const bool minus = next().text == "-";
			FuncExpr r = term();
			e = minus ? e - r : e + r;
		}
		return e;
	}

	FuncExpr term() {
		FuncExpr e = unary();
		while(at("*")) {
			next();
			e = e * unary();
		}
		return e;
	}

	FuncExpr unary() {
		if(at("-")) {
			next();
			return -unary();
		}
		FuncExpr base = primary();
		if(at("^")) {
			next();
			const Token &t = peek();
			if(t.kind != Tok::Number || t.text.size() > 4) {
				fail(t.span, "expected a small non-negative integer exponent, found " + describe(t));
			}
			next();
			return pow(base, static_cast<unsigned>(std::stoul(t.text)));
		}
		return base;
	}

	FuncExpr primary() {
		if(peek().kind == Tok::Number) {
			return FuncExpr::constant(rational());
		}
		if(at("(")) {
			next();
			FuncExpr e = expr();
			expect(")");
			return e;
		}
		if(at_word("exp") && peek(1).kind == Tok::Symbol && peek(1).text == "(") {
			next();
			next();
			FuncExpr e = expr();
			expect(")");
			return exp(e);
		}
		if(peek().kind == Tok::Word) {
			return FuncExpr::variable(clock_ref());
		}
		fail(peek().span, "expected an expression, found " + describe(peek()));
	}

	std::vector<Token> toks_;
	std::size_t pos_ = 0;
	std::map<std::string, ClockId> clock_index_;
};

class Lowering {
public:
	explicit Lowering(const RawDoc &doc) : doc_(doc) {}

	MachineDoc run() {
		const MachineClass cls = doc_.cls;
		MachineHeader h;
		h.name = doc_.name.text;
		if(!doc_.states.value) {
			error(doc_.name.span, "missing states declaration");
		} else {
			for(const auto &s : *doc_.states.value) {
				const auto [it, inserted] = states_.emplace(s.text, std::make_pair(h.states.size(), s.span));
				if(!inserted) {
					error(s.span, "duplicate state '" + s.text + "'", {it->second.second});
				} else {
					h.states.push_back(s.text);
				}
			}
		}
		if(!doc_.init.value) {
			error(doc_.name.span, "missing init declaration");
		} else if(doc_.states.value) {
			h.start = state(*doc_.init.value);
		}
		declared_actions_ = doc_.actions.value.has_value();
		if(declared_actions_) {
			for(const auto &a : *doc_.actions.value) {
				const auto [it, inserted] = actions_.emplace(a.text, std::make_pair(h.actions.size(), a.span));
				if(!inserted) {
					error(a.span, "duplicate action '" + a.text + "'", {it->second.second});
				} else {
					h.actions.push_back(a.text);
				}
			}
		}

		const bool timed = is_timed(cls);
		const bool delay = is_delay_class(cls);
		std::vector<std::string> clocks;
		std::vector<Interval> domains;
		if(doc_.clocks.value) {
			if(!timed) {
				error(doc_.clocks.span, "clocks are not allowed in " + keyword() + " machines");
			}
			std::map<std::string, SourceSpan> seen;
			for(const auto &c : *doc_.clocks.value) {
				const auto [it, inserted] = seen.emplace(c.name.text, c.name.span);
				if(!inserted) {
					error(c.name.span, "duplicate clock '" + c.name.text + "'", {it->second});
				}
				if(c.name.text == "true" || c.name.text == "exp") {
					error(c.name.span, "'" + c.name.text + "' is reserved and cannot name a clock");
				}
				if(c.domain && !delay) {
					error(c.domain_span, "clock domains are only allowed in sta and tapd machines");
				}
				clocks.push_back(c.name.text);
				domains.push_back(c.domain.value_or(Interval{0, 1}));
			}
		}
		if(doc_.degree.value && cls != MachineClass::Tapd) {
			error(doc_.degree.span, "degree is only allowed in tapd machines");
		}
		if(doc_.mode.value && cls != MachineClass::Tapd) {
			error(doc_.mode.span, "mode is only allowed in tapd machines");
		}
		if(cls == MachineClass::Tapd && !doc_.degree.value) {
			error(doc_.name.span, "tapd machines need a degree declaration");
		}

		struct Lowered {
			StateId s = 0;
			StateId t = 0;
			ActionId a = 0;
			const RawEdge *raw = nullptr;
		};
		std::vector<Lowered> edges;
		for(const auto &e : doc_.edges) {
			Lowered l{state(e.source), state(e.target), action(e.action, h), &e};
			check_attr(e.prob, cls == MachineClass::Pa || cls == MachineClass::Pta, "prob", true, e.span);
			check_attr(e.guard, cls == MachineClass::Ta || cls == MachineClass::Pta, "when", false, e.span);
			check_attr(e.resets, cls == MachineClass::Ta || cls == MachineClass::Pta, "reset", false, e.span);
			check_attr(e.fn, delay, "fn", true, e.span);
			check_attr(e.dom, delay, "dom", false, e.span);
			if(e.resets.value) {
				for(const auto &r : *e.resets.value) {
					if(std::find(clocks.begin(), clocks.end(), r.text) == clocks.end()) {
						error(r.span, "unknown clock '" + r.text + "'");
					}
				}
			}
			if(delay && e.dom.value && e.dom.value->size() != clocks.size()) {
				error(e.dom.span, "dom has " + std::to_string(e.dom.value->size()) + " intervals for " +
				                      std::to_string(clocks.size()) + " clocks");
			}
			edges.push_back(l);
		}

		std::optional<WeightingMap> weights;
		if(doc_.weights.value) {
			if(cls != MachineClass::Nfa && cls != MachineClass::Ta) {
				error(doc_.weights.span, "weights are only allowed in nfa and ta machines");
			}
			weights = lower_weights(*doc_.weights.value, h.actions, doc_.edges.size());
		}
		if(!diags_.empty()) {
			throw ParseError(std::move(diags_));
		}

		auto clock_set = [&](const RawEdge &e) {
			ClockSet rs;
			if(e.resets.value) {
				for(const auto &r : *e.resets.value) {
					rs.push_back(static_cast<ClockId>(std::find(clocks.begin(), clocks.end(), r.text) - clocks.begin()));
				}
			}
			std::sort(rs.begin(), rs.end());
			rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
			return rs;
		};
		auto guard = [](const RawEdge &e) { return e.guard.value.value_or(ClockConstraint::truth()); };
		auto domain = [&](const RawEdge &e) { return e.dom.value ? Box(*e.dom.value) : Box(domains); };

		MachineDoc out;
		out.weights = std::move(weights);
		switch(cls) {
		case MachineClass::Nfa: {
			Nfa n{h, {}};
			for(const auto &l : edges) {
				n.edges.push_back({l.s, l.a, l.t});
			}
			out.machine = std::move(n);
			break;
		}
		case MachineClass::Ta: {
			TimedAutomaton t{h, clocks, {}};
			for(const auto &l : edges) {
				t.edges.push_back({l.s, clock_set(*l.raw), guard(*l.raw), l.a, l.t});
			}
			out.machine = std::move(t);
			break;
		}
		case MachineClass::Pa: {
			ProbAutomaton p{h, {}};
			for(const auto &l : edges) {
				p.edges.push_back({l.s, l.t, *l.raw->prob.value, l.a});
			}
			out.machine = std::move(p);
			break;
		}
		case MachineClass::Pta: {
			ProbTimedAutomaton p{h, clocks, {}};
			for(const auto &l : edges) {
				p.edges.push_back({l.s, l.t, *l.raw->prob.value, l.a, guard(*l.raw), clock_set(*l.raw)});
			}
			out.machine = std::move(p);
			break;
		}
		case MachineClass::Sta: {
			StochasticTimedAutomaton s{h, clocks, domains, {}};
			for(const auto &l : edges) {
				s.edges.push_back({l.s, l.t, *l.raw->fn.value, domain(*l.raw), l.a});
			}
			out.machine = std::move(s);
			break;
		}
		case MachineClass::Tapd: {
			PolyDelayAutomaton d{h, clocks, domains, {}, *doc_.degree.value,
			                     doc_.mode.value.value_or(ProbabilityMode::Direct)};
			for(const auto &l : edges) {
				d.edges.push_back({l.s, l.t, *l.raw->fn.value, domain(*l.raw), l.a});
			}
			out.machine = std::move(d);
			break;
		}
		}
		return out;
	}

	static WeightingMap lower_weights(const RawWeights &w, const std::vector<std::string> &actions,
	                                  std::size_t edge_count, std::vector<Diagnostic> &diags) {
		WeightingMap out;
		out.scope = w.scope;
		std::map<std::size_t, SourceSpan> seen;
		for(const auto &[key, value] : w.entries) {
			std::optional<std::size_t> k;
			if(w.scope == WeightingMap::Scope::Actions) {
				const auto it = std::find(actions.begin(), actions.end(), key.text);
				if(it == actions.end()) {
					diags.push_back({key.span, "unknown action '" + key.text + "'", {}});
				} else {
					k = static_cast<std::size_t>(it - actions.begin());
				}
			} else {
				const bool digits = std::all_of(key.text.begin(), key.text.end(),
				                                [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; });
				if(!digits || key.text.size() > 9 || std::stoul(key.text) >= edge_count) {
					diags.push_back({key.span, "no edge with index '" + key.text + "'", {}});
				} else {
					k = std::stoul(key.text);
				}
			}
			if(!k) {
				continue;
			}
			const auto [it, inserted] = seen.emplace(*k, key.span);
			if(!inserted) {
				diags.push_back({key.span, "duplicate weight for '" + key.text + "'", {it->second}});
				continue;
			}
			out.weights[*k] = value;
		}
		return out;
	}

private:
	std::string keyword() const { return std::string(class_keyword(doc_.cls)); }

	void error(const SourceSpan &span, std::string message, std::vector<SourceSpan> related = {}) {
		diags_.push_back({span, std::move(message), std::move(related)});
	}

	StateId state(const Named &n) {
		const auto it = states_.find(n.text);
		if(it == states_.end()) {
			if(doc_.states.value) {
				error(n.span, "unknown state '" + n.text + "'");
			}
			return 0;
		}
		return it->second.first;
	}

	ActionId action(const Named &n, MachineHeader &h) {
		const auto it = actions_.find(n.text);
		if(it != actions_.end()) {
			return it->second.first;
		}
		if(declared_actions_) {
			error(n.span, "undeclared action '" + n.text + "'");
			return 0;
		}
		const ActionId id = h.actions.size();
		actions_.emplace(n.text, std::make_pair(id, n.span));
		h.actions.push_back(n.text);
		return id;
	}

	template <typename T>
	void check_attr(const Attr<T> &a, bool allowed, std::string_view what, bool required, const SourceSpan &edge) {
		if(a.value && !allowed) {
			error(a.span, std::string(what) + " is not allowed in " + keyword() + " machines");
		}
		if(!a.value && allowed && required) {
			error(edge, keyword() + " edges need a " + std::string(what) + " attribute");
		}
	}

	WeightingMap lower_weights(const RawWeights &w, const std::vector<std::string> &actions, std::size_t edge_count) {
		return lower_weights(w, actions, edge_count, diags_);
	}

	const RawDoc &doc_;
	std::map<std::string, std::pair<std::size_t, SourceSpan>> states_;
	std::map<std::string, std::pair<std::size_t, SourceSpan>> actions_;
	bool declared_actions_ = false;
	std::vector<Diagnostic> diags_;
};

std::string sanitize(const std::string &name) {
	std::string out;
	for(char c : name) {
		out += word_char(c) ? c : '_';
	}
	return out.empty() ? "_" : out;
}

std::string interval_string(const Interval &i) { return "[" + i.lo.to_string() + "," + i.hi.to_string() + "]"; }

std::vector<std::string> sanitized(std::span<const std::string> names) {
	std::vector<std::string> out;
	for(const auto &n : names) {
		out.push_back(sanitize(n));
	}
	return out;
}

} // namespace

MachineDoc parse_machine(std::string_view text) {
	Parser p(text);
	const RawDoc raw = p.document();
	return Lowering(raw).run();
}

WeightingMap parse_weighting(std::string_view text, const Machine &m) {
	Parser p(text);
	const RawWeights raw = p.weights_only();
	std::vector<Diagnostic> diags;
	WeightingMap w = Lowering::lower_weights(raw, header(m).actions, edge_count(m), diags);
	if(!diags.empty()) {
		throw ParseError(std::move(diags));
	}
	return w;
}

std::string print_weighting(const Machine &m, const WeightingMap &w) {
	const auto &actions = header(m).actions;
	std::string out = w.scope == WeightingMap::Scope::Actions ? "weights actions {\n" : "weights edges {\n";
	for(const auto &[key, value] : w.weights) {
		const std::string k = w.scope == WeightingMap::Scope::Actions && key < actions.size() ? sanitize(actions[key])
		                                                                                       : std::to_string(key);
		out += "  " + k + " = " + value.to_string() + ";\n";
	}
	out += "}\n";
	return out;
}

std::string print_machine(const Machine &m) { return print_machine(MachineDoc{m, std::nullopt}); }

std::string print_machine(const MachineDoc &doc) {
	const Machine &m = doc.machine;
	const MachineClass cls = machine_class(m);
	const MachineHeader &h = header(m);
	const auto states = sanitized(h.states);
	const auto actions = sanitized(h.actions);
	const auto clocks = sanitized(clock_names(m));
	std::ostringstream out;
	out << class_keyword(cls) << " " << sanitize(h.name.empty() ? "M" : h.name) << " {\n";
	const std::vector<Interval> *domains = nullptr;
	if(const auto *s = std::get_if<StochasticTimedAutomaton>(&m)) {
		domains = &s->clock_domains;
	} else if(const auto *d = std::get_if<PolyDelayAutomaton>(&m)) {
		domains = &d->clock_domains;
	}
	if(!clocks.empty()) {
		out << "  clocks ";
		for(std::size_t i = 0; i < clocks.size(); ++i) {
			out << (i ? ", " : "") << clocks[i];
			if(domains) {
				out << " in " << interval_string((*domains)[i]);
			}
		}
		out << ";\n";
	}
	if(const auto *d = std::get_if<PolyDelayAutomaton>(&m)) {
		out << "  degree " << d->degree << ";\n";
		out << "  mode " << (d->mode == ProbabilityMode::Direct ? "direct" : "normalized") << ";\n";
	}
	out << "  states";
	for(const auto &s : states) {
		out << " " << s;
	}
	out << ";\n";
	if(h.start < states.size()) {
		out << "  init " << states[h.start] << ";\n";
	}
	if(!actions.empty()) {
		out << "  actions";
		for(const auto &a : actions) {
			out << " " << a;
		}
		out << ";\n";
	}
	auto name_of = [](const std::vector<std::string> &names, std::size_t i) {
		return i < names.size() ? names[i] : std::to_string(i);
	};
	auto edge_head = [&](StateId s, StateId t, ActionId a) {
		out << "  edge " << name_of(states, s) << " -> " << name_of(states, t) << " on " << name_of(actions, a);
	};
	auto timing = [&](const ClockConstraint &g, const ClockSet &resets) {
		if(g.kind() != ClockConstraint::Kind::True) {
			out << " when " << g.to_string(clocks);
		}
		if(!resets.empty()) {
			out << " reset ";
			for(std::size_t i = 0; i < resets.size(); ++i) {
				out << (i ? ", " : "") << name_of(clocks, resets[i]);
			}
		}
	};
	auto delay = [&](const DelayEdge &e) {
		edge_head(e.source, e.target, e.action);
		out << " fn (" << e.function.to_string(clocks) << ")";
		if(domains && e.domain != Box(*domains)) {
			out << " dom";
			for(const auto &iv : e.domain.intervals()) {
				out << " " << interval_string(iv);
			}
		}
		out << ";\n";
	};
	std::visit(
	    [&](const auto &x) {
		    using T = std::decay_t<decltype(x)>;
		    for(const auto &e : x.edges) {
			    if constexpr(std::is_same_v<T, Nfa>) {
				    edge_head(e.source, e.target, e.action);
				    out << ";\n";
			    } else if constexpr(std::is_same_v<T, TimedAutomaton>) {
				    edge_head(e.source, e.target, e.action);
				    timing(e.guard, e.resets);
				    out << ";\n";
			    } else if constexpr(std::is_same_v<T, ProbAutomaton>) {
				    edge_head(e.source, e.target, e.action);
				    out << " prob " << e.prob.to_string() << ";\n";
			    } else if constexpr(std::is_same_v<T, ProbTimedAutomaton>) {
				    edge_head(e.source, e.target, e.action);
				    out << " prob " << e.prob.to_string();
				    timing(e.guard, e.resets);
				    out << ";\n";
			    } else {
				    delay(e);
			    }
		    }
	    },
	    m);
	if(doc.weights) {
		std::istringstream block(print_weighting(m, *doc.weights));
		std::string line;
		while(std::getline(block, line)) {
			out << "  " << line << "\n";
		}
	}
	out << "}\n";
	return out.str();
}

} // namespace traceexpr
