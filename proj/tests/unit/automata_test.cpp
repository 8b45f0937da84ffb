#include "generators.hpp"

#include "traceexpr/probability.hpp"
#include "traceexpr/validate.hpp"

#include <gtest/gtest.h>

using namespace traceexpr;

namespace {

Machine parse(const std::string &text) { return parse_machine(text).machine; }

bool has_message(const std::vector<Violation> &v, const std::string &needle) {
	return std::any_of(v.begin(), v.end(), [&](const Violation &x) { return x.to_string().find(needle) != std::string::npos; });
}

} // namespace

TEST(Validate, WellFormedNfa) {
	EXPECT_TRUE(validate(parse("nfa n { states s0 s1; init s0; edge s0 -> s1 on a; edge s1 -> s0 on b; }")).empty());
}

TEST(Validate, PaOutgoingMass) {
	const auto v = validate(parse("pa p { states s0 s1 s2; init s0; edge s0 -> s1 on a prob 1/2; edge s0 -> s2 on b prob 1/3; }"));
	ASSERT_EQ(v.size(), 1u);
	EXPECT_EQ(v[0].location, "state s0");
	EXPECT_EQ(v[0].message, "outgoing mass 5/6 ≠ 1");
	EXPECT_TRUE(validate(parse("pa p { states s0; init s0; edge s0 -> s0 on a prob 1; }")).empty());
}

TEST(Validate, StaDomainOutsideUnitBox) {
	StochasticTimedAutomaton s;
	s.header = {"s", {"s0", "s1"}, 0, {"a"}};
	s.clocks = {"x"};
	s.clock_domains = {Interval{0, 1}};
	s.edges.push_back({0, 1, FuncExpr::constant(Rational(1, 2)), Box({Interval{Rational(1, 2), Rational(3, 2)}}), 0});
	EXPECT_TRUE(has_message(validate(Machine(s)), "domain exceeds [0,1]"));
	EXPECT_THROW(require_valid(Machine(s)), InvalidArgument);
}

TEST(Validate, ReportsStructuralProblems) {
	Nfa n;
	n.header = {"n", {"a", "a"}, 3, {}};
	n.edges.push_back({0, 0, 5});
	const auto v = validate(Machine(n));
	EXPECT_TRUE(has_message(v, "duplicate state name"));
	EXPECT_TRUE(has_message(v, "start state out of range"));
	EXPECT_TRUE(has_message(v, "machine declares no actions"));
	EXPECT_TRUE(has_message(v, "target state out of range"));
}

TEST(Validate, DelayClassesRejectOverfullStates) {
	const auto v = validate(parse("sta s { clocks x in [0,1]; states a b; init a; actions u v;"
	                              " edge a -> b on u fn (3/4); edge a -> a on v fn (1/2); }"));
	EXPECT_TRUE(has_message(v, "exceeds 1"));
	const auto w = validate(parse("tapd t { degree 1; clocks x in [0,1]; states a b; init a;"
	                              " edge a -> b on u fn (x - 1/2); }"));
	EXPECT_TRUE(has_message(w, "outside [0,1]"));
}

TEST(Validate, TapdRequiresRationalSeries) {
	const auto v = validate(parse("tapd t { degree 2; clocks x in [0,1]; states a b; init a;"
	                              " edge a -> b on u fn (1/4 * exp(x + 1)); }"));
	EXPECT_TRUE(has_message(v, "exp argument must vanish"));
}

TEST(EdgeProbability, DirectModeSpecExamples) {
	const auto cycle = cycle_tapd();
	Polynomial up = Polynomial::variable(1, 0) + Polynomial::constant(1, Rational(1, 2));
	EXPECT_EQ(edge_probability(cycle, 0, 1), up);
	PolyDelayAutomaton d;
	d.header = {"d", {"a", "b"}, 0, {"u"}};
	d.clocks = {"x"};
	d.clock_domains = {Interval{0, 1}};
	d.degree = 2;
	d.edges.push_back({0, 1, exp(FuncExpr::variable(0)), Box::unit(1), 0});
	Polynomial series = Polynomial::constant(1, 1) + Polynomial::variable(1, 0);
	series.add_term({2}, Rational(1, 2));
	EXPECT_EQ(edge_probability(d, 0, 1), series);
	EXPECT_THROW(edge_probability(d, 1, 0), InvalidArgument);
}

TEST(EdgeProbability, NormalizedModeSpecExample) {
	PolyDelayAutomaton d;
	d.header = {"d", {"a", "b", "c"}, 0, {"u", "v"}};
	d.clocks = {"x"};
	d.clock_domains = {Interval{0, 1}};
	d.degree = 0;
	d.mode = ProbabilityMode::Normalized;
	d.edges.push_back({0, 1, FuncExpr::constant(1), Box::unit(1), 0});
	d.edges.push_back({0, 2, FuncExpr::constant(3), Box::unit(1), 1});
	EXPECT_EQ(edge_probability(d, 0, 1), Polynomial::constant(1, Rational(1, 4)));
	EXPECT_EQ(edge_probability(d, 0, 2), Polynomial::constant(1, Rational(3, 4)));
	EXPECT_TRUE(validate(Machine(d)).empty());
	d.edges[0].function = FuncExpr::constant(0);
	d.edges[1].function = FuncExpr::constant(0);
	EXPECT_THROW(edge_probability(d, 0, 1), InvalidArgument);
}

TEST(EdgeProbability, DirectModeStaysInRangeWhenStatesSumToOne) {
	const auto cycle = cycle_tapd();
	const auto probs = edge_probabilities(cycle);
	for(long k = 0; k <= 16; ++k) {
		const std::vector<Rational> x{Rational(k, 32)};
		for(StateId s = 0; s < 3; ++s) {
			Rational sum = 0;
			for(std::size_t e = 0; e < cycle.edges.size(); ++e) {
				if(cycle.edges[e].source != s) {
					continue;
				}
				const Rational v = probs[e].evaluate(x);
				EXPECT_GE(v, Rational(0));
				EXPECT_LE(v, Rational(1));
				sum += v;
			}
			EXPECT_EQ(sum, Rational(1));
		}
	}
}

TEST(Machine, ClassHelpers) {
	EXPECT_EQ(class_from_keyword("pta"), MachineClass::Pta);
	EXPECT_FALSE(class_from_keyword("dfa").has_value());
	EXPECT_TRUE(is_timed(MachineClass::Ta));
	EXPECT_FALSE(is_timed(MachineClass::Pa));
	EXPECT_TRUE(is_probabilistic(MachineClass::Pta));
	EXPECT_TRUE(is_delay_class(MachineClass::Tapd));
	const Machine m = cycle_tapd();
	EXPECT_EQ(edge_count(m), 6u);
	EXPECT_EQ(outgoing_edges(m)[1].size(), 2u);
	EXPECT_EQ(find_delay_edge(std::get<PolyDelayAutomaton>(m).edges, 2, 1), EdgeRef{5});
	EXPECT_FALSE(find_delay_edge(std::get<PolyDelayAutomaton>(m).edges, 0, 0).has_value());
}
