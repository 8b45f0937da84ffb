#include "generators.hpp"

#include "traceexpr/measure.hpp"
#include "traceexpr/semantics.hpp"
#include "traceexpr/translate.hpp"

#include <gtest/gtest.h>

using namespace traceexpr;
using namespace traceexpr::testing;

namespace {

Trace untimed(std::vector<ActionId> actions, MachineClass c = MachineClass::Nfa) {
	Trace t{c, {}};
	for(ActionId a : actions) {
		t.steps.push_back({a, std::nullopt});
	}
	return t;
}

} // namespace

TEST(Weighting, Admissibility) {
	const Machine n = parse_machine("nfa n { states a b; init a; actions u v; edge a -> b on u; edge a -> a on u;"
	                                " edge b -> a on v; }")
	                      .machine;
	WeightingMap edges{WeightingMap::Scope::Edges, {{0, Rational(1, 4)}, {1, Rational(1, 4)}, {2, Rational(1, 2)}}};
	EXPECT_TRUE(check_weighting(n, edges).empty());
	edges.weights[1] = Rational(1, 8);
	edges.weights[2] = Rational(5, 8);
	EXPECT_FALSE(check_weighting(n, edges).empty());
	WeightingMap actions{WeightingMap::Scope::Actions, {{0, Rational(1, 3)}, {1, Rational(1, 3)}}};
	EXPECT_FALSE(check_weighting(n, actions).empty());
	EXPECT_TRUE(check_weighting(n, uniform_edge_weighting(n)).empty());
	EXPECT_TRUE(check_weighting(n, uniform_action_weighting(n)).empty());
	const auto summed = to_action_weighting(n, uniform_edge_weighting(n));
	EXPECT_EQ(summed.weights.at(0), Rational(2, 3));
	EXPECT_EQ(summed.weights.at(1), Rational(1, 3));
}

TEST(RunMeasure, SpecExamples) {
	const Machine p = parse_machine("pa p { states a b c; init a; edge a -> b on u prob 1/2; edge a -> c on v prob 1/2;"
	                                " edge b -> c on w prob 1/3; edge b -> a on w prob 2/3; }")
	                      .machine;
	MeasureEngine pe(p);
	const std::vector<EdgeRef> path{0, 2};
	EXPECT_EQ(pe.run_edges(path).exact_value(), Rational(1, 6));

	const Machine cycle = cycle_tapd();
	MeasureEngine ce(cycle);
	const std::vector<EdgeRef> one_two_three{0, 3};
	EXPECT_EQ(ce.run_edges(one_two_three).exact_value(), Rational(1, 12));

	const Machine n = parse_machine("nfa n { states a b; init a; actions u v; edge a -> b on u; edge a -> a on v;"
	                                " edge b -> a on u; edge b -> b on v; }")
	                      .machine;
	MeasureContext ctx;
	ctx.weights = uniform_edge_weighting(n);
	MeasureEngine ne(n, ctx);
	for(const auto &r : enumerate_runs(n, 1, std::nullopt)) {
		// Oracle: product of the weights of the traversed edges.
		Rational product = 1;
		for(EdgeRef e : r.edges()) {
			product *= *ctx.weights->get(e);
		}
		EXPECT_EQ(ne.run(r).exact_value(), product);
		EXPECT_EQ(product, Rational(1, 4));
	}
}

TEST(RunMeasure, RequiresWeightsOnlyForWeightedClasses) {
	const Machine n = parse_machine("nfa n { states a; init a; edge a -> a on u; }").machine;
	EXPECT_THROW(MeasureEngine{n}, InvalidArgument);
	MeasureContext ctx;
	ctx.weights = uniform_edge_weighting(cycle_tapd());
	EXPECT_THROW((MeasureEngine{cycle_tapd(), ctx}), InvalidArgument);
}

TEST(RunMeasure, EmptyRegionIsFlagged) {
	const Machine s = parse_machine("tapd t { degree 0; clocks x in [0,1]; states a b; init a;"
	                                " edge a -> b on u fn (1/2) dom [0,1/4]; edge b -> a on v fn (1/2) dom [1/2,1]; }")
	                      .machine;
	MeasureEngine e(s);
	const std::vector<EdgeRef> path{0, 1};
	const auto r = e.run_edges(path);
	EXPECT_TRUE(r.empty_region);
	EXPECT_EQ(r.exact_value(), Rational(0));
}

TEST(TraceMeasure, SpecExamples) {
	MeasureEngine ce(cycle_tapd());
	const std::vector<ActionId> twice{0, 1, 0, 1};
	EXPECT_EQ(ce.trace_actions(twice).exact_value(), Rational(1, 60));
	const std::vector<ActionId> once{0, 1};
	EXPECT_EQ(ce.trace_actions(once).exact_value(), Rational(1, 12));

	const Machine n = parse_machine("nfa n { states a; init a; actions u v w; edge a -> a on u; edge a -> a on v;"
	                                " edge a -> a on w; weights actions { u = 1/3; v = 1/2; w = 1/6; } }")
	                      .machine;
	MeasureContext ctx;
	ctx.weights = parse_machine("nfa n { states a; init a; actions u v w; edge a -> a on u; edge a -> a on v;"
	                            " edge a -> a on w; weights actions { u = 1/3; v = 1/2; w = 1/6; } }")
	                  .weights;
	MeasureEngine ne(n, ctx);
	EXPECT_EQ(ne.trace(untimed({0})).exact_value(), Rational(1, 3));
	const std::vector<Trace> pair{untimed({0}), untimed({1})};
	EXPECT_EQ(ne.collection(pair).exact_value(), Rational(5, 6));
	EXPECT_EQ(ne.collection(std::vector<Trace>{}).exact_value(), Rational(0));

	const Machine p = parse_machine("pa p { states s t; init s; edge s -> t on a prob 1/2; edge s -> s on b prob 1/2;"
	                                " edge t -> s on a prob 1/4; edge t -> t on b prob 3/4; }")
	                      .machine;
	MeasureEngine pe(p);
	EXPECT_EQ(pe.trace(untimed({0, 0}, MachineClass::Pa)).exact_value(), Rational(1, 16));
	EXPECT_EQ(pe.action_factor(0), Rational(1, 4));
	EXPECT_TRUE(pe.product_class());
}

TEST(TraceMeasure, Errors) {
	const Machine s = parse_machine("sta s { clocks x in [0,1]; states a b; init a; actions u;"
	                                " edge a -> b on u fn (1/2); edge b -> a on u fn (1/2 * x); }")
	                      .machine;
	MeasureEngine e(s);
	const std::vector<ActionId> u{0};
	EXPECT_THROW((void)e.trace_actions(u), InvalidArgument);
	MeasureEngine ce(cycle_tapd());
	const std::vector<ActionId> missing{9};
	EXPECT_THROW((void)ce.trace_actions(missing), InvalidArgument);
	const std::vector<Trace> bad{untimed({0}, MachineClass::Tapd), untimed({0, 2}, MachineClass::Tapd)};
	EXPECT_THROW((void)ce.collection(bad), InvalidArgument);
	EXPECT_NO_THROW((void)ce.collection(bad, false));
	EXPECT_EQ(ce.trace(untimed({}, MachineClass::Tapd)).exact_value(), Rational(1));
}

TEST(TraceMeasure, ConcatenationIsMultiplicativeForProductClasses) {
	Rng rng(31);
	for(MachineClass c : {MachineClass::Nfa, MachineClass::Ta, MachineClass::Pa, MachineClass::Pta}) {
		for(int i = 0; i < 30; ++i) {
			const Sample s = random_machine(c, rng);
			MeasureEngine e(s.machine, s.context());
			const auto traces = untimed_traces(s.machine, 3);
			for(const auto &t : traces) {
				const auto a = t.actions();
				const std::vector<ActionId> head(a.begin(), a.begin() + 1), tail(a.begin() + 1, a.end());
				EXPECT_EQ(e.trace_actions(a).exact_value(),
				          e.trace_actions(head).exact_value() * e.trace_actions(tail).exact_value());
			}
		}
	}
}

TEST(TraceMeasure, StochasticCollectionBelowOne) {
	// Two-state machine whose functions sum to at most 9/10 per state.
	const Machine s = parse_machine("sta s { clocks x in [0,1]; states a b; init a; actions u v w z;"
	                                " edge a -> b on u fn (9/20 * exp(-x)); edge a -> a on v fn (2/5 * x);"
	                                " edge b -> a on w fn (1/2 * x * x); edge b -> b on z fn (2/5); }")
	                      .machine;
	MeasureEngine e(s);
	const auto traces = untimed_traces(s, 2);
	const auto l = e.collection(traces);
	EXPECT_FALSE(l.exact());
	// Oracle: sum of the individual trace measures.
	double sum = 0;
	for(const auto &t : traces) {
		sum += e.trace(t).approx();
	}
	EXPECT_NEAR(l.approx(), sum, 1e-12);
	EXPECT_LT(l.approx() + l.error(), 1.0);
}

TEST(RunMeasure, TapdAgreesWithStaEmbedding) {
	Rng rng(41);
	for(int i = 0; i < 20; ++i) {
		const PolyDelayAutomaton d = random_polynomial_tapd(rng);
		const auto report = tapd_to_sta(d);
		MeasureEngine exact(d);
		MeasureEngine approx(report.target);
		for(const auto &r : enumerate_runs(d, 2, CriticalDelays{}, {.include_shorter = true})) {
			const auto edges = r.edges();
			const auto a = exact.run_edges(edges);
			const auto b = approx.run_edges(edges);
			ASSERT_TRUE(a.exact());
			EXPECT_NEAR(a.exact_value().to_double(), b.exact() ? b.exact_value().to_double() : b.approx(), 1e-9);
			EXPECT_TRUE(measures_equal(a, b));
		}
	}
}

TEST(MeasureResult, Formatting) {
	MeasureResult r;
	r.value = Rational(1, 12);
	EXPECT_EQ(r.to_string(), "1/12");
	MeasureResult a{MeasureResult::Kind::Trace, ApproxValue{0.5, 1e-10}};
	EXPECT_THROW((void)a.exact_value(), InvalidArgument);
	MeasureResult b{MeasureResult::Kind::Trace, Rational(1, 2)};
	EXPECT_TRUE(measures_equal(a, b));
	MeasureResult c{MeasureResult::Kind::Trace, Rational(1, 3)};
	EXPECT_FALSE(measures_equal(b, c));
}
