#include "generators.hpp"

#include "traceexpr/semantics.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace traceexpr;
using namespace traceexpr::testing;

namespace {

Machine parse(const std::string &text) { return parse_machine(text).machine; }

std::set<std::vector<ActionId>> action_sequences(const std::vector<Run> &runs) {
	std::set<std::vector<ActionId>> out;
	for(const auto &r : runs) {
		out.insert(hide(r).actions());
	}
	return out;
}

} // namespace

TEST(EnumerateRuns, NfaBranches) {
	const Machine n = parse("nfa n { states s0 s1 s2; init s0; edge s0 -> s1 on a; edge s0 -> s2 on b; }");
	EXPECT_EQ(enumerate_runs(n, 1, std::nullopt).size(), 2u);
	const auto zero = enumerate_runs(n, 0, std::nullopt);
	ASSERT_EQ(zero.size(), 1u);
	EXPECT_EQ(zero[0].size(), 0u);
	EXPECT_EQ(zero[0].start, 0u);
	EXPECT_TRUE(enumerate_runs(n, 2, std::nullopt).empty());
	EXPECT_EQ(enumerate_runs(n, 2, std::nullopt, {.include_shorter = true}).size(), 3u);
}

TEST(EnumerateRuns, CycleTapdActionPairs) {
	const Machine m = cycle_tapd();
	const auto runs = enumerate_runs(m, 2, CriticalDelays{});
	// Oracle: walk the cycle structure directly; state s has edges 2s and 2s+1.
	std::set<std::vector<ActionId>> expected;
	const auto &edges = std::get<PolyDelayAutomaton>(m).edges;
	for(EdgeRef e : {EdgeRef{0}, EdgeRef{1}}) {
		const StateId mid = edges[e].target;
		for(std::size_t f = 0; f < edges.size(); ++f) {
			if(edges[f].source == mid) {
				expected.insert({edges[e].action, edges[f].action});
			}
		}
	}
	EXPECT_EQ(action_sequences(runs), expected);
	EXPECT_EQ(expected, (std::set<std::vector<ActionId>>{{0, 2}, {0, 3}, {1, 4}, {1, 5}}));
	for(const auto &r : runs) {
		EXPECT_TRUE(validate_run(m, r).empty());
	}
}

TEST(EnumerateRuns, TimedClassesNeedSampling) {
	const Machine t = load_corpus("ta_region_one.aut").machine;
	EXPECT_THROW((void)enumerate_runs(t, 1, std::nullopt), InvalidArgument);
	const auto grid = enumerate_runs(t, 1, TimeGrid{Rational(1, 2), Rational(2)});
	EXPECT_FALSE(grid.empty());
	for(const auto &r : grid) {
		EXPECT_TRUE(validate_run(t, r).empty());
	}
}

TEST(EnumerateRuns, TimedWordFixesTimestamps) {
	const Machine t = parse("ta t { clocks x; states a b; init a; edge a -> b on u when x <= 1 reset x;"
	                        " edge b -> a on v when x > 1; }");
	const TimedWord w{{0, 1}, {Rational(1, 2), Rational(2)}};
	const auto runs = enumerate_runs(t, 2, w);
	ASSERT_EQ(runs.size(), 1u);
	EXPECT_EQ(runs[0].steps[1].clocks, (ClockInterpretation{Rational(3, 2)}));
	const TimedWord late{{0, 1}, {Rational(1, 2), Rational(1)}};
	EXPECT_TRUE(enumerate_runs(t, 2, late).empty());
	const TimedWord coarse{{0}, {Rational(3, 2)}};
	EXPECT_TRUE(enumerate_runs(t, 1, coarse).empty());
}

TEST(EnumerateRuns, ClocksAdvanceThenReset) {
	const Machine t = parse("ta t { clocks x, y; states a; init a; edge a -> a on u reset x; }");
	const auto runs = enumerate_runs(t, 2, TimedWord{{0, 0}, {Rational(1), Rational(5, 2)}});
	ASSERT_EQ(runs.size(), 1u);
	EXPECT_EQ(runs[0].steps[0].clocks, (ClockInterpretation{Rational(1), Rational(1)}));
	EXPECT_EQ(runs[0].steps[1].clocks, (ClockInterpretation{Rational(3, 2), Rational(5, 2)}));
}

TEST(Hide, SpecExamples) {
	const Machine p = parse("pa p { states s0 s1; init s0; edge s0 -> s1 on a prob 1; edge s1 -> s0 on b prob 1/2;"
	                        " edge s1 -> s1 on c prob 1/2; }");
	const auto runs = enumerate_runs(p, 2, std::nullopt);
	ASSERT_FALSE(runs.empty());
	const Trace t = hide(runs[0]);
	EXPECT_EQ(t.actions(), (std::vector<ActionId>{0, 1}));
	EXPECT_FALSE(t.timed());
	EXPECT_EQ(hide(traceexpr::Run{}).size(), 0u);

	const Machine ta = parse("ta t { clocks x; states a; init a; actions a b; edge a -> a on a; edge a -> a on b; }");
	const auto timed = enumerate_runs(ta, 2, TimedWord{{0, 1}, {Rational(1), Rational(3, 2)}});
	ASSERT_EQ(timed.size(), 1u);
	const Trace tt = hide(timed[0]);
	EXPECT_EQ(tt.times(), (TimeSequence{Rational(1), Rational(3, 2)}));
	EXPECT_EQ(untime(tt).actions(), tt.actions());
	EXPECT_FALSE(untime(tt).timed());
}

TEST(Hide, PreservesActionsAndTimesOnRandomMachines) {
	Rng rng(17);
	for(MachineClass c : {MachineClass::Nfa, MachineClass::Ta, MachineClass::Pa, MachineClass::Pta, MachineClass::Sta,
	                      MachineClass::Tapd}) {
		for(int i = 0; i < 20; ++i) {
			const Sample s = random_machine(c, rng);
			std::optional<TimeSampling> sampling;
			if(is_timed(c)) {
				sampling = is_delay_class(c) ? TimeSampling{CriticalDelays{}} : TimeSampling{TimeGrid{Rational(1, 2), 2}};
			}
			for(const auto &r : enumerate_runs(s.machine, 3, sampling, {.include_shorter = true})) {
				EXPECT_TRUE(validate_run(s.machine, r).empty()) << to_string(r, s.machine);
				const Trace t = hide(r);
				ASSERT_EQ(t.size(), r.size());
				for(std::size_t k = 0; k < r.size(); ++k) {
					EXPECT_EQ(t.steps[k].action, r.steps[k].action);
					EXPECT_EQ(t.steps[k].time, r.steps[k].time);
				}
			}
			// Equal-length traces are prefix-free.
			const auto traces = traces_of(s.machine, 3, sampling);
			EXPECT_FALSE(check_prefix_free(traces).has_value());
		}
	}
}

TEST(CheckPrefixFree, SpecExamples) {
	auto tr = [](std::vector<ActionId> a) {
		Trace t;
		for(ActionId x : a) {
			t.steps.push_back({x, std::nullopt});
		}
		return t;
	};
	EXPECT_FALSE(check_prefix_free(std::vector<Trace>{tr({0}), tr({1})}).has_value());
	const auto v = check_prefix_free(std::vector<Trace>{tr({0}), tr({0, 1})});
	ASSERT_TRUE(v.has_value());
	EXPECT_EQ(*v, (std::pair<std::size_t, std::size_t>{0, 1}));
	EXPECT_TRUE(check_prefix_free(std::vector<Trace>{tr({0, 1}), tr({0, 1})}).has_value());
	EXPECT_FALSE(check_prefix_free(std::vector<Trace>{tr({0, 1}), tr({1, 0}), tr({1, 1})}).has_value());
}

TEST(ValidateRun, RejectsForgedRuns) {
	const Machine t = parse("ta t { clocks x; states a b; init a; edge a -> b on u when x < 1; }");
	auto runs = enumerate_runs(t, 1, TimedWord{{0}, {Rational(1, 2)}});
	ASSERT_EQ(runs.size(), 1u);
	traceexpr::Run forged = runs[0];
	forged.steps[0].time = Rational(2);
	forged.steps[0].clocks = {Rational(2)};
	EXPECT_FALSE(validate_run(t, forged).empty());
}

TEST(UntimedTraces, MatchGridEnumerationForTa) {
	const Machine t = load_corpus("ta_region_two.aut").machine;
	std::set<std::vector<ActionId>> grid;
	for(const auto &tr : traces_of(t, 2, TimeGrid{Rational(1, 4), Rational(5)})) {
		grid.insert(tr.actions());
	}
	std::set<std::vector<ActionId>> exact;
	for(const auto &tr : untimed_traces(t, 2)) {
		exact.insert(tr.actions());
		EXPECT_FALSE(tr.timed());
	}
	EXPECT_EQ(grid, exact);
}

TEST(Runs, PrintHumanReadableForm) {
	const Machine m = cycle_tapd();
	const auto runs = enumerate_runs(m, 1, CriticalDelays{});
	ASSERT_FALSE(runs.empty());
	EXPECT_EQ(to_string(runs[0], m), "1 -g1@1/4-> 2");
	EXPECT_EQ(to_string(hide(runs[0]), header(m)), "g1@1/4");
}
