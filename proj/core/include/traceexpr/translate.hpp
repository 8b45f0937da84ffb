#pragma once

#include "traceexpr/machine.hpp"
#include "traceexpr/weighting.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace traceexpr {

/// Result of a class-to-class construction.
struct TranslationReport {
	Machine target;
	/// Target state -> source state it stands for.
	std::map<StateId, StateId> state_origin;
	/// Source action -> target action.
	std::map<ActionId, ActionId> action_map;
	/// Applicability caveats and dropped elements.
	std::vector<std::string> notes;
	/// Weighting under which the target's trace measures match the source's,
	/// when the target needs one and an admissible one exists.
	std::optional<WeightingMap> weighting;
};

/// Same states and edges, no clocks, trivial guards.
TranslationReport nfa_to_ta(const Nfa &n);

/// Alur-Dill region automaton restricted to the reachable part. Guard
/// constants are scaled to integers first; diagonal guards are rejected.
TranslationReport ta_to_nfa_region(const TimedAutomaton &t);

/// Edge probabilities proportional to the weights per source state. Action
/// weights are applied to every edge carrying the action.
TranslationReport nfa_to_pa(const Nfa &n, const WeightingMap &w);

/// Splits each edge of probability q into q/g copies, g the rational gcd of
/// all probabilities; the copies all carry the edge's action.
TranslationReport pa_to_nfa(const ProbAutomaton &p);

/// Guards and resets copied; probabilities from the weights as in nfa_to_pa.
TranslationReport ta_to_pta(const TimedAutomaton &t, const WeightingMap &w);

/// Probabilities copied; no clocks.
TranslationReport pa_to_pta(const ProbAutomaton &p);

/// Constant edge functions equal to the probabilities, with domains from the
/// scaled projection of each guard's satisfaction set. Edges with empty or
/// flat domains, and parallel edges beyond the first, are dropped.
TranslationReport pta_to_tapd(const ProbTimedAutomaton &a);

/// Each edge function becomes the TAPD's probability polynomial.
TranslationReport tapd_to_sta(const PolyDelayAutomaton &d);

/// Dispatches on the source class; throws InvalidArgument for unsupported
/// pairs or a missing weighting.
TranslationReport translate(const Machine &m, MachineClass target, const std::optional<WeightingMap> &weights);

} // namespace traceexpr
