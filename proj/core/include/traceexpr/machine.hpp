#pragma once

#include "traceexpr/box.hpp"
#include "traceexpr/clock.hpp"
#include "traceexpr/func_expr.hpp"
#include "traceexpr/ids.hpp"
#include "traceexpr/rational.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace traceexpr {

enum class MachineClass { Nfa, Ta, Pa, Pta, Sta, Tapd };

/// DSL keyword: "nfa", "ta", "pa", "pta", "sta", "tapd".
std::string_view class_keyword(MachineClass c);
std::optional<MachineClass> class_from_keyword(std::string_view keyword);

/// True for classes whose runs carry timestamps.
bool is_timed(MachineClass c);
/// True for PA and PTA.
bool is_probabilistic(MachineClass c);
/// True for STA and TAPD.
bool is_delay_class(MachineClass c);

struct MachineHeader {
	std::string name;
	std::vector<std::string> states;
	StateId start = 0;
	std::vector<std::string> actions;
};

struct NfaEdge {
	StateId source = 0;
	ActionId action = 0;
	StateId target = 0;
};

struct Nfa {
	MachineHeader header;
	std::vector<NfaEdge> edges;
};

struct TaEdge {
	StateId source = 0;
	ClockSet resets;
	ClockConstraint guard;
	ActionId action = 0;
	StateId target = 0;
};

struct TimedAutomaton {
	MachineHeader header;
	std::vector<std::string> clocks;
	std::vector<TaEdge> edges;
};

struct PaEdge {
	StateId source = 0;
	StateId target = 0;
	Rational prob;
	ActionId action = 0;
};

struct ProbAutomaton {
	MachineHeader header;
	std::vector<PaEdge> edges;
};

struct PtaEdge {
	StateId source = 0;
	StateId target = 0;
	Rational prob;
	ActionId action = 0;
	ClockConstraint guard;
	ClockSet resets;
};

struct ProbTimedAutomaton {
	MachineHeader header;
	std::vector<std::string> clocks;
	std::vector<PtaEdge> edges;
};

/// Edge of a stochastic or polynomial-delay automaton: transition function
/// over the clocks and its domain box.
struct DelayEdge {
	StateId source = 0;
	StateId target = 0;
	FuncExpr function;
	Box domain;
	ActionId action = 0;
};

struct StochasticTimedAutomaton {
	MachineHeader header;
	std::vector<std::string> clocks;
	/// Declared per-clock domains; the default domain of an edge.
	std::vector<Interval> clock_domains;
	std::vector<DelayEdge> edges;
};

/// How edge functions of a polynomial-delay automaton become probabilities.
enum class ProbabilityMode {
	Direct,     ///< the Taylor polynomial itself
	Normalized, ///< the Taylor polynomial divided by the source state's total L1 mass
};

struct PolyDelayAutomaton {
	MachineHeader header;
	std::vector<std::string> clocks;
	std::vector<Interval> clock_domains;
	std::vector<DelayEdge> edges;
	unsigned degree = 0;
	ProbabilityMode mode = ProbabilityMode::Direct;
};

using Machine = std::variant<Nfa, TimedAutomaton, ProbAutomaton, ProbTimedAutomaton, StochasticTimedAutomaton,
                             PolyDelayAutomaton>;

MachineClass machine_class(const Machine &m);
const MachineHeader &header(const Machine &m);
MachineHeader &header(Machine &m);
/// Clock names; empty for NFA and PA.
std::span<const std::string> clock_names(const Machine &m);
std::size_t edge_count(const Machine &m);

/// Class-independent view of one edge.
struct EdgeView {
	StateId source;
	StateId target;
	ActionId action;
};
EdgeView edge_view(const Machine &m, EdgeRef e);

/// Edges leaving each state, in edge order.
std::vector<std::vector<EdgeRef>> outgoing_edges(const Machine &m);

/// Index of the edge from i to j in an STA or TAPD; empty when absent.
std::optional<EdgeRef> find_delay_edge(std::span<const DelayEdge> edges, StateId i, StateId j);

} // namespace traceexpr
