#pragma once

#include "traceexpr/clock.hpp"
#include "traceexpr/ids.hpp"
#include "traceexpr/machine.hpp"
#include "traceexpr/rational.hpp"
#include "traceexpr/sequence.hpp"

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace traceexpr {

/// Timestamps are the multiples of `step` up to `horizon`.
struct TimeGrid {
	Rational step;
	Rational horizon;
};

/// One delay per equivalence class of delays: for TA/PTA the points where a
/// clock meets a (scaled) guard constant and the open stretches between
/// them; for STA/TAPD the domain endpoints and the stretches between them.
struct CriticalDelays {};

/// How timed classes choose timestamps during enumeration.
using TimeSampling = std::variant<TimeGrid, TimedWord, CriticalDelays>;

/// One transition of a run. `state` is the source state. Timed classes
/// record the firing time and the clock values at firing (before resets);
/// PA/PTA record the edge probability.
struct RunStep {
	StateId state = 0;
	EdgeRef edge = 0;
	ActionId action = 0;
	std::optional<Rational> time;
	ClockInterpretation clocks;
	ClockSet resets;
	std::optional<Rational> prob;

	friend bool operator==(const RunStep &, const RunStep &) = default;
};

struct Run {
	MachineClass machine_class = MachineClass::Nfa;
	StateId start = 0;
	std::vector<RunStep> steps;

	[[nodiscard]] std::size_t size() const { return steps.size(); }
	/// Edge sequence of the run.
	[[nodiscard]] std::vector<EdgeRef> edges() const;
	friend bool operator==(const Run &, const Run &) = default;
};

struct TraceStep {
	ActionId action = 0;
	std::optional<Rational> time;

	friend auto operator<=>(const TraceStep &, const TraceStep &) = default;
	friend bool operator==(const TraceStep &, const TraceStep &) = default;
};

/// A run with states, clocks and payloads hidden: actions and, for timed
/// classes, timestamps.
struct Trace {
	MachineClass machine_class = MachineClass::Nfa;
	std::vector<TraceStep> steps;

	[[nodiscard]] std::size_t size() const { return steps.size(); }
	[[nodiscard]] std::vector<ActionId> actions() const;
	/// Timestamps of the timed steps.
	[[nodiscard]] TimeSequence times() const;
	[[nodiscard]] bool timed() const;

	friend auto operator<=>(const Trace &, const Trace &) = default;
	friend bool operator==(const Trace &, const Trace &) = default;
};

/// A set of traces from one machine.
using TraceCollection = std::vector<Trace>;

struct EnumerateOptions {
	/// Also return the runs shorter than the depth (including the empty run).
	bool include_shorter = false;
	/// Enumeration aborts with an Error beyond this many runs.
	std::size_t limit = 5'000'000;
};

/// All runs of exactly `depth` steps, ordered by edge index and then time.
/// Timed classes need a sampling; throws InvalidArgument without one.
std::vector<Run> enumerate_runs(const Machine &m, std::size_t depth, const std::optional<TimeSampling> &sampling,
                                const EnumerateOptions &options = {});

/// Projection of a run onto actions and times.
Trace hide(const Run &run);

/// The trace with timestamps removed.
Trace untime(const Trace &trace);

/// Sorted, duplicate-free traces of the enumerated runs.
TraceCollection traces_of(const Machine &m, std::size_t depth, const std::optional<TimeSampling> &sampling,
                          const EnumerateOptions &options = {});

/// Exact set of untimed traces of length `depth`, sorted. Timed classes are
/// explored with critical delays; configurations in the same clock region
/// are merged.
TraceCollection untimed_traces(const Machine &m, std::size_t depth);

/// A pair (i, j) with collection[i] an initial segment of collection[j]
/// (or equal to it, for repeated members); empty when prefix-free.
std::optional<std::pair<std::size_t, std::size_t>> check_prefix_free(std::span<const Trace> collection);

/// Broken run invariants; empty for a genuine run of m.
std::vector<std::string> validate_run(const Machine &m, const Run &run);

/// Human-readable forms.
std::string to_string(const Trace &trace, const MachineHeader &h);
std::string to_string(const Run &run, const Machine &m);

} // namespace traceexpr
