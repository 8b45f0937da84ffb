#pragma once

#include "traceexpr/machine.hpp"
#include "traceexpr/measure.hpp"
#include "traceexpr/semantics.hpp"
#include "traceexpr/sequence.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace traceexpr {

/// Bijection between state or action ids.
struct Relabelling {
	enum class Kind { States, Actions };

	Kind kind = Kind::Actions;
	std::map<std::size_t, std::size_t> mapping;

	[[nodiscard]] bool injective() const;
	[[nodiscard]] std::optional<std::size_t> apply(std::size_t from) const;
	[[nodiscard]] Relabelling inverse() const;
	friend bool operator==(const Relabelling &, const Relabelling &) = default;
};

/// Maps fixed across every matched pair: action relabelling, optional time
/// isomorphism and the bijection alpha between collection members.
struct IsoWitness {
	Relabelling actions;
	std::optional<Relabelling> states;
	std::optional<TimeIso> time;
	std::vector<std::pair<std::size_t, std::size_t>> alpha;
};

/// Witness that the two traces correspond: equal length, positional action
/// bijection, a time isomorphism when both are timed, and equal measures.
std::optional<IsoWitness> trace_iso(const Trace &a, const Trace &b, const MeasureResult &ha, const MeasureResult &hb);

/// Whether the pair matches under the given fixed maps.
bool matches_under(const Trace &a, const Trace &b, const MeasureResult &ha, const MeasureResult &hb,
                   const Relabelling &actions, const std::optional<TimeIso> &time);

enum class Verdict { Yes, No, Inconclusive };
std::string_view to_string(Verdict v);

/// Members whose measures differ under the best structural alignment found.
struct MeasureMismatch {
	Trace left;
	Trace right;
	MeasureResult left_measure;
	MeasureResult right_measure;
};

/// Product-class obstruction: for product classes every trace measure is a
/// product of per-action factors, so prod H(trace_i)^exponent_i must be 1
/// whenever the exponent-weighted action counts cancel. The recorded
/// product differs from 1.
struct MultiplicativeObstruction {
	bool left_side = false;
	std::vector<Trace> traces;
	std::vector<long> exponents;
	std::vector<Rational> measures;
	Rational product;
};

struct Certificate {
	enum class Kind { Structural, MeasureMismatch, Multiplicative };

	Kind kind = Kind::Structural;
	std::string reason;
	std::optional<MeasureMismatch> mismatch;
	std::optional<MultiplicativeObstruction> obstruction;
};

struct IsoResult {
	Verdict verdict = Verdict::No;
	std::optional<IsoWitness> witness;
	std::vector<Certificate> certificates;
	std::size_t nodes = 0;
};

/// A collection with the measure of each member.
struct MeasuredCollection {
	std::span<const Trace> traces;
	std::span<const MeasureResult> measures;
};

/// Searches for a global action relabelling (and the forced time
/// isomorphism) under which every member of a maps to a member of b with the
/// same measure. Inconclusive when the node budget runs out.
IsoResult collection_iso(const MeasuredCollection &a, const MeasuredCollection &b, std::size_t budget = 200'000);

/// Re-checks a witness pair by pair.
bool verify_witness(const MeasuredCollection &a, const MeasuredCollection &b, const IsoWitness &w);

struct ExpressOptions {
	enum class TimeMode {
		Auto,    ///< compare timestamps when both sides are TA/PTA or both STA/TAPD
		Timed,   ///< always compare timestamps (both sides must be timed)
		Untimed, ///< compare action sequences only
	};

	std::size_t depth = 2;
	MeasureContext left;
	MeasureContext right;
	TimeSampling sampling = CriticalDelays{};
	TimeMode time_mode = TimeMode::Auto;
	std::size_t budget = 200'000;
};

/// Bounded trace expressiveness: the trace sets of every length 1..depth are
/// matched with one global witness. "No" carries certificates.
IsoResult expresses(const Machine &m, const Machine &n, const ExpressOptions &options);

/// Product-class obstruction among the measured traces, if one exists.
std::optional<MultiplicativeObstruction> find_multiplicative_obstruction(std::span<const Trace> traces,
                                                                         std::span<const MeasureResult> measures,
                                                                         std::size_t action_count);

} // namespace traceexpr
