#pragma once

#include "traceexpr/box.hpp"
#include "traceexpr/machine.hpp"
#include "traceexpr/polynomial.hpp"
#include "traceexpr/quadrature.hpp"
#include "traceexpr/rational.hpp"
#include "traceexpr/semantics.hpp"
#include "traceexpr/weighting.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace traceexpr {

/// Value of H or L: exact, or approximate with an error bound when
/// quadrature was needed.
struct MeasureResult {
	enum class Kind { Run, Trace, Collection };

	Kind kind = Kind::Run;
	std::variant<Rational, ApproxValue> value = Rational(0);
	/// Boxes integrated over (STA/TAPD only).
	std::vector<Box> region;
	/// Set when the integration region was empty and the value defaulted to 0.
	bool empty_region = false;

	[[nodiscard]] bool exact() const { return std::holds_alternative<Rational>(value); }
	/// Throws InvalidArgument for approximate results.
	[[nodiscard]] const Rational &exact_value() const;
	[[nodiscard]] double approx() const;
	[[nodiscard]] double error() const;
	/// "1/12" or "0.3333333333 ± 1e-10".
	[[nodiscard]] std::string to_string() const;
};

/// Exact equality for exact values; overlapping error intervals otherwise.
bool measures_equal(const MeasureResult &a, const MeasureResult &b);

struct MeasureContext {
	/// Required for NFA and TA, rejected for the other classes.
	std::optional<WeightingMap> weights;
	QuadratureConfig quadrature;
};

/// Measures for one machine, with the per-machine setup (Taylor
/// polynomials, action weights) done once. Results are cached by edge or
/// action sequence. Holds its own copy of the machine. Not thread-safe; use
/// one engine per thread.
class MeasureEngine {
public:
	explicit MeasureEngine(const Machine &m, MeasureContext ctx = {});

	[[nodiscard]] const Machine &machine() const { return m_; }

	/// H of a run: product of weights or probabilities, or the integral of the
	/// product of edge functions over the union of consecutive domain overlaps.
	MeasureResult run(const Run &run);
	MeasureResult run_edges(std::span<const EdgeRef> edges);

	/// H of a trace: product of action weights (probabilistic classes use the
	/// smallest probability carrying the action), or the integral of the
	/// product of the action's edge functions over their common domain.
	MeasureResult trace(const Trace &trace);
	MeasureResult trace_actions(std::span<const ActionId> actions);

	/// L: the sum of H over a prefix-free collection. Throws InvalidArgument on
	/// a prefix violation unless the check is disabled.
	MeasureResult collection(std::span<const Trace> traces, bool require_prefix_free = true);
	MeasureResult run_collection(std::span<const Run> runs, bool require_prefix_free = true);

	/// True for classes whose trace measure is a product of per-action factors.
	[[nodiscard]] bool product_class() const;
	/// Per-action factor of a product class.
	[[nodiscard]] Rational action_factor(ActionId a) const;

private:
	MeasureResult integrate(const std::vector<EdgeRef> &edges, std::vector<Box> region, MeasureResult::Kind kind);
	[[nodiscard]] EdgeRef edge_for_action(ActionId a) const;

	Machine m_;
	MeasureContext ctx_;
	MachineClass cls_;
	std::vector<Polynomial> probs_;
	std::map<ActionId, Rational> action_factor_;
	std::map<std::vector<EdgeRef>, MeasureResult> run_cache_;
	std::map<std::vector<ActionId>, MeasureResult> trace_cache_;
};

MeasureResult run_measure(const Machine &m, const MeasureContext &ctx, const Run &run);
MeasureResult trace_measure(const Machine &m, const MeasureContext &ctx, const Trace &trace);
MeasureResult collection_measure(const Machine &m, const MeasureContext &ctx, std::span<const Trace> traces,
                                 bool require_prefix_free = true);

} // namespace traceexpr
