#pragma once

#include "traceexpr/ids.hpp"
#include "traceexpr/machine.hpp"
#include "traceexpr/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace traceexpr {

/// Weights for the edges or the actions of a non-probabilistic machine.
struct WeightingMap {
	enum class Scope { Edges, Actions };

	Scope scope = Scope::Actions;
	/// Keyed by EdgeRef or ActionId according to the scope.
	std::map<std::size_t, Rational> weights;

	[[nodiscard]] std::optional<Rational> get(std::size_t key) const;
	friend bool operator==(const WeightingMap &, const WeightingMap &) = default;
};

/// Problems with the weighting for this machine; empty when admissible.
/// Every weight must lie in (0,1) and the weights must sum to 1; in edge
/// scope, edges sharing source and action must carry equal weights.
std::vector<std::string> check_weighting(const Machine &m, const WeightingMap &w);

/// 1/|E| on every edge.
WeightingMap uniform_edge_weighting(const Machine &m);
/// 1/|Gamma| on every action.
WeightingMap uniform_action_weighting(const Machine &m);

/// Action weights obtained by summing the weights of the edges carrying each
/// action. Identity for action-scoped maps.
WeightingMap to_action_weighting(const Machine &m, const WeightingMap &w);

} // namespace traceexpr
