#pragma once

#include "traceexpr/machine.hpp"
#include "traceexpr/polynomial.hpp"

#include <vector>

namespace traceexpr {

/// Probability polynomial of the edge from i to j.
///
/// Direct mode returns the degree-bounded Taylor polynomial of the edge
/// function. Normalized mode divides it by the sum, over the edges leaving
/// i, of the integral of the coefficient-wise absolute value of their Taylor
/// polynomials over their domains.
/// Throws InvalidArgument for a missing edge or a zero normaliser.
Polynomial edge_probability(const PolyDelayAutomaton &d, StateId i, StateId j);

/// edge_probability for every edge, indexed by edge.
std::vector<Polynomial> edge_probabilities(const PolyDelayAutomaton &d);

} // namespace traceexpr
