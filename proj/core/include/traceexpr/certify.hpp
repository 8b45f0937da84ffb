#pragma once

#include "traceexpr/machine.hpp"
#include "traceexpr/quadrature.hpp"
#include "traceexpr/rational.hpp"

#include <vector>

namespace traceexpr {

/// Three-state polynomial-delay automaton on one clock x in [0,1/2]: from
/// every state, one edge with x + 1/2 and one with 1/2 - x, cyclically.
/// Actions g1..g6.
PolyDelayAutomaton cycle_tapd();

/// A product-class machine expressing cycle_tapd would need
/// H(g1 g2)^2 = H(g1 g2 g1 g2); the certificate records both sides.
struct PtaStrictnessCertificate {
	Rational single;         ///< H(g1 g2)
	Rational doubled;        ///< H(g1 g2 g1 g2)
	Rational single_squared; ///< H(g1 g2)^2
	bool valid = false;      ///< single_squared != doubled
};

PtaStrictnessCertificate certify_pta_strictness();

struct TaylorGapRow {
	unsigned degree = 0;
	Rational truncated_integral; ///< exact integral of the truncation over [0,1]
	ApproxValue reference;       ///< quadrature of exp over [0,1]
	double gap = 0.0;            ///< reference - truncated_integral
	Rational lower_bound;        ///< exact lower bound on the gap
	Rational upper_bound;        ///< exact upper bound on the gap
	bool exceeds_tol = false;
};

struct TapdStrictnessCertificate {
	unsigned max_degree = 0;
	Rational tol;
	std::vector<TaylorGapRow> rows;
	/// Smallest degree whose gap is within tol; max_degree + 1 if none.
	unsigned threshold = 0;
	bool decreasing = false;
	/// Every gap lies within its exact bounds and exceeds tol whenever the
	/// lower bound does.
	bool consistent = false;
	/// tol is at least the degree-0 gap, so the table proves nothing.
	bool degenerate = false;
	bool valid = false;
};

/// Gap between the integral of exp(x) over [0,1] and the integrals of its
/// Taylor truncations for degrees 0..max_degree.
TapdStrictnessCertificate certify_tapd_strictness(unsigned max_degree, const Rational &tol);

} // namespace traceexpr
