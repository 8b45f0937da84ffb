#include "traceexpr/certify.hpp"

#include "traceexpr/error.hpp"
#include "traceexpr/measure.hpp"
#include "traceexpr/polynomial.hpp"

#include <cmath>

namespace traceexpr {

PolyDelayAutomaton cycle_tapd() {
	PolyDelayAutomaton m;
	m.header.name = "cycle";
	m.header.states = {"1", "2", "3"};
	m.header.start = 0;
	m.header.actions = {"g1", "g2", "g3", "g4", "g5", "g6"};
	m.clocks = {"x"};
	m.clock_domains = {Interval{0, Rational(1, 2)}};
	m.degree = 1;
	m.mode = ProbabilityMode::Direct;
	const FuncExpr x = FuncExpr::variable(0);
	const FuncExpr half = FuncExpr::constant(Rational(1, 2));
	const Box domain({Interval{0, Rational(1, 2)}});
	const StateId next[3][2] = {{1, 2}, {0, 2}, {0, 1}};
	ActionId action = 0;
	for(StateId s = 0; s < 3; ++s) {
		m.edges.push_back({s, next[s][0], x + half, domain, action++});
		m.edges.push_back({s, next[s][1], half - x, domain, action++});
	}
	return m;
}

PtaStrictnessCertificate certify_pta_strictness() {
	const Machine m = cycle_tapd();
	MeasureEngine engine(m);
	const std::vector<ActionId> once{0, 1};
	const std::vector<ActionId> twice{0, 1, 0, 1};
	PtaStrictnessCertificate c;
	c.single = engine.trace_actions(once).exact_value();
	c.doubled = engine.trace_actions(twice).exact_value();
	c.single_squared = c.single * c.single;
	c.valid = c.single_squared != c.doubled;
	return c;
}

TapdStrictnessCertificate certify_tapd_strictness(unsigned max_degree, const Rational &tol) {
	if(tol.sign() <= 0) {
		throw InvalidArgument("tol must be positive");
	}
	TapdStrictnessCertificate c;
	c.max_degree = max_degree;
	c.tol = tol;
	const FuncExpr f = exp(FuncExpr::variable(0));
	const Box unit = Box::unit(1);
	const ApproxValue reference = quad_integrate(f, unit, Rational(1, 1'000'000'000'000));
	const double t = tol.to_double();
	c.threshold = max_degree + 1;
	for(unsigned d = 0; d <= max_degree; ++d) {
		TaylorGapRow row;
		row.degree = d;
		row.truncated_integral = poly_integrate(taylor_truncate(f, d, 1), unit);
		row.reference = reference;
		row.gap = reference.value - row.truncated_integral.to_double();
		// Tail sum_{n >= d+2} 1/n!, bounded by its first term and a geometric series.
		const Rational first = factorial(d + 2).inverse();
		row.lower_bound = first;
		row.upper_bound = first * Rational(static_cast<long>(d) + 3, static_cast<long>(d) + 2);
		row.exceeds_tol = row.gap > t;
		if(!row.exceeds_tol && c.threshold > max_degree) {
			c.threshold = d;
		}
		c.rows.push_back(std::move(row));
	}
	c.decreasing = true;
	for(std::size_t i = 1; i < c.rows.size(); ++i) {
		c.decreasing = c.decreasing && c.rows[i].gap < c.rows[i - 1].gap;
	}
	c.consistent = true;
	for(const auto &row : c.rows) {
		const double slack = row.reference.error + 1e-15;
		const bool bounded =
		    row.gap >= row.lower_bound.to_double() - slack && row.gap <= row.upper_bound.to_double() + slack;
		const bool forced_above = row.lower_bound > tol;
		const bool forced_below = row.upper_bound <= tol;
		c.consistent = c.consistent && bounded && (!forced_above || row.exceeds_tol) &&
		               (!forced_below || !row.exceeds_tol);
	}
	c.degenerate = c.rows.empty() || !(c.rows.front().gap > t);
	c.valid = c.decreasing && c.consistent && !c.degenerate;
	return c;
}

} // namespace traceexpr
