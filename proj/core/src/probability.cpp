#include "traceexpr/probability.hpp"

#include "traceexpr/error.hpp"

namespace traceexpr {

std::vector<Polynomial> edge_probabilities(const PolyDelayAutomaton &d) {
	const std::size_t m = d.clocks.size();
	std::vector<Polynomial> taylor;
	taylor.reserve(d.edges.size());
	for(const auto &e : d.edges) {
		taylor.push_back(taylor_truncate(e.function, d.degree, m));
	}
	if(d.mode == ProbabilityMode::Direct) {
		return taylor;
	}
	std::vector<Rational> mass(d.header.states.size(), Rational(0));
	for(std::size_t k = 0; k < d.edges.size(); ++k) {
		mass.at(d.edges[k].source) += poly_integrate(taylor[k].abs_coefficients(), d.edges[k].domain);
	}
	for(std::size_t k = 0; k < d.edges.size(); ++k) {
		const Rational &total = mass[d.edges[k].source];
		if(total.is_zero()) {
			throw InvalidArgument("normalized mode: zero total mass at state " + d.header.states[d.edges[k].source]);
		}
		taylor[k] *= total.inverse();
	}
	return taylor;
}

Polynomial edge_probability(const PolyDelayAutomaton &d, StateId i, StateId j) {
	const auto e = find_delay_edge(d.edges, i, j);
	if(!e) {
		throw InvalidArgument("no edge from state " + std::to_string(i) + " to state " + std::to_string(j));
	}
	const std::size_t m = d.clocks.size();
	Polynomial p = taylor_truncate(d.edges[*e].function, d.degree, m);
	if(d.mode == ProbabilityMode::Direct) {
		return p;
	}
	Rational total = 0;
	for(const auto &other : d.edges) {
		if(other.source == i) {
			total += poly_integrate(taylor_truncate(other.function, d.degree, m).abs_coefficients(), other.domain);
		}
	}
	if(total.is_zero()) {
		throw InvalidArgument("normalized mode: zero total mass at state " + d.header.states.at(i));
	}
	return p * total.inverse();
}

} // namespace traceexpr
