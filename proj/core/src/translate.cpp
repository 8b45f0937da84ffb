#include "traceexpr/translate.hpp"

#include "traceexpr/error.hpp"
#include "traceexpr/probability.hpp"
#include "traceexpr/region.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace traceexpr {

namespace {

std::map<ActionId, ActionId> identity_actions(const MachineHeader &h) {
	std::map<ActionId, ActionId> out;
	for(ActionId a = 0; a < h.actions.size(); ++a) {
		out[a] = a;
	}
	return out;
}

std::map<StateId, StateId> identity_states(const MachineHeader &h) {
	std::map<StateId, StateId> out;
	for(StateId s = 0; s < h.states.size(); ++s) {
		out[s] = s;
	}
	return out;
}

/// Per-edge probabilities proportional to the weights of each source state.
template <class Edges>
std::vector<Rational> normalise_weights(const MachineHeader &h, const Edges &edges, const WeightingMap &w,
                                        std::vector<std::string> &notes) {
	std::vector<Rational> raw(edges.size(), Rational(0));
	for(std::size_t e = 0; e < edges.size(); ++e) {
		const std::size_t key = w.scope == WeightingMap::Scope::Edges ? e : edges[e].action;
		if(const auto v = w.get(key)) {
			if(v->sign() < 0) {
				throw InvalidArgument("negative weight for edge " + std::to_string(e));
			}
			raw[e] = *v;
		}
	}
	std::map<StateId, Rational> total;
	for(std::size_t e = 0; e < edges.size(); ++e) {
		total[edges[e].source] += raw[e];
	}
	for(const auto &[s, t] : total) {
		if(t.is_zero()) {
			throw InvalidArgument("state " + h.states.at(s) + " has outgoing edges but zero total weight");
		}
	}
	for(std::size_t e = 0; e < edges.size(); ++e) {
		if(raw[e].is_zero()) {
			notes.push_back("edge " + std::to_string(e) + " has no weight and is dropped");
		}
		raw[e] /= total[edges[e].source];
	}
	return raw;
}

} // namespace

TranslationReport nfa_to_ta(const Nfa &n) {
	TimedAutomaton t{n.header, {}, {}};
	for(const auto &e : n.edges) {
		t.edges.push_back({e.source, {}, ClockConstraint::truth(), e.action, e.target});
	}
	return {t, identity_states(n.header), identity_actions(n.header), {}, std::nullopt};
}

TranslationReport ta_to_nfa_region(const TimedAutomaton &t) {
	std::vector<ClockConstraint> guards;
	for(const auto &e : t.edges) {
		guards.push_back(e.guard);
	}
	const RegionScale scale = region_scale(guards, t.clocks.size());

	using Node = std::pair<StateId, ClockRegion>;
	std::map<Node, StateId> index;
	std::vector<Node> nodes;
	std::deque<StateId> queue;
	auto intern = [&](Node node) {
		auto [it, inserted] = index.emplace(node, nodes.size());
		if(inserted) {
			nodes.push_back(std::move(node));
			queue.push_back(it->second);
		}
		return it->second;
	};
	const auto out = outgoing_edges(Machine(t));
	intern({t.header.start, initial_region(t.clocks.size())});

	std::set<std::tuple<StateId, ActionId, StateId>> edge_set;
	std::vector<NfaEdge> edges;
	while(!queue.empty()) {
		const StateId id = queue.front();
		queue.pop_front();
		const auto [loc, region] = nodes[id];
		for(const auto &delayed : delay_successors(region, scale.bound)) {
			for(EdgeRef e : out[loc]) {
				const auto &edge = t.edges[e];
				if(!region_sat(delayed, edge.guard, scale)) {
					continue;
				}
				const StateId target = intern({edge.target, reset_region(delayed, edge.resets)});
				if(edge_set.insert({id, edge.action, target}).second) {
					edges.push_back({id, edge.action, target});
				}
			}
		}
	}

	Nfa n;
	n.header.name = t.header.name + "_regions";
	n.header.actions = t.header.actions;
	n.header.start = 0;
	TranslationReport report;
	for(StateId s = 0; s < nodes.size(); ++s) {
		n.header.states.push_back(t.header.states[nodes[s].first] + "_r" + std::to_string(s));
		report.state_origin[s] = nodes[s].first;
	}
	n.edges = std::move(edges);
	report.action_map = identity_actions(t.header);
	report.notes.push_back(std::to_string(nodes.size()) + " reachable (location, region) pairs; " +
	                       std::to_string(count_clock_regions(scale.bound)) + " clock regions in total");
	if(scale.scale != Rational(1)) {
		report.notes.push_back("guard constants scaled by " + scale.scale.to_string());
	}
	report.target = std::move(n);
	return report;
}

TranslationReport nfa_to_pa(const Nfa &n, const WeightingMap &w) {
	TranslationReport report;
	const auto probs = normalise_weights(n.header, n.edges, w, report.notes);
	ProbAutomaton p{n.header, {}};
	for(std::size_t e = 0; e < n.edges.size(); ++e) {
		if(probs[e].sign() > 0) {
			p.edges.push_back({n.edges[e].source, n.edges[e].target, probs[e], n.edges[e].action});
		}
	}
	report.target = std::move(p);
	report.state_origin = identity_states(n.header);
	report.action_map = identity_actions(n.header);
	return report;
}

TranslationReport pa_to_nfa(const ProbAutomaton &p) {
	TranslationReport report;
	Nfa n;
	n.header.name = p.header.name + "_split";
	n.header.actions = p.header.actions;
	n.header.start = 0;
	report.action_map = identity_actions(p.header);
	if(p.edges.empty()) {
		n.header.states.push_back(p.header.states[p.header.start]);
		report.state_origin[0] = p.header.start;
		report.target = std::move(n);
		return report;
	}
	std::vector<Rational> probs;
	for(const auto &e : p.edges) {
		probs.push_back(e.prob);
	}
	const Rational g = rat_gcd(probs);
	report.notes.push_back("probability gcd " + g.to_string());

	// Node 0 stands for the start state before any step; the other nodes are
	// the copies (edge, j) and stand for the edge's target.
	std::vector<StateId> stands_for{p.header.start};
	n.header.states.push_back(p.header.states[p.header.start] + "_start");
	std::vector<std::vector<StateId>> copies(p.edges.size());
	for(std::size_t e = 0; e < p.edges.size(); ++e) {
		const Rational count = p.edges[e].prob / g;
		const long k = count.numerator().get_si();
		for(long j = 0; j < k; ++j) {
			copies[e].push_back(n.header.states.size());
			stands_for.push_back(p.edges[e].target);
			n.header.states.push_back(p.header.states[p.edges[e].target] + "_e" + std::to_string(e) + "_" +
			                          std::to_string(j));
		}
	}
	for(StateId node = 0; node < stands_for.size(); ++node) {
		for(std::size_t e = 0; e < p.edges.size(); ++e) {
			if(p.edges[e].source != stands_for[node]) {
				continue;
			}
			for(StateId c : copies[e]) {
				n.edges.push_back({node, p.edges[e].action, c});
			}
		}
	}
	for(StateId s = 0; s < stands_for.size(); ++s) {
		report.state_origin[s] = stands_for[s];
	}

	// Action weights equal to the smallest probability carrying each action.
	std::map<ActionId, Rational> mu;
	for(const auto &e : p.edges) {
		auto [it, inserted] = mu.emplace(e.action, e.prob);
		if(!inserted) {
			it->second = std::min(it->second, e.prob);
		}
	}
	WeightingMap w{WeightingMap::Scope::Actions, mu};
	const auto problems = check_weighting(Machine(n), w);
	if(problems.empty()) {
		report.weighting = std::move(w);
	} else {
		report.notes.push_back("no admissible matching action weighting: " + problems.front());
	}
	report.target = std::move(n);
	return report;
}

TranslationReport ta_to_pta(const TimedAutomaton &t, const WeightingMap &w) {
	TranslationReport report;
	const auto probs = normalise_weights(t.header, t.edges, w, report.notes);
	ProbTimedAutomaton p{t.header, t.clocks, {}};
	for(std::size_t e = 0; e < t.edges.size(); ++e) {
		const auto &edge = t.edges[e];
		if(probs[e].sign() > 0) {
			p.edges.push_back({edge.source, edge.target, probs[e], edge.action, edge.guard, edge.resets});
		}
	}
	report.target = std::move(p);
	report.state_origin = identity_states(t.header);
	report.action_map = identity_actions(t.header);
	return report;
}

TranslationReport pa_to_pta(const ProbAutomaton &p) {
	ProbTimedAutomaton out{p.header, {}, {}};
	for(const auto &e : p.edges) {
		out.edges.push_back({e.source, e.target, e.prob, e.action, ClockConstraint::truth(), {}});
	}
	return {out, identity_states(p.header), identity_actions(p.header), {}, std::nullopt};
}

namespace {

/// Breakpoints of clock c in the guard, clipped to [0, bound].
std::vector<Rational> breakpoints(const ClockConstraint &guard, ClockId c, const Rational &bound) {
	std::set<Rational> pts{Rational(0), bound};
	for(const auto &a : guard.atoms()) {
		if(a.clock() == c && a.constant().sign() >= 0) {
			pts.insert(a.constant());
		}
	}
	return {pts.begin(), pts.end()};
}

/// Sample values for a clock: each breakpoint, each gap midpoint and one
/// value beyond the last breakpoint. Entry k belongs to cell k.
std::vector<Rational> cell_samples(const std::vector<Rational> &bp) {
	std::vector<Rational> out;
	for(std::size_t i = 0; i < bp.size(); ++i) {
		out.push_back(bp[i]);
		out.push_back(i + 1 < bp.size() ? (bp[i] + bp[i + 1]) / Rational(2) : bp[i] + Rational(1));
	}
	return out;
}

Rational scaled(const Rational &v, const Rational &bound) {
	const Rational r = v <= bound ? v / (bound + Rational(1)) : v / (bound + Rational(1, 2));
	return std::min(r, Rational(1));
}

} // namespace

TranslationReport pta_to_tapd(const ProbTimedAutomaton &a) {
	const std::size_t m = a.clocks.size();
	std::vector<ClockConstraint> guards;
	for(const auto &e : a.edges) {
		if(e.guard.contains_diagonal()) {
			throw InvalidArgument("diagonal guards are not supported by the delay construction");
		}
		guards.push_back(e.guard);
	}
	const auto bound = max_constants(guards, m);

	TranslationReport report;
	PolyDelayAutomaton d;
	d.header = a.header;
	d.clocks = a.clocks;
	d.clock_domains.assign(m, Interval{Rational(0), Rational(1)});
	d.degree = 0;
	d.mode = ProbabilityMode::Direct;
	std::set<std::pair<StateId, StateId>> used;
	bool guarded = false;
	for(std::size_t e = 0; e < a.edges.size(); ++e) {
		const auto &edge = a.edges[e];
		const std::string where = "edge " + std::to_string(e) + " (" + a.header.states[edge.source] + " -> " +
		                          a.header.states[edge.target] + ")";
		if(used.count({edge.source, edge.target})) {
			report.notes.push_back(where + " dropped: parallel to an earlier edge");
			continue;
		}
		if(!edge.resets.empty()) {
			report.notes.push_back(where + ": resets are implicit in the delay semantics");
		}
		guarded = guarded || edge.guard.kind() != ClockConstraint::Kind::True;

		std::vector<std::vector<Rational>> samples(m);
		for(ClockId c = 0; c < m; ++c) {
			samples[c] = cell_samples(breakpoints(edge.guard, c, bound[c]));
		}
		std::vector<std::set<std::size_t>> hit(m);
		std::vector<std::size_t> idx(m, 0);
		ClockInterpretation iota(m);
		bool any = false;
		while(true) {
			for(ClockId c = 0; c < m; ++c) {
				iota[c] = samples[c][idx[c]];
			}
			if(constraint_sat(iota, edge.guard)) {
				any = true;
				for(ClockId c = 0; c < m; ++c) {
					hit[c].insert(idx[c]);
				}
			}
			std::size_t c = 0;
			while(c < m && ++idx[c] == samples[c].size()) {
				idx[c++] = 0;
			}
			if(c == m) {
				break;
			}
		}
		if(!any) {
			report.notes.push_back(where + " dropped: guard is unsatisfiable");
			continue;
		}
		std::vector<Interval> domain;
		bool flat = false;
		for(ClockId c = 0; c < m; ++c) {
			const auto bp = breakpoints(edge.guard, c, bound[c]);
			Rational lo = 1;
			Rational hi = 0;
			for(std::size_t k : hit[c]) {
				const std::size_t i = k / 2;
				Rational inf;
				Rational sup;
				if(k % 2 == 0) {
					inf = sup = scaled(bp[i], bound[c]);
				} else if(i + 1 < bp.size()) {
					inf = scaled(bp[i], bound[c]);
					sup = scaled(bp[i + 1], bound[c]);
				} else {
					inf = bound[c] / (bound[c] + Rational(1, 2));
					sup = 1;
				}
				lo = std::min(lo, inf);
				hi = std::max(hi, sup);
			}
			flat = flat || lo >= hi;
			domain.push_back({lo, hi});
		}
		if(flat) {
			report.notes.push_back(where + " dropped: scaled guard domain has no interior");
			continue;
		}
		used.insert({edge.source, edge.target});
		d.edges.push_back({edge.source, edge.target, FuncExpr::constant(edge.prob), Box(domain), edge.action});
	}
	if(guarded) {
		report.notes.push_back("measure preservation holds exactly only for trivially guarded edges; "
		                       "scaled guard domains change integral-based measures");
	}
	report.state_origin = identity_states(a.header);
	report.action_map = identity_actions(a.header);
	report.target = std::move(d);
	return report;
}

TranslationReport tapd_to_sta(const PolyDelayAutomaton &d) {
	const auto probs = edge_probabilities(d);
	StochasticTimedAutomaton s{d.header, d.clocks, d.clock_domains, {}};
	for(std::size_t e = 0; e < d.edges.size(); ++e) {
		auto edge = d.edges[e];
		edge.function = FuncExpr::from_polynomial(probs[e]);
		s.edges.push_back(std::move(edge));
	}
	return {s, identity_states(d.header), identity_actions(d.header), {}, std::nullopt};
}

TranslationReport translate(const Machine &m, MachineClass target, const std::optional<WeightingMap> &weights) {
	const MachineClass source = machine_class(m);
	auto need_weights = [&]() -> const WeightingMap & {
		if(!weights) {
			throw InvalidArgument("this translation needs a weighting map");
		}
		return *weights;
	};
	using C = MachineClass;
	if(source == C::Nfa && target == C::Ta) {
		auto r = nfa_to_ta(std::get<Nfa>(m));
		r.weighting = weights;
		return r;
	}
	if(source == C::Ta && target == C::Nfa) {
		return ta_to_nfa_region(std::get<TimedAutomaton>(m));
	}
	if(source == C::Nfa && target == C::Pa) {
		return nfa_to_pa(std::get<Nfa>(m), need_weights());
	}
	if(source == C::Pa && target == C::Nfa) {
		return pa_to_nfa(std::get<ProbAutomaton>(m));
	}
	if(source == C::Ta && target == C::Pta) {
		return ta_to_pta(std::get<TimedAutomaton>(m), need_weights());
	}
	if(source == C::Pa && target == C::Pta) {
		return pa_to_pta(std::get<ProbAutomaton>(m));
	}
	if(source == C::Pta && target == C::Tapd) {
		return pta_to_tapd(std::get<ProbTimedAutomaton>(m));
	}
	if(source == C::Tapd && target == C::Sta) {
		return tapd_to_sta(std::get<PolyDelayAutomaton>(m));
	}
	throw InvalidArgument("no translation from " + std::string(class_keyword(source)) + " to " +
	                      std::string(class_keyword(target)));
}

} // namespace traceexpr
