#include "traceexpr/validate.hpp"

#include "traceexpr/error.hpp"
#include "traceexpr/probability.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace traceexpr {

std::string Violation::to_string() const { return location.empty() ? message : message + " at " + location; }

namespace {

class Checker {
public:
	explicit Checker(const MachineHeader &h) : h_(h) {}

	void add(std::string location, std::string message) {
		out_.push_back({std::move(location), std::move(message)});
	}

	std::string state(StateId s) const {
		return s < h_.states.size() ? h_.states[s] : "#" + std::to_string(s);
	}

	std::string action(ActionId a) const {
		return a < h_.actions.size() ? h_.actions[a] : "#" + std::to_string(a);
	}

	std::string edge(EdgeRef e, StateId s, StateId t, ActionId a) const {
		return "edge " + std::to_string(e) + " (" + state(s) + " -> " + state(t) + " on " + action(a) + ")";
	}

	void check_names(const std::vector<std::string> &names, const std::string &what) {
		std::set<std::string> seen;
		for(const auto &n : names) {
			if(!seen.insert(n).second) {
				add(what + " " + n, "duplicate " + what + " name");
			}
		}
	}

	void check_header() {
		if(h_.states.empty()) {
			add("header", "machine declares no states");
		} else if(h_.start >= h_.states.size()) {
			add("header", "start state out of range");
		}
		if(h_.actions.empty()) {
			add("header", "machine declares no actions");
		}
		check_names(h_.states, "state");
		check_names(h_.actions, "action");
	}

	/// False when an id is out of range; the caller skips further checks.
	bool check_ids(const std::string &loc, StateId s, StateId t, ActionId a) {
		bool ok = true;
		if(s >= h_.states.size()) {
			add(loc, "source state out of range");
			ok = false;
		}
		if(t >= h_.states.size()) {
			add(loc, "target state out of range");
			ok = false;
		}
		if(a >= h_.actions.size()) {
			add(loc, "action out of range");
			ok = false;
		}
		return ok;
	}

	void check_guard(const std::string &loc, const ClockConstraint &guard, const ClockSet &resets,
	                 std::size_t clocks) {
		if(guard.clock_bound() > clocks) {
			add(loc, "guard references an undeclared clock");
		}
		if(!std::is_sorted(resets.begin(), resets.end()) ||
		   std::adjacent_find(resets.begin(), resets.end()) != resets.end()) {
			add(loc, "reset set must be sorted and duplicate-free");
		}
		if(!resets.empty() && resets.back() >= clocks) {
			add(loc, "reset of an undeclared clock");
		}
	}

	template <class Edges> void check_mass(const Edges &edges) {
		std::map<StateId, Rational> mass;
		for(std::size_t e = 0; e < edges.size(); ++e) {
			const auto &edge = edges[e];
			const auto loc = this->edge(e, edge.source, edge.target, edge.action);
			if(edge.prob.sign() <= 0 || edge.prob > Rational(1)) {
				add(loc, "probability " + edge.prob.to_string() + " outside (0,1]");
			}
			mass[edge.source] += edge.prob;
		}
		for(const auto &[s, total] : mass) {
			if(total != Rational(1)) {
				add("state " + state(s), "outgoing mass " + total.to_string() + " ≠ 1");
			}
		}
	}

	void check_clock_domains(const std::vector<std::string> &clocks, const std::vector<Interval> &domains) {
		check_names(clocks, "clock");
		if(domains.size() != clocks.size()) {
			add("clocks", "expected one declared domain per clock");
			return;
		}
		for(std::size_t c = 0; c < domains.size(); ++c) {
			const auto &d = domains[c];
			if(d.lo.sign() < 0 || d.hi > Rational(1)) {
				add("clock " + clocks[c], "domain exceeds [0,1]");
			}
			if(d.lo >= d.hi) {
				add("clock " + clocks[c], "domain needs lo < hi");
			}
		}
	}

	/// Structural checks shared by STA and TAPD; returns false when sampling
	/// the functions would be unsafe.
	bool check_delay_edges(const std::vector<DelayEdge> &edges, std::size_t clocks) {
		bool ok = true;
		std::set<std::pair<StateId, StateId>> pairs;
		for(std::size_t e = 0; e < edges.size(); ++e) {
			const auto &edge = edges[e];
			const auto loc = this->edge(e, edge.source, edge.target, edge.action);
			ok = check_ids(loc, edge.source, edge.target, edge.action) && ok;
			if(!pairs.insert({edge.source, edge.target}).second) {
				add(loc, "more than one edge between the same pair of states");
			}
			if(edge.domain.arity() != clocks) {
				add(loc, "domain arity " + std::to_string(edge.domain.arity()) + " ≠ clock count " +
				             std::to_string(clocks));
				ok = false;
				continue;
			}
			if(!edge.domain.within_unit()) {
				add(loc, "domain exceeds [0,1]");
			}
			if(!edge.domain.nondegenerate()) {
				add(loc, "domain needs lo < hi on every clock");
			}
			if(edge.function.variable_bound() > clocks) {
				add(loc, "function uses an undeclared clock");
				ok = false;
			}
		}
		return ok;
	}

	std::vector<Violation> take() { return std::move(out_); }

private:
	const MachineHeader &h_;
	std::vector<Violation> out_;
};

std::vector<std::vector<Rational>> sample_points(const Box &box) {
	const std::size_t m = box.arity();
	const long steps = m <= 3 ? 4 : 2;
	std::vector<std::vector<Rational>> points{{}};
	for(std::size_t i = 0; i < m; ++i) {
		std::vector<std::vector<Rational>> next;
		for(const auto &p : points) {
			for(long k = 0; k <= steps; ++k) {
				auto q = p;
				q.push_back(box[i].lo + box[i].length() * Rational(k, steps));
				next.push_back(std::move(q));
			}
		}
		points = std::move(next);
	}
	return points;
}

std::string point_string(const std::vector<Rational> &p) {
	std::ostringstream os;
	os << "(";
	for(std::size_t i = 0; i < p.size(); ++i) {
		os << (i ? ", " : "") << p[i];
	}
	os << ")";
	return os.str();
}

/// Samples each state's outgoing probabilities over their domains.
template <class Value>
void check_ranges(Checker &chk, const MachineHeader &h, const std::vector<DelayEdge> &edges, Value value) {
	std::map<StateId, std::vector<std::size_t>> by_source;
	for(std::size_t e = 0; e < edges.size(); ++e) {
		by_source[edges[e].source].push_back(e);
	}
	for(const auto &[s, out] : by_source) {
		bool reported = false;
		for(std::size_t e : out) {
			for(const auto &p : sample_points(edges[e].domain)) {
				double sum = 0.0;
				for(std::size_t f : out) {
					if(!edges[f].domain.contains(p)) {
						continue;
					}
					const double v = value(f, p);
					sum += v;
					if(f == e && (v < -1e-12 || v > 1.0 + 1e-12) && !reported) {
						chk.add(chk.edge(e, edges[e].source, edges[e].target, edges[e].action),
						        "probability value " + std::to_string(v) + " outside [0,1] at point " +
						            point_string(p));
						reported = true;
					}
				}
				if(sum > 1.0 + 1e-9 && !reported) {
					chk.add("state " + h.states[s],
					        "outgoing probability sum " + std::to_string(sum) + " exceeds 1 at point " + point_string(p));
					reported = true;
				}
			}
		}
	}
}

std::vector<Violation> validate_impl(const Nfa &n) {
	Checker chk(n.header);
	chk.check_header();
	std::set<std::tuple<StateId, ActionId, StateId>> seen;
	for(std::size_t e = 0; e < n.edges.size(); ++e) {
		const auto &edge = n.edges[e];
		const auto loc = chk.edge(e, edge.source, edge.target, edge.action);
		chk.check_ids(loc, edge.source, edge.target, edge.action);
		if(!seen.insert({edge.source, edge.action, edge.target}).second) {
			chk.add(loc, "duplicate edge");
		}
	}
	return chk.take();
}

std::vector<Violation> validate_impl(const TimedAutomaton &t) {
	Checker chk(t.header);
	chk.check_header();
	chk.check_names(t.clocks, "clock");
	for(std::size_t e = 0; e < t.edges.size(); ++e) {
		const auto &edge = t.edges[e];
		const auto loc = chk.edge(e, edge.source, edge.target, edge.action);
		chk.check_ids(loc, edge.source, edge.target, edge.action);
		chk.check_guard(loc, edge.guard, edge.resets, t.clocks.size());
		for(std::size_t f = 0; f < e; ++f) {
			const auto &o = t.edges[f];
			if(o.source == edge.source && o.target == edge.target && o.action == edge.action &&
			   o.resets == edge.resets && o.guard == edge.guard) {
				chk.add(loc, "duplicate edge");
				break;
			}
		}
	}
	return chk.take();
}

std::vector<Violation> validate_impl(const ProbAutomaton &p) {
	Checker chk(p.header);
	chk.check_header();
	for(std::size_t e = 0; e < p.edges.size(); ++e) {
		const auto &edge = p.edges[e];
		chk.check_ids(chk.edge(e, edge.source, edge.target, edge.action), edge.source, edge.target, edge.action);
	}
	chk.check_mass(p.edges);
	return chk.take();
}

std::vector<Violation> validate_impl(const ProbTimedAutomaton &p) {
	Checker chk(p.header);
	chk.check_header();
	chk.check_names(p.clocks, "clock");
	for(std::size_t e = 0; e < p.edges.size(); ++e) {
		const auto &edge = p.edges[e];
		const auto loc = chk.edge(e, edge.source, edge.target, edge.action);
		chk.check_ids(loc, edge.source, edge.target, edge.action);
		chk.check_guard(loc, edge.guard, edge.resets, p.clocks.size());
	}
	chk.check_mass(p.edges);
	return chk.take();
}

std::vector<Violation> validate_impl(const StochasticTimedAutomaton &s) {
	Checker chk(s.header);
	chk.check_header();
	chk.check_clock_domains(s.clocks, s.clock_domains);
	const bool ok = chk.check_delay_edges(s.edges, s.clocks.size());
	auto out = chk.take();
	if(!ok || !out.empty()) {
		return out;
	}
	Checker ranges(s.header);
	check_ranges(ranges, s.header, s.edges, [&](std::size_t e, const std::vector<Rational> &p) {
		std::vector<double> x;
		for(const auto &r : p) {
			x.push_back(r.to_double());
		}
		return s.edges[e].function.evaluate(x);
	});
	return ranges.take();
}

std::vector<Violation> validate_impl(const PolyDelayAutomaton &d) {
	Checker chk(d.header);
	chk.check_header();
	chk.check_clock_domains(d.clocks, d.clock_domains);
	bool ok = chk.check_delay_edges(d.edges, d.clocks.size());
	for(std::size_t e = 0; e < d.edges.size(); ++e) {
		const auto &edge = d.edges[e];
		if(!has_rational_taylor_series(edge.function)) {
			chk.add(chk.edge(e, edge.source, edge.target, edge.action),
			        "exp argument must vanish at the origin for a rational Taylor polynomial");
			ok = false;
		}
	}
	auto out = chk.take();
	if(!ok || !out.empty()) {
		return out;
	}
	std::vector<Polynomial> probs;
	try {
		probs = edge_probabilities(d);
	} catch(const InvalidArgument &e) {
		out.push_back({"machine", e.what()});
		return out;
	}
	Checker ranges(d.header);
	check_ranges(ranges, d.header, d.edges, [&](std::size_t e, const std::vector<Rational> &p) {
		return probs[e].evaluate(std::span<const Rational>(p)).to_double();
	});
	return ranges.take();
}

} // namespace

std::vector<Violation> validate(const Machine &m) {
	return std::visit([](const auto &x) { return validate_impl(x); }, m);
}

void require_valid(const Machine &m) {
	const auto violations = validate(m);
	if(violations.empty()) {
		return;
	}
	std::string msg = "invalid machine:";
	for(const auto &v : violations) {
		msg += "\n  " + v.to_string();
	}
	throw InvalidArgument(msg);
}

} // namespace traceexpr
