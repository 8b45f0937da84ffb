#include "traceexpr/semantics.hpp"

#include "traceexpr/error.hpp"
#include "traceexpr/probability.hpp"
#include "traceexpr/region.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace traceexpr {

std::vector<EdgeRef> Run::edges() const {
	std::vector<EdgeRef> out;
	out.reserve(steps.size());
	for(const auto &s : steps) {
		out.push_back(s.edge);
	}
	return out;
}

std::vector<ActionId> Trace::actions() const {
	std::vector<ActionId> out;
	out.reserve(steps.size());
	for(const auto &s : steps) {
		out.push_back(s.action);
	}
	return out;
}

TimeSequence Trace::times() const {
	TimeSequence out;
	for(const auto &s : steps) {
		if(s.time) {
			out.push_back(*s.time);
		}
	}
	return out;
}

bool Trace::timed() const {
	return std::any_of(steps.begin(), steps.end(), [](const TraceStep &s) { return s.time.has_value(); });
}

namespace {

struct Config {
	StateId state = 0;
	ClockInterpretation clocks;
	Rational time;
};

std::vector<ClockConstraint> guards_of(const Machine &m) {
	std::vector<ClockConstraint> out;
	if(const auto *t = std::get_if<TimedAutomaton>(&m)) {
		for(const auto &e : t->edges) {
			out.push_back(e.guard);
		}
	} else if(const auto *p = std::get_if<ProbTimedAutomaton>(&m)) {
		for(const auto &e : p->edges) {
			out.push_back(e.guard);
		}
	}
	return out;
}

ClockInterpretation advance(const ClockInterpretation &v, const Rational &d) {
	ClockInterpretation out = v;
	for(auto &x : out) {
		x += d;
	}
	return out;
}

ClockInterpretation apply_reset(ClockInterpretation v, const ClockSet &resets) {
	for(ClockId c : resets) {
		v.at(c) = 0;
	}
	return v;
}

/// Successor generation shared by enumeration, untimed exploration and run
/// validation.
class Stepper {
public:
	Stepper(const Machine &m, std::optional<TimeSampling> sampling)
	    : m_(m), cls_(machine_class(m)), out_(outgoing_edges(m)), sampling_(std::move(sampling)) {
		clocks_ = clock_names(m).size();
		if(is_timed(cls_) && !sampling_) {
			throw InvalidArgument("timed machines need a time grid, a timed word or critical delays");
		}
		if(sampling_) {
			if(const auto *g = std::get_if<TimeGrid>(&*sampling_); g && g->step.sign() <= 0) {
				throw InvalidArgument("time grid step must be positive");
			}
			if(const auto *w = std::get_if<TimedWord>(&*sampling_)) {
				w->check();
			}
		}
		if(cls_ == MachineClass::Ta || cls_ == MachineClass::Pta) {
			const auto guards = guards_of(m);
			mpz_class den = 1;
			for(const auto &g : guards) {
				diagonal_ = diagonal_ || g.contains_diagonal();
				for(const auto &a : g.atoms()) {
					mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), a.constant().denominator().get_mpz_t());
				}
			}
			grid_ = Rational(mpq_class(mpz_class(1), den));
			maxima_ = max_constants(guards, clocks_);
			if(!diagonal_) {
				scale_ = region_scale(guards, clocks_);
			}
		}
		if(const auto *d = std::get_if<PolyDelayAutomaton>(&m)) {
			probs_ = edge_probabilities(*d);
		}
		if(is_delay_class(cls_)) {
			std::set<Rational> points{Rational(1)};
			for(const auto &e : delay_edges()) {
				for(const auto &iv : e.domain.intervals()) {
					for(const auto &x : {iv.lo, iv.hi}) {
						if(x.sign() > 0 && x <= Rational(1)) {
							points.insert(x);
						}
					}
				}
			}
			Rational prev = 0;
			for(const auto &p : points) {
				delay_points_.push_back((prev + p) / Rational(2));
				delay_points_.push_back(p);
				prev = p;
			}
		}
	}

	[[nodiscard]] Config initial() const {
		return {header(m_).start, ClockInterpretation(clocks_, Rational(0)), Rational(0)};
	}

	[[nodiscard]] bool diagonal() const { return diagonal_; }
	[[nodiscard]] const RegionScale &scale() const { return scale_; }

	/// Successors of c as the pos-th step, in edge order then time order.
	void successors(const Config &c, std::size_t pos, std::vector<std::pair<RunStep, Config>> &out) const {
		out.clear();
		if(c.state >= out_.size()) {
			return;
		}
		if(!is_timed(cls_)) {
			for(EdgeRef e : out_[c.state]) {
				const auto v = edge_view(m_, e);
				RunStep step{c.state, e, v.action, std::nullopt, {}, {}, std::nullopt};
				if(const auto *p = std::get_if<ProbAutomaton>(&m_)) {
					step.prob = p->edges[e].prob;
				}
				out.emplace_back(std::move(step), Config{v.target, {}, 0});
			}
			return;
		}
		const auto delays = candidate_delays(c, pos);
		for(EdgeRef e : out_[c.state]) {
			const auto v = edge_view(m_, e);
			if(const auto *w = std::get_if<TimedWord>(&*sampling_); w && w->actions[pos] != v.action) {
				continue;
			}
			for(const auto &d : delays) {
				auto next = fire(c, e, d);
				if(next) {
					out.push_back(std::move(*next));
				}
			}
		}
	}

	/// The step taking edge e after delay d from c, if enabled.
	[[nodiscard]] std::optional<std::pair<RunStep, Config>> fire(const Config &c, EdgeRef e, const Rational &d) const {
		const auto v = edge_view(m_, e);
		const Rational t = c.time + d;
		if(cls_ == MachineClass::Ta || cls_ == MachineClass::Pta) {
			const ClockConstraint *guard = nullptr;
			const ClockSet *resets = nullptr;
			std::optional<Rational> prob;
			if(const auto *ta = std::get_if<TimedAutomaton>(&m_)) {
				guard = &ta->edges[e].guard;
				resets = &ta->edges[e].resets;
			} else {
				const auto &pe = std::get<ProbTimedAutomaton>(m_).edges[e];
				guard = &pe.guard;
				resets = &pe.resets;
				prob = pe.prob;
			}
			auto at_fire = advance(c.clocks, d);
			if(!constraint_sat(at_fire, *guard)) {
				return std::nullopt;
			}
			auto after = apply_reset(at_fire, *resets);
			return std::pair{RunStep{c.state, e, v.action, t, std::move(at_fire), *resets, prob},
			                 Config{v.target, std::move(after), t}};
		}
		ClockInterpretation iota(clocks_, d);
		const auto &edge = delay_edges()[e];
		if(!edge.domain.contains(iota) || !positive(e, iota)) {
			return std::nullopt;
		}
		ClockSet all(clocks_);
		for(ClockId i = 0; i < clocks_; ++i) {
			all[i] = i;
		}
		return std::pair{RunStep{c.state, e, v.action, t, std::move(iota), std::move(all), std::nullopt},
		                 Config{v.target, ClockInterpretation(clocks_, Rational(0)), t}};
	}

	/// Probability of edge e at iota is positive.
	[[nodiscard]] bool positive(EdgeRef e, const ClockInterpretation &iota) const {
		if(cls_ == MachineClass::Tapd) {
			return probs_[e].evaluate(std::span<const Rational>(iota)).sign() > 0;
		}
		std::vector<double> x;
		for(const auto &r : iota) {
			x.push_back(r.to_double());
		}
		return std::get<StochasticTimedAutomaton>(m_).edges[e].function.evaluate(x) > 0.0;
	}

	[[nodiscard]] const std::vector<DelayEdge> &delay_edges() const {
		if(const auto *d = std::get_if<PolyDelayAutomaton>(&m_)) {
			return d->edges;
		}
		return std::get<StochasticTimedAutomaton>(m_).edges;
	}

private:
	[[nodiscard]] std::vector<Rational> candidate_delays(const Config &c, std::size_t pos) const {
		std::vector<Rational> out;
		if(const auto *g = std::get_if<TimeGrid>(&*sampling_)) {
			const mpz_class first = (c.time / g->step).floor() + 1;
			for(Rational t = Rational(mpq_class(first)) * g->step; t <= g->horizon; t += g->step) {
				out.push_back(t - c.time);
			}
			return out;
		}
		if(const auto *w = std::get_if<TimedWord>(&*sampling_)) {
			if(pos < w->times.size() && w->times[pos] > c.time) {
				out.push_back(w->times[pos] - c.time);
			}
			return out;
		}
		if(is_delay_class(cls_)) {
			return delay_points_;
		}
		std::set<Rational> points;
		for(ClockId k = 0; k < clocks_; ++k) {
			const Rational &v = c.clocks[k];
			if(v >= maxima_[k]) {
				continue;
			}
			Rational q = Rational(mpq_class((v / grid_).floor() + 1)) * grid_;
			for(; q <= maxima_[k]; q += grid_) {
				points.insert(q - v);
			}
		}
		Rational prev = 0;
		for(const auto &p : points) {
			out.push_back((prev + p) / Rational(2));
			out.push_back(p);
			prev = p;
		}
		out.push_back(prev + Rational(1));
		return out;
	}

	const Machine &m_;
	MachineClass cls_;
	std::vector<std::vector<EdgeRef>> out_;
	std::optional<TimeSampling> sampling_;
	std::size_t clocks_ = 0;
	bool diagonal_ = false;
	Rational grid_{1};
	std::vector<Rational> maxima_;
	RegionScale scale_;
	std::vector<Polynomial> probs_;
	std::vector<Rational> delay_points_;
};

} // namespace

std::vector<Run> enumerate_runs(const Machine &m, std::size_t depth, const std::optional<TimeSampling> &sampling,
                                const EnumerateOptions &options) {
	std::optional<TimeSampling> effective = sampling;
	if(!is_timed(machine_class(m))) {
		effective.reset();
	}
	const Stepper stepper(m, effective);
	if(effective) {
		if(const auto *w = std::get_if<TimedWord>(&*effective)) {
			depth = std::min(depth, w->actions.size());
		}
	}
	std::vector<Run> out;
	Run current{machine_class(m), header(m).start, {}};
	std::vector<std::vector<std::pair<RunStep, Config>>> buffers(depth + 1);

	auto emit = [&]() {
		if(out.size() >= options.limit) {
			throw Error("run enumeration exceeded the limit of " + std::to_string(options.limit) + " runs");
		}
		out.push_back(current);
	};
	auto rec = [&](auto &&self, const Config &c, std::size_t pos) -> void {
		if(pos == depth) {
			emit();
			return;
		}
		if(options.include_shorter) {
			emit();
		}
		auto &succ = buffers[pos];
		stepper.successors(c, pos, succ);
		const auto local = std::move(succ);
		for(const auto &[step, next] : local) {
			current.steps.push_back(step);
			self(self, next, pos + 1);
			current.steps.pop_back();
		}
	};
	rec(rec, stepper.initial(), 0);
	return out;
}

Trace hide(const Run &run) {
	Trace t{run.machine_class, {}};
	t.steps.reserve(run.steps.size());
	for(const auto &s : run.steps) {
		t.steps.push_back({s.action, s.time});
	}
	return t;
}

Trace untime(const Trace &trace) {
	Trace t = trace;
	for(auto &s : t.steps) {
		s.time.reset();
	}
	return t;
}

TraceCollection traces_of(const Machine &m, std::size_t depth, const std::optional<TimeSampling> &sampling,
                          const EnumerateOptions &options) {
	std::set<Trace> seen;
	for(const auto &r : enumerate_runs(m, depth, sampling, options)) {
		seen.insert(hide(r));
	}
	return {seen.begin(), seen.end()};
}

TraceCollection untimed_traces(const Machine &m, std::size_t depth) {
	const MachineClass cls = machine_class(m);
	const Stepper stepper(m, is_timed(cls) ? std::optional<TimeSampling>(CriticalDelays{}) : std::nullopt);

	struct Key {
		std::vector<ActionId> actions;
		StateId state;
		std::optional<ClockRegion> region;
		std::vector<Rational> exact;
		auto operator<=>(const Key &) const = default;
	};
	auto key_of = [&](const std::vector<ActionId> &actions, const Config &c) {
		Key k{actions, c.state, std::nullopt, {}};
		if(cls == MachineClass::Ta || cls == MachineClass::Pta) {
			if(stepper.diagonal()) {
				k.exact = c.clocks;
			} else {
				k.region = region_of(c.clocks, stepper.scale());
			}
		}
		return k;
	};

	std::map<Key, Config> layer;
	layer.emplace(key_of({}, stepper.initial()), stepper.initial());
	std::vector<std::pair<RunStep, Config>> succ;
	for(std::size_t pos = 0; pos < depth; ++pos) {
		std::map<Key, Config> next;
		for(const auto &[key, config] : layer) {
			stepper.successors(config, pos, succ);
			for(auto &[step, cfg] : succ) {
				auto actions = key.actions;
				actions.push_back(step.action);
				cfg.time = 0;
				next.emplace(key_of(actions, cfg), std::move(cfg));
			}
		}
		layer = std::move(next);
	}
	std::set<Trace> seen;
	for(const auto &[key, config] : layer) {
		Trace t{cls, {}};
		for(ActionId a : key.actions) {
			t.steps.push_back({a, std::nullopt});
		}
		seen.insert(std::move(t));
	}
	return {seen.begin(), seen.end()};
}

std::optional<std::pair<std::size_t, std::size_t>> check_prefix_free(std::span<const Trace> collection) {
	std::vector<std::size_t> order(collection.size());
	for(std::size_t i = 0; i < order.size(); ++i) {
		order[i] = i;
	}
	std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
		if(collection[a] != collection[b]) {
			return collection[a].steps < collection[b].steps;
		}
		return a < b;
	});
	// In lexicographic order a prefix sorts directly before some extension.
	for(std::size_t k = 1; k < order.size(); ++k) {
		const auto &a = collection[order[k - 1]].steps;
		const auto &b = collection[order[k]].steps;
		if(prefix_order(a, b) != PrefixRelation::Incomparable) {
			return std::pair{order[k - 1], order[k]};
		}
	}
	return std::nullopt;
}

std::vector<std::string> validate_run(const Machine &m, const Run &run) {
	std::vector<std::string> issues;
	const MachineClass cls = machine_class(m);
	if(run.machine_class != cls) {
		issues.emplace_back("run belongs to a different machine class");
		return issues;
	}
	if(run.start != header(m).start) {
		issues.emplace_back("run does not start at the start state");
	}
	const std::size_t n = edge_count(m);
	const std::size_t clocks = clock_names(m).size();
	ClockInterpretation iota(clocks, Rational(0));
	Rational time = 0;
	StateId state = run.start;
	const std::optional<Stepper> stepper =
	    is_timed(cls) ? std::optional<Stepper>(std::in_place, m, CriticalDelays{}) : std::nullopt;
	for(std::size_t i = 0; i < run.steps.size(); ++i) {
		const auto &s = run.steps[i];
		const std::string where = "step " + std::to_string(i) + ": ";
		if(s.edge >= n) {
			issues.push_back(where + "edge out of range");
			return issues;
		}
		const auto v = edge_view(m, s.edge);
		if(s.state != state || v.source != state) {
			issues.push_back(where + "edge does not leave the current state");
		}
		if(s.action != v.action) {
			issues.push_back(where + "action differs from the edge label");
		}
		if(is_probabilistic(cls)) {
			const Rational p = cls == MachineClass::Pa ? std::get<ProbAutomaton>(m).edges[s.edge].prob
			                                           : std::get<ProbTimedAutomaton>(m).edges[s.edge].prob;
			if(!s.prob || *s.prob != p || p.sign() <= 0) {
				issues.push_back(where + "probability does not match a positive edge probability");
			}
		}
		if(is_timed(cls)) {
			if(!s.time || *s.time <= time) {
				issues.push_back(where + "timestamps must be positive and strictly increasing");
				return issues;
			}
			const Rational d = *s.time - time;
			const auto fired = stepper->fire(Config{state, iota, time}, s.edge, d);
			if(!fired) {
				issues.push_back(where + "edge not enabled at the recorded time");
				return issues;
			}
			if(fired->first.clocks != s.clocks || fired->first.resets != s.resets) {
				issues.push_back(where + "clock values or resets do not follow from the delay");
			}
			iota = fired->second.clocks;
			time = *s.time;
		} else if(s.time) {
			issues.push_back(where + "untimed class with a timestamp");
		}
		state = v.target;
	}
	return issues;
}

std::string to_string(const Trace &trace, const MachineHeader &h) {
	std::ostringstream os;
	for(std::size_t i = 0; i < trace.steps.size(); ++i) {
		const auto &s = trace.steps[i];
		os << (i ? " " : "") << (s.action < h.actions.size() ? h.actions[s.action] : "?");
		if(s.time) {
			os << "@" << *s.time;
		}
	}
	return os.str();
}

std::string to_string(const Run &run, const Machine &m) {
	const auto &h = header(m);
	std::ostringstream os;
	os << h.states.at(run.start);
	for(const auto &s : run.steps) {
		os << " -" << h.actions.at(s.action);
		if(s.time) {
			os << "@" << *s.time;
		}
		os << "-> " << h.states.at(edge_view(m, s.edge).target);
	}
	return os.str();
}

} // namespace traceexpr
