#include "traceexpr/measure.hpp"

#include "traceexpr/error.hpp"
#include "traceexpr/probability.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace traceexpr {

const Rational &MeasureResult::exact_value() const {
	if(!exact()) {
		throw InvalidArgument("measure is approximate");
	}
	return std::get<Rational>(value);
}

double MeasureResult::approx() const {
	return exact() ? std::get<Rational>(value).to_double() : std::get<ApproxValue>(value).value;
}

double MeasureResult::error() const { return exact() ? 0.0 : std::get<ApproxValue>(value).error; }

std::string MeasureResult::to_string() const {
	if(exact()) {
		return std::get<Rational>(value).to_string();
	}
	std::ostringstream os;
	os.precision(12);
	os << approx() << " ± ";
	os.precision(3);
	os << error();
	return os.str();
}

bool measures_equal(const MeasureResult &a, const MeasureResult &b) {
	if(a.exact() && b.exact()) {
		return a.exact_value() == b.exact_value();
	}
	return std::fabs(a.approx() - b.approx()) <= a.error() + b.error();
}

namespace {

const std::vector<DelayEdge> *delay_edges(const Machine &m) {
	if(const auto *d = std::get_if<PolyDelayAutomaton>(&m)) {
		return &d->edges;
	}
	if(const auto *s = std::get_if<StochasticTimedAutomaton>(&m)) {
		return &s->edges;
	}
	return nullptr;
}

MeasureResult exact_result(MeasureResult::Kind kind, Rational v) {
	MeasureResult r;
	r.kind = kind;
	r.value = std::move(v);
	return r;
}

void accumulate(MeasureResult &sum, const MeasureResult &part) {
	if(sum.exact() && part.exact()) {
		sum.value = sum.exact_value() + part.exact_value();
		return;
	}
	ApproxValue acc{sum.approx() + part.approx(), sum.error() + part.error()};
	sum.value = acc;
}

Trace as_sequence(const Run &run) {
	Trace t{run.machine_class, {}};
	for(const auto &s : run.steps) {
		t.steps.push_back({s.edge, s.time});
	}
	return t;
}

} // namespace

MeasureEngine::MeasureEngine(const Machine &m, MeasureContext ctx) : m_(m), ctx_(std::move(ctx)), cls_(machine_class(m)) {
	const bool weighted = cls_ == MachineClass::Nfa || cls_ == MachineClass::Ta;
	if(weighted && !ctx_.weights) {
		throw InvalidArgument("a weighting map is required for NFA and TA machines");
	}
	if(!weighted && ctx_.weights) {
		throw InvalidArgument("weighting maps apply only to NFA and TA machines");
	}
	if(weighted) {
		const auto actions = to_action_weighting(m, *ctx_.weights);
		action_factor_ = actions.weights;
	}
	if(is_probabilistic(cls_)) {
		const std::size_t n = edge_count(m);
		for(EdgeRef e = 0; e < n; ++e) {
			const Rational p = cls_ == MachineClass::Pa ? std::get<ProbAutomaton>(m).edges[e].prob
			                                            : std::get<ProbTimedAutomaton>(m).edges[e].prob;
			const ActionId a = edge_view(m, e).action;
			auto it = action_factor_.find(a);
			if(it == action_factor_.end()) {
				action_factor_.emplace(a, p);
			} else {
				it->second = std::min(it->second, p);
			}
		}
	}
	if(const auto *d = std::get_if<PolyDelayAutomaton>(&m)) {
		probs_ = edge_probabilities(*d);
	}
}

bool MeasureEngine::product_class() const { return !is_delay_class(cls_); }

Rational MeasureEngine::action_factor(ActionId a) const {
	const auto it = action_factor_.find(a);
	if(it == action_factor_.end()) {
		if(a >= header(m_).actions.size()) {
			throw InvalidArgument("action " + std::to_string(a) + " not present in machine");
		}
		if(is_probabilistic(cls_)) {
			throw InvalidArgument("action " + header(m_).actions[a] + " not present in machine");
		}
		throw InvalidArgument("weight missing for action " + header(m_).actions[a]);
	}
	return it->second;
}

MeasureResult MeasureEngine::run(const Run &run) {
	if(run.machine_class != cls_) {
		throw InvalidArgument("run belongs to a different machine class");
	}
	return run_edges(run.edges());
}

MeasureResult MeasureEngine::run_edges(std::span<const EdgeRef> edges) {
	std::vector<EdgeRef> key(edges.begin(), edges.end());
	if(const auto it = run_cache_.find(key); it != run_cache_.end()) {
		return it->second;
	}
	const std::size_t n = edge_count(m_);
	for(EdgeRef e : key) {
		if(e >= n) {
			throw InvalidArgument("edge " + std::to_string(e) + " out of range");
		}
	}
	MeasureResult result;
	if(key.empty()) {
		result = exact_result(MeasureResult::Kind::Run, 1);
	} else if(cls_ == MachineClass::Nfa || cls_ == MachineClass::Ta) {
		Rational h = 1;
		for(EdgeRef e : key) {
			const bool by_edge = ctx_.weights->scope == WeightingMap::Scope::Edges;
			const auto w = ctx_.weights->get(by_edge ? e : edge_view(m_, e).action);
			if(!w) {
				throw InvalidArgument("weight missing for traversed edge " + std::to_string(e));
			}
			h *= *w;
		}
		result = exact_result(MeasureResult::Kind::Run, h);
	} else if(is_probabilistic(cls_)) {
		Rational h = 1;
		for(EdgeRef e : key) {
			h *= cls_ == MachineClass::Pa ? std::get<ProbAutomaton>(m_).edges[e].prob
			                              : std::get<ProbTimedAutomaton>(m_).edges[e].prob;
		}
		result = exact_result(MeasureResult::Kind::Run, h);
	} else {
		const auto &de = *delay_edges(m_);
		std::vector<Box> region;
		if(key.size() == 1) {
			region.push_back(de[key[0]].domain);
		}
		for(std::size_t i = 0; i + 1 < key.size(); ++i) {
			if(auto b = de[key[i]].domain.intersect(de[key[i + 1]].domain)) {
				region.push_back(std::move(*b));
			}
		}
		result = integrate(key, std::move(region), MeasureResult::Kind::Run);
	}
	run_cache_.emplace(std::move(key), result);
	return result;
}

EdgeRef MeasureEngine::edge_for_action(ActionId a) const {
	const auto &de = *delay_edges(m_);
	std::optional<EdgeRef> found;
	for(EdgeRef e = 0; e < de.size(); ++e) {
		if(de[e].action != a) {
			continue;
		}
		if(!found) {
			found = e;
			continue;
		}
		const bool same_fn = cls_ == MachineClass::Tapd ? probs_[e] == probs_[*found]
		                                                : de[e].function == de[*found].function;
		if(!same_fn || de[e].domain != de[*found].domain) {
			throw InvalidArgument("ambiguous action " + header(m_).actions.at(a) +
			                      ": it labels edges with different functions");
		}
	}
	if(!found) {
		throw InvalidArgument("action " + std::to_string(a) + " not present in machine");
	}
	return *found;
}

MeasureResult MeasureEngine::trace(const Trace &trace) {
	if(trace.machine_class != cls_) {
		throw InvalidArgument("trace belongs to a different machine class");
	}
	const auto actions = trace.actions();
	return trace_actions(actions);
}

MeasureResult MeasureEngine::trace_actions(std::span<const ActionId> actions) {
	std::vector<ActionId> key(actions.begin(), actions.end());
	if(const auto it = trace_cache_.find(key); it != trace_cache_.end()) {
		return it->second;
	}
	MeasureResult result;
	if(key.empty()) {
		result = exact_result(MeasureResult::Kind::Trace, 1);
	} else if(product_class()) {
		Rational h = 1;
		for(ActionId a : key) {
			h *= action_factor(a);
		}
		result = exact_result(MeasureResult::Kind::Trace, h);
	} else {
		const auto &de = *delay_edges(m_);
		std::vector<EdgeRef> edges;
		std::optional<Box> common;
		bool empty = false;
		for(ActionId a : key) {
			const EdgeRef e = edge_for_action(a);
			edges.push_back(e);
			if(!common) {
				common = de[e].domain;
			} else if(!empty) {
				auto next = common->intersect(de[e].domain);
				if(next) {
					common = std::move(next);
				} else {
					empty = true;
				}
			}
		}
		std::vector<Box> region;
		if(!empty) {
			region.push_back(*common);
		}
		result = integrate(edges, std::move(region), MeasureResult::Kind::Trace);
	}
	trace_cache_.emplace(std::move(key), result);
	return result;
}

MeasureResult MeasureEngine::integrate(const std::vector<EdgeRef> &edges, std::vector<Box> region,
                                       MeasureResult::Kind kind) {
	const std::size_t m = clock_names(m_).size();
	MeasureResult result;
	result.kind = kind;
	Rational volume = 0;
	for(const auto &cell : disjoint_cells(region)) {
		volume += cell.volume();
	}
	if(volume.is_zero()) {
		result.value = Rational(0);
		result.empty_region = true;
		result.region = std::move(region);
		return result;
	}
	if(cls_ == MachineClass::Tapd) {
		Polynomial product = Polynomial::constant(m, 1);
		for(EdgeRef e : edges) {
			product = poly_mul(product, probs_[e]);
		}
		result.value = poly_integrate(product, std::span<const Box>(region));
	} else {
		const auto &de = *delay_edges(m_);
		FuncExpr product = de[edges[0]].function;
		for(std::size_t i = 1; i < edges.size(); ++i) {
			product = product * de[edges[i]].function;
		}
		result.value = quad_integrate(product, std::span<const Box>(region), ctx_.quadrature.tol,
		                              ctx_.quadrature.max_subdivisions);
	}
	result.region = std::move(region);
	return result;
}

MeasureResult MeasureEngine::collection(std::span<const Trace> traces, bool require_prefix_free) {
	if(require_prefix_free) {
		if(const auto bad = check_prefix_free(traces)) {
			throw InvalidArgument("collection is not prefix-free: member " + std::to_string(bad->first) +
			                      " is an initial segment of member " + std::to_string(bad->second));
		}
	}
	MeasureResult sum = exact_result(MeasureResult::Kind::Collection, 0);
	for(const auto &t : traces) {
		accumulate(sum, trace(t));
	}
	return sum;
}

MeasureResult MeasureEngine::run_collection(std::span<const Run> runs, bool require_prefix_free) {
	if(require_prefix_free) {
		std::vector<Trace> seqs;
		seqs.reserve(runs.size());
		for(const auto &r : runs) {
			seqs.push_back(as_sequence(r));
		}
		if(const auto bad = check_prefix_free(seqs)) {
			throw InvalidArgument("run collection is not prefix-free: member " + std::to_string(bad->first) +
			                      " is an initial segment of member " + std::to_string(bad->second));
		}
	}
	MeasureResult sum = exact_result(MeasureResult::Kind::Collection, 0);
	for(const auto &r : runs) {
		accumulate(sum, run(r));
	}
	return sum;
}

MeasureResult run_measure(const Machine &m, const MeasureContext &ctx, const Run &run) {
	MeasureEngine engine(m, ctx);
	return engine.run(run);
}

MeasureResult trace_measure(const Machine &m, const MeasureContext &ctx, const Trace &trace) {
	MeasureEngine engine(m, ctx);
	return engine.trace(trace);
}

MeasureResult collection_measure(const Machine &m, const MeasureContext &ctx, std::span<const Trace> traces,
                                 bool require_prefix_free) {
	MeasureEngine engine(m, ctx);
	return engine.collection(traces, require_prefix_free);
}

} // namespace traceexpr
