#include "traceexpr/iso.hpp"

#include "traceexpr/error.hpp"
#include "traceexpr/validate.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

namespace traceexpr {

bool Relabelling::injective() const {
	std::set<std::size_t> seen;
	for(const auto &[from, to] : mapping) {
		if(!seen.insert(to).second) {
			return false;
		}
	}
	return true;
}

std::optional<std::size_t> Relabelling::apply(std::size_t from) const {
	const auto it = mapping.find(from);
	if(it == mapping.end()) {
		return std::nullopt;
	}
	return it->second;
}

Relabelling Relabelling::inverse() const {
	Relabelling r{kind, {}};
	for(const auto &[from, to] : mapping) {
		r.mapping[to] = from;
	}
	return r;
}

std::string_view to_string(Verdict v) {
	switch(v) {
	case Verdict::Yes:
		return "yes";
	case Verdict::No:
		return "no";
	case Verdict::Inconclusive:
		return "inconclusive";
	}
	return "?";
}

namespace {

using TimeMap = std::map<Rational, Rational>;

TimeMap time_map(const std::optional<TimeIso> &iso) {
	TimeMap out;
	if(iso) {
		for(const auto &[from, to] : iso->pairs) {
			out.emplace(from, to);
		}
	}
	return out;
}

bool matches_with(const Trace &a, const Trace &b, const MeasureResult &ha, const MeasureResult &hb,
                  const Relabelling &actions, const TimeMap *time) {
	if(a.size() != b.size()) {
		return false;
	}
	for(std::size_t i = 0; i < a.size(); ++i) {
		const auto mapped = actions.apply(a.steps[i].action);
		if(!mapped || *mapped != b.steps[i].action) {
			return false;
		}
		if(time) {
			const auto &ta = a.steps[i].time;
			const auto &tb = b.steps[i].time;
			if(!ta || !tb) {
				return false;
			}
			const auto it = time->find(*ta);
			if(it == time->end() || it->second != *tb) {
				return false;
			}
		}
	}
	return measures_equal(ha, hb);
}

} // namespace

bool matches_under(const Trace &a, const Trace &b, const MeasureResult &ha, const MeasureResult &hb,
                   const Relabelling &actions, const std::optional<TimeIso> &time) {
	if(!actions.injective()) {
		return false;
	}
	if(!time) {
		return matches_with(a, b, ha, hb, actions, nullptr);
	}
	const auto map = time_map(time);
	return matches_with(a, b, ha, hb, actions, &map);
}

std::optional<IsoWitness> trace_iso(const Trace &a, const Trace &b, const MeasureResult &ha, const MeasureResult &hb) {
	if(a.size() != b.size()) {
		return std::nullopt;
	}
	Relabelling actions{Relabelling::Kind::Actions, {}};
	for(std::size_t i = 0; i < a.size(); ++i) {
		const auto [it, inserted] = actions.mapping.emplace(a.steps[i].action, b.steps[i].action);
		if(!inserted && it->second != b.steps[i].action) {
			return std::nullopt;
		}
	}
	if(!actions.injective()) {
		return std::nullopt;
	}
	IsoWitness w{actions, std::nullopt, std::nullopt, {{0, 0}}};
	if(a.timed() && b.timed()) {
		const auto ta = a.times();
		const auto tb = b.times();
		w.time = time_iso_exists(ta, tb);
		if(!w.time) {
			return std::nullopt;
		}
	}
	if(!measures_equal(ha, hb)) {
		return std::nullopt;
	}
	return w;
}

namespace {

Certificate structural(std::string reason) { return {Certificate::Kind::Structural, std::move(reason), {}, {}}; }

bool any_timed(std::span<const Trace> traces) {
	return std::any_of(traces.begin(), traces.end(), [](const Trace &t) { return t.timed(); });
}

} // namespace

IsoResult collection_iso(const MeasuredCollection &a, const MeasuredCollection &b, std::size_t budget) {
	if(a.traces.size() != a.measures.size() || b.traces.size() != b.measures.size()) {
		throw InvalidArgument("every collection member needs a measure");
	}
	IsoResult res;
	if(a.traces.size() != b.traces.size()) {
		res.certificates.push_back(structural("collections have " + std::to_string(a.traces.size()) + " and " +
		                                      std::to_string(b.traces.size()) + " members"));
		return res;
	}
	const bool use_time = any_timed(a.traces) && any_timed(b.traces);
	std::vector<Trace> ta(a.traces.begin(), a.traces.end());
	std::vector<Trace> tb(b.traces.begin(), b.traces.end());
	if(!use_time) {
		for(auto &t : ta) {
			t = untime(t);
		}
		for(auto &t : tb) {
			t = untime(t);
		}
	}
	for(const auto *side : {&ta, &tb}) {
		std::set<std::vector<TraceStep>> seen;
		for(const auto &t : *side) {
			if(!seen.insert(t.steps).second) {
				throw InvalidArgument("collection members must be distinct");
			}
		}
	}

	std::optional<TimeIso> eps;
	TimeMap eps_map;
	if(use_time) {
		std::set<Rational> sa;
		std::set<Rational> sb;
		for(const auto &t : ta) {
			for(const auto &x : t.times()) {
				sa.insert(x);
			}
		}
		for(const auto &t : tb) {
			for(const auto &x : t.times()) {
				sb.insert(x);
			}
		}
		if(sa.size() != sb.size()) {
			res.certificates.push_back(structural("the collections use " + std::to_string(sa.size()) + " and " +
			                                      std::to_string(sb.size()) + " distinct timestamps"));
			return res;
		}
		eps = TimeIso{};
		auto jt = sb.begin();
		for(auto it = sa.begin(); it != sa.end(); ++it, ++jt) {
			eps->pairs.emplace_back(*it, *jt);
			eps_map.emplace(*it, *jt);
		}
	}

	// Signature: how often an action occurs at each (length, position).
	using Signature = std::map<std::pair<std::size_t, std::size_t>, std::size_t>;
	auto signatures = [](const std::vector<Trace> &traces) {
		std::map<ActionId, Signature> sig;
		for(const auto &t : traces) {
			for(std::size_t i = 0; i < t.size(); ++i) {
				++sig[t.steps[i].action][{t.size(), i}];
			}
		}
		return sig;
	};
	const auto sig_a = signatures(ta);
	const auto sig_b = signatures(tb);
	if(sig_a.size() != sig_b.size()) {
		res.certificates.push_back(structural("the collections use " + std::to_string(sig_a.size()) + " and " +
		                                      std::to_string(sig_b.size()) + " distinct actions"));
		return res;
	}

	std::vector<std::pair<ActionId, std::vector<ActionId>>> order;
	for(const auto &[act, sig] : sig_a) {
		std::vector<ActionId> cand;
		for(const auto &[other, osig] : sig_b) {
			if(osig == sig) {
				cand.push_back(other);
			}
		}
		if(cand.empty()) {
			res.certificates.push_back(
			    structural("action " + std::to_string(act) + " has no counterpart with the same occurrence profile"));
			return res;
		}
		order.emplace_back(act, std::move(cand));
	}
	std::stable_sort(order.begin(), order.end(),
	                 [](const auto &x, const auto &y) { return x.second.size() < y.second.size(); });
	std::map<ActionId, std::size_t> level_of;
	for(std::size_t i = 0; i < order.size(); ++i) {
		level_of[order[i].first] = i;
	}
	// Members become checkable once all their actions are assigned.
	std::vector<std::vector<std::size_t>> at_level(order.size() + 1);
	for(std::size_t i = 0; i < ta.size(); ++i) {
		std::size_t lvl = 0;
		for(const auto &s : ta[i].steps) {
			lvl = std::max(lvl, level_of[s.action] + 1);
		}
		at_level[lvl].push_back(i);
	}

	std::map<std::pair<std::vector<ActionId>, std::vector<Rational>>, std::size_t> index_b;
	for(std::size_t j = 0; j < tb.size(); ++j) {
		index_b.emplace(std::pair{tb[j].actions(), tb[j].times()}, j);
	}

	Relabelling theta{Relabelling::Kind::Actions, {}};
	std::set<ActionId> used;
	std::vector<std::size_t> alpha(ta.size(), 0);
	std::optional<MeasureMismatch> mismatch;
	bool aligned = false;
	bool exhausted = false;

	auto image = [&](std::size_t i) -> std::optional<std::size_t> {
		std::vector<ActionId> acts;
		std::vector<Rational> times;
		for(const auto &s : ta[i].steps) {
			acts.push_back(theta.mapping.at(s.action));
			if(use_time && s.time) {
				times.push_back(eps_map.at(*s.time));
			}
		}
		const auto it = index_b.find({acts, times});
		if(it == index_b.end()) {
			return std::nullopt;
		}
		return it->second;
	};

	std::function<bool(std::size_t)> search = [&](std::size_t level) -> bool {
		if(level == order.size()) {
			aligned = true;
			for(std::size_t i = 0; i < ta.size(); ++i) {
				if(!measures_equal(a.measures[i], b.measures[alpha[i]])) {
					if(!mismatch) {
						mismatch = MeasureMismatch{a.traces[i], b.traces[alpha[i]], a.measures[i], b.measures[alpha[i]]};
					}
					return false;
				}
			}
			return true;
		}
		const ActionId act = order[level].first;
		for(ActionId cand : order[level].second) {
			if(used.count(cand)) {
				continue;
			}
			if(++res.nodes > budget) {
				exhausted = true;
				return false;
			}
			theta.mapping[act] = cand;
			used.insert(cand);
			bool ok = true;
			for(std::size_t i : at_level[level + 1]) {
				const auto j = image(i);
				if(!j) {
					ok = false;
					break;
				}
				alpha[i] = *j;
			}
			if(ok && search(level + 1)) {
				return true;
			}
			used.erase(cand);
			theta.mapping.erase(act);
			if(exhausted) {
				return false;
			}
		}
		return false;
	};

	for(std::size_t i : at_level[0]) {
		const auto j = image(i);
		if(!j) {
			res.certificates.push_back(structural("the empty trace has no counterpart"));
			return res;
		}
		alpha[i] = *j;
	}
	if(search(0)) {
		res.verdict = Verdict::Yes;
		IsoWitness w{theta, std::nullopt, eps, {}};
		for(std::size_t i = 0; i < ta.size(); ++i) {
			w.alpha.emplace_back(i, alpha[i]);
		}
		res.witness = std::move(w);
		return res;
	}
	if(exhausted) {
		res.verdict = Verdict::Inconclusive;
		return res;
	}
	if(aligned && mismatch) {
		res.certificates.push_back({Certificate::Kind::MeasureMismatch,
		                            "every structural alignment pairs members with different measures", mismatch, {}});
	} else {
		res.certificates.push_back(structural("no action relabelling maps one collection onto the other"));
	}
	return res;
}

bool verify_witness(const MeasuredCollection &a, const MeasuredCollection &b, const IsoWitness &w) {
	if(!w.actions.injective() || w.alpha.size() != a.traces.size() || a.traces.size() != b.traces.size()) {
		return false;
	}
	const auto map = time_map(w.time);
	std::set<std::size_t> targets;
	for(const auto &[i, j] : w.alpha) {
		if(i >= a.traces.size() || j >= b.traces.size() || !targets.insert(j).second) {
			return false;
		}
		const Trace lhs = w.time ? a.traces[i] : untime(a.traces[i]);
		const Trace rhs = w.time ? b.traces[j] : untime(b.traces[j]);
		if(!matches_with(lhs, rhs, a.measures[i], b.measures[j], w.actions, w.time ? &map : nullptr)) {
			return false;
		}
	}
	return true;
}

namespace {

Rational power(const Rational &base, long e) { return e >= 0 ? base.pow(e) : base.inverse().pow(-e); }

std::vector<Rational> counts(const Trace &t, std::size_t action_count) {
	std::vector<Rational> n(action_count, Rational(0));
	for(const auto &s : t.steps) {
		n.at(s.action) += 1;
	}
	return n;
}

} // namespace

std::optional<MultiplicativeObstruction> find_multiplicative_obstruction(std::span<const Trace> traces,
                                                                         std::span<const MeasureResult> measures,
                                                                         std::size_t action_count) {
	std::vector<std::size_t> idx;
	for(std::size_t i = 0; i < traces.size(); ++i) {
		if(measures[i].exact() && traces[i].size() > 0) {
			idx.push_back(i);
		}
	}
	auto obstruction = [&](std::vector<std::size_t> which, std::vector<long> z) {
		MultiplicativeObstruction o;
		o.product = 1;
		for(std::size_t k = 0; k < which.size(); ++k) {
			const Rational &h = measures[which[k]].exact_value();
			o.traces.push_back(traces[which[k]]);
			o.exponents.push_back(z[k]);
			o.measures.push_back(h);
			o.product *= power(h, z[k]);
		}
		return o;
	};
	for(std::size_t i : idx) {
		if(measures[i].exact_value().is_zero()) {
			MultiplicativeObstruction o;
			o.traces.push_back(traces[i]);
			o.exponents.push_back(1);
			o.measures.push_back(0);
			o.product = 0;
			return o;
		}
	}
	std::vector<std::vector<Rational>> n;
	for(std::size_t i : idx) {
		n.push_back(counts(traces[i], action_count));
	}
	// Proportional count vectors first: q*n_i = p*n_j forces H_i^q = H_j^p.
	for(std::size_t x = 0; x < idx.size(); ++x) {
		for(std::size_t y = x + 1; y < idx.size(); ++y) {
			std::optional<Rational> ratio;
			bool proportional = true;
			for(std::size_t k = 0; k < action_count && proportional; ++k) {
				if(n[x][k].is_zero() != n[y][k].is_zero()) {
					proportional = false;
				} else if(!n[x][k].is_zero()) {
					const Rational r = n[x][k] / n[y][k];
					if(ratio && *ratio != r) {
						proportional = false;
					}
					ratio = r;
				}
			}
			if(!proportional || !ratio) {
				continue;
			}
			const long p = ratio->numerator().get_si();
			const long q = ratio->denominator().get_si();
			auto o = obstruction({idx[x], idx[y]}, {q, -p});
			if(o.product != Rational(1)) {
				return o;
			}
		}
	}
	// General left null space of the count matrix.
	const std::size_t rows = action_count;
	const std::size_t cols = idx.size();
	if(cols == 0 || cols > 2000) {
		return std::nullopt;
	}
	std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(cols));
	for(std::size_t r = 0; r < rows; ++r) {
		for(std::size_t c = 0; c < cols; ++c) {
			a[r][c] = n[c][r];
		}
	}
	std::vector<std::size_t> pivot_col;
	std::size_t rank = 0;
	for(std::size_t c = 0; c < cols && rank < rows; ++c) {
		std::size_t p = rank;
		while(p < rows && a[p][c].is_zero()) {
			++p;
		}
		if(p == rows) {
			continue;
		}
		std::swap(a[p], a[rank]);
		const Rational inv = a[rank][c].inverse();
		for(auto &v : a[rank]) {
			v *= inv;
		}
		for(std::size_t r = 0; r < rows; ++r) {
			if(r != rank && !a[r][c].is_zero()) {
				const Rational f = a[r][c];
				for(std::size_t k = 0; k < cols; ++k) {
					a[r][k] -= f * a[rank][k];
				}
			}
		}
		pivot_col.push_back(c);
		++rank;
	}
	std::set<std::size_t> pivots(pivot_col.begin(), pivot_col.end());
	std::size_t checked = 0;
	for(std::size_t f = 0; f < cols && checked < 500; ++f) {
		if(pivots.count(f)) {
			continue;
		}
		++checked;
		std::vector<Rational> z(cols, Rational(0));
		z[f] = 1;
		for(std::size_t r = 0; r < rank; ++r) {
			z[pivot_col[r]] = -a[r][f];
		}
		mpz_class den = 1;
		for(const auto &v : z) {
			mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.denominator().get_mpz_t());
		}
		std::vector<std::size_t> which;
		std::vector<long> exps;
		for(std::size_t c = 0; c < cols; ++c) {
			if(z[c].is_zero()) {
				continue;
			}
			const Rational scaled = z[c] * Rational(mpq_class(den));
			which.push_back(idx[c]);
			exps.push_back(scaled.numerator().get_si());
		}
		auto o = obstruction(which, exps);
		if(o.product != Rational(1)) {
			return o;
		}
	}
	return std::nullopt;
}

IsoResult expresses(const Machine &m, const Machine &n, const ExpressOptions &options) {
	require_valid(m);
	require_valid(n);
	const MachineClass cm = machine_class(m);
	const MachineClass cn = machine_class(n);
	bool use_time = false;
	switch(options.time_mode) {
	case ExpressOptions::TimeMode::Auto:
		use_time = is_timed(cm) && is_timed(cn) && is_delay_class(cm) == is_delay_class(cn);
		break;
	case ExpressOptions::TimeMode::Timed:
		if(!is_timed(cm) || !is_timed(cn)) {
			throw InvalidArgument("timed comparison needs two timed machines");
		}
		use_time = true;
		break;
	case ExpressOptions::TimeMode::Untimed:
		break;
	}

	auto collect = [&](const Machine &x) {
		TraceCollection all;
		for(std::size_t len = 1; len <= options.depth; ++len) {
			auto part = use_time ? traces_of(x, len, options.sampling) : untimed_traces(x, len);
			all.insert(all.end(), part.begin(), part.end());
		}
		return all;
	};
	const auto tm = collect(m);
	const auto tn = collect(n);
	MeasureEngine em(m, options.left);
	MeasureEngine en(n, options.right);
	std::vector<MeasureResult> hm;
	std::vector<MeasureResult> hn;
	for(const auto &t : tm) {
		hm.push_back(em.trace(t));
	}
	for(const auto &t : tn) {
		hn.push_back(en.trace(t));
	}

	if(em.product_class() != en.product_class()) {
		const bool left = !em.product_class();
		const auto o = left ? find_multiplicative_obstruction(tm, hm, header(m).actions.size())
		                    : find_multiplicative_obstruction(tn, hn, header(n).actions.size());
		if(o) {
			IsoResult res;
			res.verdict = Verdict::No;
			auto obstruction = *o;
			obstruction.left_side = left;
			res.certificates.push_back({Certificate::Kind::Multiplicative,
			                            "no product-class machine assigns these measures to traces with these "
			                            "action counts",
			                            std::nullopt, obstruction});
			return res;
		}
	}

	IsoResult res = collection_iso({tm, hm}, {tn, hn}, options.budget);
	if(res.verdict == Verdict::Yes && !verify_witness({tm, hm}, {tn, hn}, *res.witness)) {
		throw Error("witness failed re-verification");
	}
	return res;
}

} // namespace traceexpr
