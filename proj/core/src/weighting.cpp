#include "traceexpr/weighting.hpp"

#include "traceexpr/error.hpp"

namespace traceexpr {

std::optional<Rational> WeightingMap::get(std::size_t key) const {
	const auto it = weights.find(key);
	if(it == weights.end()) {
		return std::nullopt;
	}
	return it->second;
}

std::vector<std::string> check_weighting(const Machine &m, const WeightingMap &w) {
	std::vector<std::string> out;
	const bool edges = w.scope == WeightingMap::Scope::Edges;
	const std::size_t limit = edges ? edge_count(m) : header(m).actions.size();
	Rational total = 0;
	for(const auto &[key, value] : w.weights) {
		const std::string what = edges ? "edge " + std::to_string(key) : "action " + std::to_string(key);
		if(key >= limit) {
			out.push_back(what + " does not exist");
			continue;
		}
		if(value.sign() <= 0 || value >= Rational(1)) {
			out.push_back("weight " + value.to_string() + " of " + what + " outside (0,1)");
		}
		total += value;
	}
	if(total != Rational(1)) {
		out.push_back("weights sum to " + total.to_string() + ", expected 1");
	}
	if(edges) {
		for(const auto &[e, value] : w.weights) {
			if(e >= limit) {
				continue;
			}
			const auto v = edge_view(m, e);
			for(const auto &[f, other] : w.weights) {
				if(f <= e || f >= limit) {
					continue;
				}
				const auto u = edge_view(m, f);
				if(u.source == v.source && u.action == v.action && other != value) {
					out.push_back("edges " + std::to_string(e) + " and " + std::to_string(f) +
					              " share source and action but differ in weight");
				}
			}
		}
	}
	return out;
}

WeightingMap uniform_edge_weighting(const Machine &m) {
	const std::size_t n = edge_count(m);
	if(n == 0) {
		throw InvalidArgument("machine has no edges to weight");
	}
	WeightingMap w{WeightingMap::Scope::Edges, {}};
	for(std::size_t e = 0; e < n; ++e) {
		w.weights[e] = Rational(1, static_cast<long>(n));
	}
	return w;
}

WeightingMap uniform_action_weighting(const Machine &m) {
	const std::size_t n = header(m).actions.size();
	if(n == 0) {
		throw InvalidArgument("machine has no actions to weight");
	}
	WeightingMap w{WeightingMap::Scope::Actions, {}};
	for(std::size_t a = 0; a < n; ++a) {
		w.weights[a] = Rational(1, static_cast<long>(n));
	}
	return w;
}

WeightingMap to_action_weighting(const Machine &m, const WeightingMap &w) {
	if(w.scope == WeightingMap::Scope::Actions) {
		return w;
	}
	WeightingMap out{WeightingMap::Scope::Actions, {}};
	for(const auto &[e, value] : w.weights) {
		out.weights[edge_view(m, e).action] += value;
	}
	return out;
}

} // namespace traceexpr
