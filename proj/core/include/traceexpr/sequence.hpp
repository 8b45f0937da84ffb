#pragma once

#include "traceexpr/ids.hpp"
#include "traceexpr/rational.hpp"

#include <algorithm>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace traceexpr {

/// Relation of a pair of finite sequences under the initial-segment order.
enum class PrefixRelation { Equal, Prefix, Extends, Incomparable };

/// Prefix when a is a proper initial segment of b, Extends when b is one of a.
template <class T> PrefixRelation prefix_order(std::span<const T> a, std::span<const T> b) {
	const std::size_t n = std::min(a.size(), b.size());
	if(!std::equal(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(n), b.begin())) {
		return PrefixRelation::Incomparable;
	}
	if(a.size() == b.size()) {
		return PrefixRelation::Equal;
	}
	return a.size() < b.size() ? PrefixRelation::Prefix : PrefixRelation::Extends;
}

template <class T> PrefixRelation prefix_order(const std::vector<T> &a, const std::vector<T> &b) {
	return prefix_order(std::span<const T>(a), std::span<const T>(b));
}

/// Finite list of timestamps.
using TimeSequence = std::vector<Rational>;

/// True when every timestamp is positive and the list strictly increases.
bool is_valid_time_sequence(std::span<const Rational> times);

struct TimedWord {
	std::vector<ActionId> actions;
	TimeSequence times;

	/// Throws InvalidArgument on length mismatch or an invalid time sequence.
	void check() const;
	friend bool operator==(const TimedWord &, const TimedWord &) = default;
};

/// Index-aligned correspondence between two time sequences.
struct TimeIso {
	std::vector<std::pair<Rational, Rational>> pairs;
	friend bool operator==(const TimeIso &, const TimeIso &) = default;
};

/// The index-aligned map t[i] -> u[i] when it is a bijection that preserves
/// order in both directions; empty otherwise.
std::optional<TimeIso> time_iso_exists(std::span<const Rational> t, std::span<const Rational> u);

} // namespace traceexpr
