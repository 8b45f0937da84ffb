#include "traceexpr/sequence.hpp"

#include "traceexpr/error.hpp"

namespace traceexpr {

bool is_valid_time_sequence(std::span<const Rational> times) {
	Rational previous = 0;
	for(const auto &t : times) {
		if(t <= previous) {
			return false;
		}
		previous = t;
	}
	return true;
}

void TimedWord::check() const {
	if(actions.size() != times.size()) {
		throw InvalidArgument("timed word has " + std::to_string(actions.size()) + " actions but " +
		                      std::to_string(times.size()) + " timestamps");
	}
	if(!is_valid_time_sequence(times)) {
		throw InvalidArgument("timestamps must be positive and strictly increasing");
	}
}

std::optional<TimeIso> time_iso_exists(std::span<const Rational> t, std::span<const Rational> u) {
	if(t.size() != u.size()) {
		return std::nullopt;
	}
	for(std::size_t i = 0; i < t.size(); ++i) {
		for(std::size_t j = 0; j < t.size(); ++j) {
			if((t[i] <= t[j]) != (u[i] <= u[j])) {
				return std::nullopt;
			}
		}
	}
	TimeIso iso;
	iso.pairs.reserve(t.size());
	for(std::size_t i = 0; i < t.size(); ++i) {
		iso.pairs.emplace_back(t[i], u[i]);
	}
	return iso;
}

} // namespace traceexpr
