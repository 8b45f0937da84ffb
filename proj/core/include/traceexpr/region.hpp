#pragma once

#include "traceexpr/clock.hpp"
#include "traceexpr/ids.hpp"
#include "traceexpr/rational.hpp"

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace traceexpr {

/// Alur-Dill clock region over integer maximal constants.
///
/// `whole[c]` is the integer part of clock c, or kUnbounded once the clock
/// exceeds its maximal constant. `groups[0]` holds the bounded clocks with
/// zero fractional part; the remaining groups hold the other bounded clocks
/// by increasing fractional part. Clocks within a group are sorted.
struct ClockRegion {
	static constexpr long kUnbounded = -1;

	std::vector<long> whole;
	std::vector<std::vector<ClockId>> groups{{}};

	[[nodiscard]] bool unbounded(ClockId c) const { return whole[c] == kUnbounded; }
	[[nodiscard]] bool integral(ClockId c) const;
	[[nodiscard]] std::string to_string(std::span<const std::string> clock_names = {}) const;

	friend auto operator<=>(const ClockRegion &, const ClockRegion &) = default;
	friend bool operator==(const ClockRegion &, const ClockRegion &) = default;
};

/// Integer scaling of a set of guards: every constant times `scale` is an
/// integer, and `bound[c]` is the largest scaled constant compared with c.
struct RegionScale {
	Rational scale{1};
	std::vector<long> bound;
};

/// Scale derived from the guards; throws InvalidArgument on diagonal atoms.
RegionScale region_scale(std::span<const ClockConstraint> guards, std::size_t clock_count);

/// The region holding all-zero clocks.
ClockRegion initial_region(std::size_t clock_count);

/// Region of a concrete interpretation (unscaled values).
ClockRegion region_of(std::span<const Rational> iota, const RegionScale &scale);

/// Next region reached by letting time pass; empty when every clock is
/// unbounded.
std::optional<ClockRegion> time_successor(const ClockRegion &r, std::span<const long> bound);

/// Regions reachable from r by a strictly positive delay, in time order.
std::vector<ClockRegion> delay_successors(const ClockRegion &r, std::span<const long> bound);

/// The region after zeroing the given clocks.
ClockRegion reset_region(const ClockRegion &r, const ClockSet &clocks);

/// Whether every interpretation in r satisfies the guard (guards are
/// constant on regions). Constants are scaled by `scale.scale`.
bool region_sat(const ClockRegion &r, const ClockConstraint &guard, const RegionScale &scale);

/// Every clock region for the given maximal constants.
std::vector<ClockRegion> enumerate_clock_regions(std::span<const long> bound);

/// Number of clock regions for the given maximal constants.
std::size_t count_clock_regions(std::span<const long> bound);

} // namespace traceexpr
