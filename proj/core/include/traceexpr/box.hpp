#pragma once

#include "traceexpr/rational.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace traceexpr {

/// Closed rational interval [lo, hi].
struct Interval {
	Rational lo;
	Rational hi;

	[[nodiscard]] Rational length() const { return hi - lo; }
	[[nodiscard]] bool contains(const Rational &x) const { return lo <= x && x <= hi; }

	friend bool operator==(const Interval &, const Interval &) = default;
};

/// Axis-aligned product of closed intervals. Arity zero is the one-point
/// space with volume 1.
class Box {
public:
	Box() = default;
	explicit Box(std::vector<Interval> intervals);

	/// [0,1]^arity.
	static Box unit(std::size_t arity);

	[[nodiscard]] std::size_t arity() const { return intervals_.size(); }
	[[nodiscard]] const std::vector<Interval> &intervals() const { return intervals_; }
	[[nodiscard]] const Interval &operator[](std::size_t axis) const { return intervals_[axis]; }

	[[nodiscard]] Rational volume() const;
	[[nodiscard]] bool contains(std::span<const Rational> point) const;
	/// True when every interval lies in [0,1].
	[[nodiscard]] bool within_unit() const;
	/// True when lo < hi on every axis.
	[[nodiscard]] bool nondegenerate() const;

	/// Empty optional when the boxes are disjoint.
	[[nodiscard]] std::optional<Box> intersect(const Box &other) const;

	/// "[0,1/2] x [0,1]"; the empty string for arity 0.
	[[nodiscard]] std::string to_string() const;

	friend bool operator==(const Box &, const Box &) = default;

private:
	std::vector<Interval> intervals_;
};

/// Splits a union of boxes into pairwise interior-disjoint cells whose union
/// equals the input union. All boxes must share one arity.
std::vector<Box> disjoint_cells(std::span<const Box> boxes);

} // namespace traceexpr
