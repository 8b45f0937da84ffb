#include "traceexpr/box.hpp"

#include "traceexpr/error.hpp"

#include <algorithm>
#include <set>

namespace traceexpr {

Box::Box(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
	for(const auto &iv : intervals_) {
		if(iv.hi < iv.lo) {
			throw InvalidArgument("interval with hi < lo: [" + iv.lo.to_string() + "," + iv.hi.to_string() + "]");
		}
	}
}

Box Box::unit(std::size_t arity) { return Box(std::vector<Interval>(arity, Interval{0, 1})); }

Rational Box::volume() const {
	Rational v = 1;
	for(const auto &iv : intervals_) {
		v *= iv.length();
	}
	return v;
}

bool Box::contains(std::span<const Rational> point) const {
	if(point.size() != arity()) {
		throw DimensionError("point of arity " + std::to_string(point.size()) + " against box of arity "
		                     + std::to_string(arity()));
	}
	for(std::size_t i = 0; i < arity(); ++i) {
		if(!intervals_[i].contains(point[i])) {
			return false;
		}
	}
	return true;
}

bool Box::within_unit() const {
	return std::all_of(intervals_.begin(), intervals_.end(),
	                   [](const Interval &iv) { return Rational(0) <= iv.lo && iv.hi <= Rational(1); });
}

bool Box::nondegenerate() const {
	return std::all_of(intervals_.begin(), intervals_.end(), [](const Interval &iv) { return iv.lo < iv.hi; });
}

std::optional<Box> Box::intersect(const Box &other) const {
	if(other.arity() != arity()) {
		throw DimensionError("box intersection");
	}
	std::vector<Interval> out;
	out.reserve(arity());
	for(std::size_t i = 0; i < arity(); ++i) {
		Interval iv{std::max(intervals_[i].lo, other.intervals_[i].lo),
		            std::min(intervals_[i].hi, other.intervals_[i].hi)};
		if(iv.hi < iv.lo) {
			return std::nullopt;
		}
		out.push_back(std::move(iv));
	}
	return Box(std::move(out));
}

std::string Box::to_string() const {
	std::string s;
	for(std::size_t i = 0; i < arity(); ++i) {
		if(i > 0) {
			s += " x ";
		}
		s += "[" + intervals_[i].lo.to_string() + "," + intervals_[i].hi.to_string() + "]";
	}
	return s;
}

std::vector<Box> disjoint_cells(std::span<const Box> boxes) {
	if(boxes.empty()) {
		return {};
	}
	const std::size_t arity = boxes.front().arity();
	for(const auto &b : boxes) {
		if(b.arity() != arity) {
			throw DimensionError("union of boxes with different arity");
		}
	}
	if(boxes.size() == 1) {
		return {boxes.front()};
	}
	// Grid induced by every endpoint; keep the cells whose midpoint is covered.
	std::vector<std::vector<Rational>> cuts(arity);
	for(std::size_t axis = 0; axis < arity; ++axis) {
		std::set<Rational> pts;
		for(const auto &b : boxes) {
			pts.insert(b[axis].lo);
			pts.insert(b[axis].hi);
		}
		cuts[axis].assign(pts.begin(), pts.end());
	}
	std::vector<Box> cells;
	std::vector<std::size_t> idx(arity, 0);
	for(std::size_t axis = 0; axis < arity; ++axis) {
		if(cuts[axis].size() < 2) {
			return {}; // every box is flat along this axis
		}
	}
	if(arity == 0) {
		return {boxes.front()};
	}
	while(true) {
		std::vector<Interval> ivs;
		std::vector<Rational> mid;
		ivs.reserve(arity);
		for(std::size_t axis = 0; axis < arity; ++axis) {
			ivs.push_back({cuts[axis][idx[axis]], cuts[axis][idx[axis] + 1]});
			mid.push_back((ivs.back().lo + ivs.back().hi) / Rational(2));
		}
		const bool covered = std::any_of(boxes.begin(), boxes.end(), [&](const Box &b) { return b.contains(mid); });
		if(covered) {
			cells.emplace_back(std::move(ivs));
		}
		std::size_t axis = 0;
		while(axis < arity) {
			if(++idx[axis] + 1 < cuts[axis].size()) {
				break;
			}
			idx[axis] = 0;
			++axis;
		}
		if(axis == arity) {
			break;
		}
	}
	return cells;
}

} // namespace traceexpr
