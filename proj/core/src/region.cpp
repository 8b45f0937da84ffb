#include "traceexpr/region.hpp"

#include "traceexpr/error.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace traceexpr {

namespace {

mpz_class lcm(const mpz_class &a, const mpz_class &b) {
	mpz_class r;
	mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
	return r;
}

long to_long(const Rational &r) {
	if(!r.is_integer() || !r.numerator().fits_slong_p()) {
		throw InvalidArgument("region constant " + r.to_string() + " is not a machine integer");
	}
	return r.numerator().get_si();
}

void normalize(ClockRegion &r) {
	for(auto &g : r.groups) {
		std::sort(g.begin(), g.end());
	}
	if(r.groups.empty()) {
		r.groups.emplace_back();
	}
	r.groups.erase(std::remove_if(r.groups.begin() + 1, r.groups.end(),
	                              [](const std::vector<ClockId> &g) { return g.empty(); }),
	               r.groups.end());
}

} // namespace

bool ClockRegion::integral(ClockId c) const {
	return std::find(groups[0].begin(), groups[0].end(), c) != groups[0].end();
}

std::string ClockRegion::to_string(std::span<const std::string> clock_names) const {
	auto name = [&](ClockId c) { return c < clock_names.size() ? clock_names[c] : "c" + std::to_string(c); };
	std::string s = "{";
	for(ClockId c = 0; c < whole.size(); ++c) {
		if(c) {
			s += ", ";
		}
		s += name(c);
		if(unbounded(c)) {
			s += ">max";
		} else if(integral(c)) {
			s += "=" + std::to_string(whole[c]);
		} else {
			s += " in (" + std::to_string(whole[c]) + "," + std::to_string(whole[c] + 1) + ")";
		}
	}
	s += "}";
	if(groups.size() > 2) {
		s += " frac:";
		for(std::size_t g = 1; g < groups.size(); ++g) {
			s += g == 1 ? " " : " < ";
			for(std::size_t i = 0; i < groups[g].size(); ++i) {
				s += (i ? "=" : "") + name(groups[g][i]);
			}
		}
	}
	return s;
}

RegionScale region_scale(std::span<const ClockConstraint> guards, std::size_t clock_count) {
	RegionScale out;
	mpz_class den = 1;
	for(const auto &g : guards) {
		if(g.contains_diagonal()) {
			throw InvalidArgument("diagonal guards are not supported by the region construction");
		}
		for(const auto &a : g.atoms()) {
			den = lcm(den, a.constant().denominator());
		}
	}
	out.scale = Rational(mpq_class(den));
	const auto maxima = max_constants(guards, clock_count);
	for(const auto &m : maxima) {
		out.bound.push_back(to_long(m * out.scale));
	}
	return out;
}

ClockRegion initial_region(std::size_t clock_count) {
	ClockRegion r;
	r.whole.assign(clock_count, 0);
	for(ClockId c = 0; c < clock_count; ++c) {
		r.groups[0].push_back(c);
	}
	return r;
}

ClockRegion region_of(std::span<const Rational> iota, const RegionScale &scale) {
	ClockRegion r;
	r.whole.assign(iota.size(), 0);
	std::vector<std::pair<Rational, ClockId>> fracs;
	for(ClockId c = 0; c < iota.size(); ++c) {
		const Rational v = iota[c] * scale.scale;
		if(v > Rational(scale.bound.at(c))) {
			r.whole[c] = ClockRegion::kUnbounded;
			continue;
		}
		const mpz_class fl = v.floor();
		r.whole[c] = fl.get_si();
		const Rational frac = v - Rational(mpq_class(fl));
		if(frac.is_zero()) {
			r.groups[0].push_back(c);
		} else {
			fracs.emplace_back(frac, c);
		}
	}
	std::sort(fracs.begin(), fracs.end());
	for(std::size_t i = 0; i < fracs.size(); ++i) {
		if(i == 0 || fracs[i].first != fracs[i - 1].first) {
			r.groups.emplace_back();
		}
		r.groups.back().push_back(fracs[i].second);
	}
	normalize(r);
	return r;
}

std::optional<ClockRegion> time_successor(const ClockRegion &r, std::span<const long> bound) {
	ClockRegion next = r;
	if(!r.groups[0].empty()) {
		std::vector<ClockId> moved;
		for(ClockId c : r.groups[0]) {
			if(r.whole[c] >= bound[c]) {
				next.whole[c] = ClockRegion::kUnbounded;
			} else {
				moved.push_back(c);
			}
		}
		next.groups[0].clear();
		next.groups.insert(next.groups.begin() + 1, moved);
		normalize(next);
		return next;
	}
	if(r.groups.size() > 1) {
		auto last = next.groups.back();
		next.groups.pop_back();
		for(ClockId c : last) {
			next.whole[c] += 1;
		}
		next.groups[0] = std::move(last);
		normalize(next);
		return next;
	}
	return std::nullopt;
}

std::vector<ClockRegion> delay_successors(const ClockRegion &r, std::span<const long> bound) {
	std::vector<ClockRegion> out;
	if(r.groups[0].empty()) {
		out.push_back(r);
	}
	auto cur = time_successor(r, bound);
	while(cur) {
		out.push_back(*cur);
		cur = time_successor(*cur, bound);
	}
	return out;
}

ClockRegion reset_region(const ClockRegion &r, const ClockSet &clocks) {
	ClockRegion next = r;
	for(auto &g : next.groups) {
		g.erase(std::remove_if(g.begin(), g.end(),
		                       [&](ClockId c) { return std::binary_search(clocks.begin(), clocks.end(), c); }),
		        g.end());
	}
	for(ClockId c : clocks) {
		next.whole.at(c) = 0;
		next.groups[0].push_back(c);
	}
	normalize(next);
	return next;
}

bool region_sat(const ClockRegion &r, const ClockConstraint &guard, const RegionScale &scale) {
	using Kind = ClockConstraint::Kind;
	auto less_than = [&](ClockId c, long k) { return !r.unbounded(c) && r.whole[c] < k; };
	auto at_most = [&](ClockId c, long k) {
		if(r.unbounded(c)) {
			return false;
		}
		return r.integral(c) ? r.whole[c] <= k : r.whole[c] < k;
	};
	auto scaled = [&](const ClockConstraint &a) {
		const Rational k = a.constant() * scale.scale;
		if(k.is_integer()) {
			return k.numerator().get_si();
		}
		throw InvalidArgument("guard constant not integral after scaling");
	};
	switch(guard.kind()) {
	case Kind::True:
		return true;
	case Kind::Lt:
		return less_than(guard.clock(), scaled(guard));
	case Kind::Le:
		return at_most(guard.clock(), scaled(guard));
	case Kind::Gt:
		return !at_most(guard.clock(), scaled(guard));
	case Kind::Ge:
		return !less_than(guard.clock(), scaled(guard));
	case Kind::DiagLe:
	case Kind::DiagLt:
		throw InvalidArgument("diagonal guards are not supported by the region construction");
	case Kind::Not:
		return !region_sat(r, guard.lhs(), scale);
	case Kind::Or:
		return region_sat(r, guard.lhs(), scale) || region_sat(r, guard.rhs(), scale);
	case Kind::And:
		return region_sat(r, guard.lhs(), scale) && region_sat(r, guard.rhs(), scale);
	}
	return false;
}

std::vector<ClockRegion> enumerate_clock_regions(std::span<const long> bound) {
	const std::size_t n = bound.size();
	std::vector<ClockRegion> out;
	// Per clock: integer part 0..bound (with a zero/non-zero fraction flag,
	// non-zero only below the bound) or unbounded.
	struct Choice {
		long whole;
		bool fractional;
	};
	std::vector<Choice> choice(n);
	std::function<void(std::size_t)> rec = [&](std::size_t c) {
		if(c == n) {
			ClockRegion r;
			r.whole.resize(n);
			std::vector<ClockId> frac;
			for(ClockId i = 0; i < n; ++i) {
				r.whole[i] = choice[i].whole;
				if(choice[i].whole == ClockRegion::kUnbounded) {
					continue;
				}
				if(choice[i].fractional) {
					frac.push_back(i);
				} else {
					r.groups[0].push_back(i);
				}
			}
			// Ordered set partitions of the fractional clocks.
			std::function<void(std::vector<ClockId>, std::vector<std::vector<ClockId>>)> part =
			    [&](std::vector<ClockId> rest, std::vector<std::vector<ClockId>> blocks) {
				    if(rest.empty()) {
					    ClockRegion full = r;
					    full.groups.insert(full.groups.end(), blocks.begin(), blocks.end());
					    out.push_back(full);
					    return;
				    }
				    const std::size_t k = rest.size();
				    for(std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
					    std::vector<ClockId> block;
					    std::vector<ClockId> remain;
					    for(std::size_t i = 0; i < k; ++i) {
						    ((mask >> i) & 1U ? block : remain).push_back(rest[i]);
					    }
					    auto next = blocks;
					    next.push_back(block);
					    part(remain, next);
				    }
			    };
			part(frac, {});
			return;
		}
		for(long w = 0; w <= bound[c]; ++w) {
			choice[c] = {w, false};
			rec(c + 1);
			if(w < bound[c]) {
				choice[c] = {w, true};
				rec(c + 1);
			}
		}
		choice[c] = {ClockRegion::kUnbounded, false};
		rec(c + 1);
	};
	rec(0);
	std::sort(out.begin(), out.end());
	return out;
}

std::size_t count_clock_regions(std::span<const long> bound) { return enumerate_clock_regions(bound).size(); }

} // namespace traceexpr
