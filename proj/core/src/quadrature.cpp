#include "traceexpr/quadrature.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <queue>
#include <sstream>

namespace traceexpr {

QuadratureConfig QuadratureConfig::from_environment() {
	QuadratureConfig cfg;
	if(const char *env = std::getenv("TRACEEXPR_TOL"); env != nullptr && *env != '\0') {
		cfg.tol = Rational::parse(env);
		if(cfg.tol.sign() <= 0) {
			throw InvalidArgument("TRACEEXPR_TOL must be positive");
		}
	}
	return cfg;
}

namespace {

std::string describe_failure(const ApproxValue &best, double tol) {
	std::ostringstream os;
	os.precision(3);
	os << "quadrature did not reach tolerance " << tol << " within the subdivision budget (best error bound "
	   << best.error << ")";
	return os.str();
}

// 15-point Kronrod extension of 7-point Gauss-Legendre on [-1,1].
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for Kronrod nodes 1, 3, 5 and the centre.
constexpr std::array<double, 4> kGaussWeights = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                                 0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Rule1d {
	std::array<double, 15> nodes{};
	std::array<double, 15> kronrod{};
	std::array<double, 15> gauss{};
};

Rule1d make_rule() {
	Rule1d r;
	for(std::size_t i = 0; i < 7; ++i) {
		r.nodes[i] = -kKronrodNodes[i];
		r.nodes[14 - i] = kKronrodNodes[i];
		r.kronrod[i] = r.kronrod[14 - i] = kKronrodWeights[i];
		const double g = (i % 2 == 1) ? kGaussWeights[i / 2] : 0.0;
		r.gauss[i] = r.gauss[14 - i] = g;
	}
	r.nodes[7] = 0.0;
	r.kronrod[7] = kKronrodWeights[7];
	r.gauss[7] = kGaussWeights[3];
	return r;
}

const Rule1d &rule() {
	static const Rule1d r = make_rule();
	return r;
}

struct Cell {
	std::vector<double> lo;
	std::vector<double> hi;
	ApproxValue estimate;
	std::size_t order = 0;
};

ApproxValue estimate_cell(const FuncExpr &f, const std::vector<double> &lo, const std::vector<double> &hi) {
	const std::size_t m = lo.size();
	if(m == 0) {
		return {f.evaluate({}), 0.0};
	}
	const Rule1d &r = rule();
	std::vector<double> half(m);
	std::vector<double> mid(m);
	double jac = 1.0;
	for(std::size_t i = 0; i < m; ++i) {
		half[i] = 0.5 * (hi[i] - lo[i]);
		mid[i] = 0.5 * (hi[i] + lo[i]);
		jac *= half[i];
	}
	std::vector<std::size_t> idx(m, 0);
	std::vector<double> point(m);
	double k_sum = 0.0;
	double g_sum = 0.0;
	double abs_sum = 0.0;
	while(true) {
		double wk = 1.0;
		double wg = 1.0;
		for(std::size_t i = 0; i < m; ++i) {
			point[i] = mid[i] + half[i] * r.nodes[idx[i]];
			wk *= r.kronrod[idx[i]];
			wg *= r.gauss[idx[i]];
		}
		const double v = f.evaluate(point);
		k_sum += wk * v;
		g_sum += wg * v;
		abs_sum += wk * std::fabs(v);
		std::size_t axis = 0;
		while(axis < m && ++idx[axis] == 15) {
			idx[axis++] = 0;
		}
		if(axis == m) {
			break;
		}
	}
	const double value = k_sum * jac;
	const double roundoff = 64.0 * std::numeric_limits<double>::epsilon() * abs_sum * std::fabs(jac);
	return {value, std::fabs(k_sum - g_sum) * std::fabs(jac) + roundoff};
}

struct WorseFirst {
	bool operator()(const Cell &a, const Cell &b) const {
		if(a.estimate.error != b.estimate.error) {
			return a.estimate.error < b.estimate.error;
		}
		return a.order > b.order;
	}
};

} // namespace

QuadratureError::QuadratureError(ApproxValue best, double tol) : Error(describe_failure(best, tol)), best_(best) {}

ApproxValue quad_integrate(const FuncExpr &f, const Box &region, const Rational &tol, std::size_t max_subdivisions) {
	if(tol.sign() <= 0) {
		throw InvalidArgument("quadrature tolerance must be positive");
	}
	if(f.variable_bound() > region.arity()) {
		throw DimensionError("integrand uses more variables than the region provides");
	}
	const double target = tol.to_double();
	const std::size_t m = region.arity();
	Cell root;
	root.lo.resize(m);
	root.hi.resize(m);
	for(std::size_t i = 0; i < m; ++i) {
		root.lo[i] = region[i].lo.to_double();
		root.hi[i] = region[i].hi.to_double();
	}
	root.estimate = estimate_cell(f, root.lo, root.hi);

	std::priority_queue<Cell, std::vector<Cell>, WorseFirst> queue;
	double total = root.estimate.value;
	double error = root.estimate.error;
	queue.push(std::move(root));
	std::size_t counter = 1;

	while(error > target) {
		if(counter >= max_subdivisions || m == 0) {
			throw QuadratureError({total, error}, target);
		}
		Cell worst = queue.top();
		queue.pop();
		std::size_t axis = 0;
		for(std::size_t i = 1; i < m; ++i) {
			if(worst.hi[i] - worst.lo[i] > worst.hi[axis] - worst.lo[axis]) {
				axis = i;
			}
		}
		const double split = 0.5 * (worst.lo[axis] + worst.hi[axis]);
		Cell left = worst;
		Cell right = worst;
		left.hi[axis] = split;
		right.lo[axis] = split;
		left.estimate = estimate_cell(f, left.lo, left.hi);
		right.estimate = estimate_cell(f, right.lo, right.hi);
		left.order = counter++;
		right.order = counter++;
		total += left.estimate.value + right.estimate.value - worst.estimate.value;
		error += left.estimate.error + right.estimate.error - worst.estimate.error;
		queue.push(std::move(left));
		queue.push(std::move(right));
		if(error <= target) {
			// Re-sum to shed the drift of the running totals.
			double t = 0.0;
			double e = 0.0;
			auto copy = queue;
			while(!copy.empty()) {
				t += copy.top().estimate.value;
				e += copy.top().estimate.error;
				copy.pop();
			}
			total = t;
			error = e;
		}
	}
	return {total, error};
}

ApproxValue quad_integrate(const FuncExpr &f, std::span<const Box> region, const Rational &tol,
                           std::size_t max_subdivisions) {
	const auto cells = disjoint_cells(region);
	Rational volume = 0;
	for(const auto &c : cells) {
		volume += c.volume();
	}
	ApproxValue sum;
	for(const auto &c : cells) {
		const Rational share = volume.is_zero() ? tol : tol * c.volume() / volume;
		if(share.sign() <= 0) {
			continue;
		}
		const auto part = quad_integrate(f, c, share, max_subdivisions);
		sum.value += part.value;
		sum.error += part.error;
	}
	return sum;
}

} // namespace traceexpr
