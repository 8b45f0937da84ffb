#pragma once

#include "traceexpr/box.hpp"
#include "traceexpr/error.hpp"
#include "traceexpr/func_expr.hpp"
#include "traceexpr/rational.hpp"

#include <span>

namespace traceexpr {

struct QuadratureConfig {
	Rational tol{1, 1'000'000'000};
	std::size_t max_subdivisions = 20'000;

	/// Default configuration with TRACEEXPR_TOL applied when set.
	static QuadratureConfig from_environment();
};

/// Approximate value with an absolute error estimate.
struct ApproxValue {
	double value = 0.0;
	double error = 0.0;

	[[nodiscard]] double lo() const { return value - error; }
	[[nodiscard]] double hi() const { return value + error; }
};

/// Raised when the subdivision budget runs out before the tolerance is met.
class QuadratureError : public Error {
public:
	QuadratureError(ApproxValue best, double tol);
	[[nodiscard]] const ApproxValue &best() const { return best_; }

private:
	ApproxValue best_;
};

/// Adaptive tensor Gauss-Kronrod (7/15) integration with bisection of the
/// worst cell. Deterministic for fixed inputs.
ApproxValue quad_integrate(const FuncExpr &f, const Box &region, const Rational &tol,
                           std::size_t max_subdivisions = QuadratureConfig{}.max_subdivisions);

/// Integral over a union of boxes; the tolerance is shared between cells in
/// proportion to their volume.
ApproxValue quad_integrate(const FuncExpr &f, std::span<const Box> region, const Rational &tol,
                           std::size_t max_subdivisions = QuadratureConfig{}.max_subdivisions);

} // namespace traceexpr
