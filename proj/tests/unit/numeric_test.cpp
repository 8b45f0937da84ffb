#include "generators.hpp"

#include "traceexpr/box.hpp"
#include "traceexpr/func_expr.hpp"
#include "traceexpr/polynomial.hpp"
#include "traceexpr/quadrature.hpp"
#include "traceexpr/rational.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace traceexpr;

namespace {

Polynomial x1() { return Polynomial::variable(1, 0); }
Polynomial c1(const Rational &c) { return Polynomial::constant(1, c); }
Box interval(const Rational &lo, const Rational &hi) { return Box({Interval{lo, hi}}); }

/// Schoolbook product over the dense coefficient list of univariate polynomials.
std::vector<Rational> dense_mul(const std::vector<Rational> &a, const std::vector<Rational> &b) {
	std::vector<Rational> out(a.size() + b.size() - 1, Rational(0));
	for(std::size_t i = 0; i < a.size(); ++i) {
		for(std::size_t j = 0; j < b.size(); ++j) {
			out[i + j] += a[i] * b[j];
		}
	}
	return out;
}

} // namespace

TEST(Rational, ParsesCommonForms) {
	EXPECT_EQ(Rational::parse("3/6"), Rational(1, 2));
	EXPECT_EQ(Rational::parse("0.25"), Rational(1, 4));
	EXPECT_EQ(Rational::parse("1e-6"), Rational(1, 1'000'000));
	EXPECT_EQ(Rational::parse("-2"), Rational(-2));
	EXPECT_THROW(Rational::parse("1/0"), Error);
	EXPECT_THROW(Rational::parse("abc"), Error);
}

TEST(Rational, Arithmetic) {
	EXPECT_EQ(Rational(1, 2) + Rational(1, 3), Rational(5, 6));
	EXPECT_EQ(Rational(1, 12).pow(2), Rational(1, 144));
	EXPECT_EQ(Rational(2, 3).inverse(), Rational(3, 2));
	EXPECT_EQ(Rational(3).to_fraction_string(), "3/1");
	EXPECT_EQ(Rational(-7, 2).floor(), -4);
	EXPECT_EQ(factorial(5), Rational(120));
	EXPECT_THROW(Rational(0).inverse(), Error);
}

TEST(RatGcd, SpecExamples) {
	const std::vector<Rational> a{Rational(1, 2), Rational(1, 3), Rational(1, 6)};
	EXPECT_EQ(rat_gcd(a), Rational(1, 6));
	const std::vector<Rational> b{Rational(1, 4)};
	EXPECT_EQ(rat_gcd(b), Rational(1, 4));
	const std::vector<Rational> c{Rational(1, 2), Rational(1, 2)};
	EXPECT_EQ(rat_gcd(c), Rational(1, 2));
	EXPECT_THROW(rat_gcd(std::vector<Rational>{}), InvalidArgument);
	EXPECT_THROW(rat_gcd(std::vector<Rational>{Rational(0)}), InvalidArgument);
}

TEST(RatGcd, MatchesBruteForceDivisorSearch) {
	traceexpr::testing::Rng rng(3);
	for(int round = 0; round < 200; ++round) {
		std::vector<Rational> v;
		const std::size_t n = 1 + rng() % 4;
		long lcm = 1;
		for(std::size_t i = 0; i < n; ++i) {
			v.push_back(traceexpr::testing::random_unit_rational(rng, 10));
			lcm = std::lcm(lcm, v.back().denominator().get_si());
		}
		// Largest g = k/lcm dividing every value, by scanning k downward.
		std::vector<long> nums;
		for(const auto &x : v) {
			nums.push_back((x * Rational(lcm)).numerator().get_si());
		}
		long best = 1;
		for(long k = *std::min_element(nums.begin(), nums.end()); k >= 1; --k) {
			if(std::all_of(nums.begin(), nums.end(), [k](long m) { return m % k == 0; })) {
				best = k;
				break;
			}
		}
		const Rational g = rat_gcd(v);
		EXPECT_EQ(g, Rational(best, lcm));
		for(const auto &x : v) {
			EXPECT_TRUE((x / g).is_integer());
		}
	}
}

TEST(Polynomial, IntegrateSpecExamples) {
	EXPECT_EQ(poly_integrate(x1(), Box::unit(1)), Rational(1, 2));
	const Polynomial up = x1() + c1(Rational(1, 2));
	const Polynomial down = c1(Rational(1, 2)) - x1();
	const Box half = interval(0, Rational(1, 2));
	EXPECT_EQ(poly_integrate(up * down, half), Rational(1, 12));
	EXPECT_EQ(poly_integrate(up.pow(2) * down.pow(2), half), Rational(1, 60));
	EXPECT_THROW(poly_integrate(x1(), Box::unit(2)), DimensionError);
}

TEST(Polynomial, MulSpecExamples) {
	const Polynomial up = x1() + c1(Rational(1, 2));
	const Polynomial down = c1(Rational(1, 2)) - x1();
	EXPECT_EQ(poly_mul(up, down), c1(Rational(1, 4)) - x1().pow(2));
	EXPECT_EQ(poly_mul(up, c1(1)), up);
	EXPECT_TRUE(poly_mul(up, Polynomial(1)).is_zero());
	EXPECT_THROW(poly_mul(up, Polynomial(2)), DimensionError);
}

TEST(Polynomial, MulMatchesSchoolbookOracle) {
	traceexpr::testing::Rng rng(5);
	for(int round = 0; round < 100; ++round) {
		std::vector<Rational> a(1 + rng() % 4), b(1 + rng() % 4);
		Polynomial pa(1), pb(1);
		for(std::size_t i = 0; i < a.size(); ++i) {
			a[i] = Rational(static_cast<long>(rng() % 7) - 3, 1 + static_cast<long>(rng() % 4));
			pa.add_term({static_cast<std::uint32_t>(i)}, a[i]);
		}
		for(std::size_t i = 0; i < b.size(); ++i) {
			b[i] = Rational(static_cast<long>(rng() % 7) - 3, 1 + static_cast<long>(rng() % 4));
			pb.add_term({static_cast<std::uint32_t>(i)}, b[i]);
		}
		const auto dense = dense_mul(a, b);
		const Polynomial prod = poly_mul(pa, pb);
		for(std::size_t i = 0; i < dense.size(); ++i) {
			EXPECT_EQ(prod.coefficient({static_cast<std::uint32_t>(i)}), dense[i]);
		}
		EXPECT_LE(prod.terms().size(), pa.terms().size() * pb.terms().size());
	}
}

TEST(Polynomial, IntegrationIsLinearAndBounded) {
	traceexpr::testing::Rng rng(9);
	for(int round = 0; round < 100; ++round) {
		const auto tapd = traceexpr::testing::random_polynomial_tapd(rng, 3, 2);
		const std::size_t m = tapd.clocks.size();
		const Box box(tapd.clock_domains);
		const Polynomial p = *tapd.edges.front().function.to_polynomial(m);
		const Polynomial q = *tapd.edges.back().function.to_polynomial(m);
		EXPECT_EQ(poly_integrate(p + q, box), poly_integrate(p, box) + poly_integrate(q, box));
		// Generated functions are non-negative and bounded by 9/10 on the unit box.
		const Rational v = poly_integrate(p, box);
		EXPECT_GE(v, Rational(0));
		EXPECT_LE(v, box.volume());
	}
}

TEST(Polynomial, UnionIntegrationCountsOverlapOnce) {
	const std::vector<Box> boxes{interval(0, Rational(1, 2)), interval(Rational(1, 4), 1)};
	EXPECT_EQ(poly_integrate(c1(1), boxes), Rational(1));
	EXPECT_EQ(poly_integrate(x1(), boxes), Rational(1, 2));
}

TEST(Box, IntersectAndVolume) {
	const Box a({Interval{0, 1}, Interval{0, Rational(1, 2)}});
	const Box b({Interval{Rational(1, 2), 1}, Interval{Rational(1, 4), 1}});
	const auto c = a.intersect(b);
	ASSERT_TRUE(c.has_value());
	EXPECT_EQ(c->volume(), Rational(1, 8));
	EXPECT_FALSE(interval(0, Rational(1, 4)).intersect(interval(Rational(1, 2), 1)).has_value());
	EXPECT_EQ(Box().volume(), Rational(1));
	EXPECT_EQ(a.to_string(), "[0,1] x [0,1/2]");
}

TEST(Taylor, SpecExamples) {
	const FuncExpr x = FuncExpr::variable(0);
	Polynomial expected = c1(1) + x1();
	expected.add_term({2}, Rational(1, 2));
	EXPECT_EQ(taylor_truncate(exp(x), 2, 1), expected);
	EXPECT_EQ(taylor_truncate(exp(x), 0, 1), c1(1));
	const Polynomial p = (x1() + c1(Rational(1, 2))).pow(2);
	EXPECT_EQ(taylor_truncate(FuncExpr::from_polynomial(p), 2, 1), p);
	EXPECT_EQ(taylor_truncate(FuncExpr::from_polynomial(p), 5, 1), p);
}

TEST(Taylor, SeriesCoefficientsMatchClosedForms) {
	const FuncExpr x = FuncExpr::variable(0);
	// exp(x) * (1 + x) has coefficients (n + 1) / n!; exp(-x) has (-1)^n / n!.
	const Polynomial a = taylor_truncate(exp(x) * (FuncExpr::constant(1) + x), 7, 1);
	const Polynomial b = taylor_truncate(exp(-x), 7, 1);
	for(std::uint32_t n = 0; n <= 7; ++n) {
		EXPECT_EQ(a.coefficient({n}), Rational(static_cast<long>(n) + 1) / factorial(n));
		EXPECT_EQ(b.coefficient({n}), Rational(n % 2 == 0 ? 1 : -1) / factorial(n));
	}
	EXPECT_EQ(a.total_degree(), 7u);
}

TEST(Taylor, MultivariateUsesTotalDegree) {
	const FuncExpr xy = FuncExpr::variable(0) * FuncExpr::variable(1);
	const Polynomial t = taylor_truncate(exp(xy), 3, 2);
	EXPECT_EQ(t.coefficient({0, 0}), Rational(1));
	EXPECT_EQ(t.coefficient({1, 1}), Rational(1));
	EXPECT_EQ(t.coefficient({2, 2}), Rational(0));
	EXPECT_THROW(taylor_truncate(exp(FuncExpr::constant(1)), 2, 1), InvalidArgument);
}

TEST(Quadrature, SpecExamples) {
	const Rational tol(1, 1'000'000'000);
	const auto a = quad_integrate(FuncExpr::constant(Rational(1, 3)), Box::unit(1), tol);
	EXPECT_NEAR(a.value, 1.0 / 3.0, 1e-9);
	EXPECT_LE(a.error, 1e-9);
	const auto b = quad_integrate(exp(FuncExpr::variable(0)), Box::unit(1), tol);
	EXPECT_NEAR(b.value, std::exp(1.0) - 1.0, 1e-9);
	const auto c = quad_integrate(FuncExpr::variable(0) * FuncExpr::variable(1), Box::unit(2), tol);
	EXPECT_NEAR(c.value, poly_integrate(Polynomial::variable(2, 0) * Polynomial::variable(2, 1), Box::unit(2)).to_double(),
	            1e-9);
}

TEST(Quadrature, AgreesWithExactIntegration) {
	traceexpr::testing::Rng rng(21);
	for(int round = 0; round < 40; ++round) {
		const auto tapd = traceexpr::testing::random_polynomial_tapd(rng, 3, 2);
		const Box box(tapd.clock_domains);
		for(const auto &e : tapd.edges) {
			const Rational exact = poly_integrate(*e.function.to_polynomial(tapd.clocks.size()), box);
			const auto approx = quad_integrate(e.function, box, Rational(1, 1'000'000'000));
			EXPECT_NEAR(approx.value, exact.to_double(), 1e-9);
		}
	}
}

TEST(Quadrature, BudgetExhaustionReportsBestBound) {
	const FuncExpr f = exp(pow(FuncExpr::variable(0), 3) * FuncExpr::constant(40));
	try {
		(void)quad_integrate(f, Box::unit(1), Rational(1, 1'000'000'000'000), 1);
		FAIL() << "expected QuadratureError";
	} catch(const QuadratureError &e) {
		EXPECT_GT(e.best().error, 0.0);
	}
}

TEST(FuncExpr, EvaluatesAndPrints) {
	const FuncExpr x = FuncExpr::variable(0);
	const FuncExpr f = FuncExpr::constant(Rational(1, 2)) * exp(-x) + pow(x, 2);
	const double v = f.evaluate(std::vector<double>{0.5});
	EXPECT_NEAR(v, 0.5 * std::exp(-0.5) + 0.25, 1e-15);
	EXPECT_TRUE(f.contains_exp());
	EXPECT_FALSE(f.to_polynomial(1).has_value());
	EXPECT_EQ(f.variable_bound(), 1u);
}
