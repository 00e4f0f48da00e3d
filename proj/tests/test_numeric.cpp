#include "ablift/errors.hpp"
#include "ablift/numeric.hpp"

#include "doctest.h"

#include <cmath>

using namespace ablift;
using namespace ablift::numeric;
using poly::Polynomial;

namespace {

Polynomial first_integral_of(const integral::PolynomialODE& ode)
{
    return integral::first_integral(integral::phi_family(ode.rank, integral::orthogonalize(ode)));
}

constexpr double kTolerance = 1e-6;

}  // namespace

TEST_CASE("origin is an equilibrium for the spiral and the earring")
{
    for (const char* text : {"-x1 - x2; x1 - x2", "x1^2 - x2^2; 2*x1*x2"}) {
        const auto ode = integral::parse_ode(text);
        const Trajectory t = numeric_check(ode, first_integral_of(ode), 5.0, 1e-3);
        CHECK(t.finite);
        CHECK(t.steps == 5000);
        CHECK(t.initial_value == 0);
        CHECK(t.max_residual <= kTolerance);
    }
}

TEST_CASE("first integrals stay constant away from the origin")
{
    const auto spiral = integral::parse_ode("-x1 - x2; x1 - x2");
    const Trajectory a = numeric_check(spiral, first_integral_of(spiral), 5.0, 1e-3, {1.0, 0.0});
    CHECK(a.finite);
    CHECK(a.initial_value == doctest::Approx(0.5));
    CHECK(a.max_residual <= kTolerance);

    // z' = z^2 from z = -1 + i/2 tends to 0 without blowing up.
    const auto earring = integral::parse_ode("x1^2 - x2^2; 2*x1*x2");
    const Trajectory b = numeric_check(earring, first_integral_of(earring), 5.0, 1e-3, {-1.0, 0.5});
    CHECK(b.finite);
    CHECK(b.max_residual <= kTolerance);

    // A polynomial that is not a first integral drifts.
    const Trajectory c = numeric_check(spiral, poly::parse_polynomial("x1^2 + x2^2", 2), 5.0, 1e-3, {1.0, 0.0});
    CHECK(c.max_residual > 0.5);
}

TEST_CASE("zero polynomial and errors")
{
    const auto spiral = integral::parse_ode("-x1 - x2; x1 - x2");
    const Trajectory t = numeric_check(spiral, Polynomial(), 2.0, 1e-2, {0.3, -0.2});
    CHECK(t.max_residual == 0);
    CHECK(t.steps == 200);
    CHECK_THROWS_AS(numeric_check(spiral, Polynomial(), 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(numeric_check(spiral, Polynomial(), -1.0, 0.1), DomainError);
    CHECK_THROWS_AS(numeric_check(spiral, Polynomial(), 1.0, 0.1, {1.0}), DomainError);
    CHECK_THROWS_AS(numeric_check(spiral, poly::parse_polynomial("x3", 3), 1.0, 0.1), DomainError);
}

TEST_CASE("blow up is reported")
{
    // x1' = x1^2 from x1 = 1 blows up at t = 1.
    const integral::PolynomialODE ode(2, {poly::parse_polynomial("x1^2", 2), Polynomial()});
    const Trajectory t = numeric_check(ode, poly::parse_polynomial("x1", 2), 3.0, 1e-2, {1.0, 0.0});
    CHECK_FALSE(t.finite);
    CHECK(t.steps < 300);
}
