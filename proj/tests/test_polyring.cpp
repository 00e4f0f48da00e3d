#include "ablift/errors.hpp"
#include "ablift/polyring.hpp"

#include "doctest.h"

#include <random>
#include <set>

using namespace ablift;
using namespace ablift::poly;

namespace {

Polynomial P(const std::string& text, unsigned rank = 2)
{
    return parse_polynomial(text, rank);
}

Var V(const std::string& word, unsigned rank = 2)
{
    const auto& b = variable_basis(rank, static_cast<unsigned>(word.size()));
    auto i = b.parse(word);
    REQUIRE(i.has_value());
    return var_of(b, *i);
}

Polynomial random_poly(std::mt19937& rng, const std::vector<Var>& vars, unsigned max_degree, int terms)
{
    Polynomial p;
    std::uniform_int_distribution<int> coeff(-4, 4);
    for (int t = 0; t < terms; ++t) {
        Monomial m;
        for (int k = 0; k < 4; ++k) {
            const Var v = vars[rng() % vars.size()];
            if (m.weighted_degree() + v.degree <= max_degree) m = m * Monomial::of(v);
        }
        p.add_term(m, Rational(coeff(rng)) / (1 + static_cast<int>(rng() % 3)));
    }
    return p;
}

std::vector<Var> low_vars(unsigned rank, unsigned max_degree)
{
    const auto& b = variable_basis(rank, max_degree);
    std::vector<Var> out;
    for (Index i = 0; i < b.degree_end(max_degree); ++i) out.push_back(var_of(b, i));
    return out;
}

}  // namespace

TEST_CASE("arithmetic")
{
    CHECK((P("x1 - x2") * P("x1 + x2")) == P("x1^2 - x2^2"));
    CHECK((P("x1 + 3*x[12]") * Polynomial()).is_zero());
    CHECK((P("x1*x2") * P("x[12]")).degree() == 4);
    CHECK(P("2*x1 - 2*x1").is_zero());
    CHECK(pow(P("x1 + 1"), 3) == P("x1^3 + 3*x1^2 + 3*x1 + 1"));
    CHECK(P("(x1 + x2)/2") == P("1/2*x1 + 1/2*x2"));
}

TEST_CASE("partial derivatives")
{
    CHECK(partial_derivative(P("x1^2*x2"), V("1")) == P("2*x1*x2"));
    CHECK(partial_derivative(P("2*x[12] + x1^2"), V("12")) == P("2"));
    const Polynomial q = P("1/2*x1^2 - x1*x2 + 1/2*x2^2 + 2*x[12]");
    CHECK(partial_derivative(q, V("2")) == P("-x1 + x2"));
}

TEST_CASE("staircase antiderivative")
{
    const Polynomial q = staircase_antiderivative({{V("1"), P("x1 - x2")}, {V("2"), P("-x1 + x2")}, {V("12"), P("2")}});
    CHECK(q == P("1/2*x[1]^2 - x[1]*x[2] + 1/2*x[2]^2 + 2*x[12]"));
    CHECK(staircase_antiderivative({{V("1"), Polynomial()}, {V("2"), Polynomial()}}).is_zero());
    CHECK_THROWS_AS(staircase_antiderivative({{V("1"), P("x2")}, {V("2"), Polynomial()}}), InexactError);
    CHECK_THROWS_AS(staircase_antiderivative({{V("1"), P("x[12]")}}), InexactError);
}

TEST_CASE("staircase round trip on random polynomials")
{
    std::mt19937 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const unsigned r = 2 + trial % 2;
        const auto vars = low_vars(r, 3);
        Polynomial q = random_poly(rng, vars, 5, 6);
        q.add_term(Monomial(), -q.constant_term());
        std::vector<std::pair<Var, Polynomial>> grad;
        for (Var v : vars) grad.emplace_back(v, partial_derivative(q, v));
        CHECK(staircase_antiderivative(grad) == q);
    }
}

TEST_CASE("ring axioms and commuting partials")
{
    std::mt19937 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const auto vars = low_vars(3, 3);
        const Polynomial a = random_poly(rng, vars, 4, 4);
        const Polynomial b = random_poly(rng, vars, 4, 4);
        const Polynomial c = random_poly(rng, vars, 4, 4);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        if (!a.is_zero() && !b.is_zero()) CHECK((a * b).degree() == a.degree() + b.degree());
        const Var u = vars[rng() % vars.size()];
        const Var v = vars[rng() % vars.size()];
        CHECK(partial_derivative(partial_derivative(a, u), v) == partial_derivative(partial_derivative(a, v), u));
        // Leibniz for the coordinate partial.
        CHECK(partial_derivative(a * b, u) == partial_derivative(a, u) * b + a * partial_derivative(b, u));
    }
}

TEST_CASE("monomial enumeration")
{
    CHECK(enumerate_monomials({V("1"), V("2"), V("12")}, 2).size() == 7);
    CHECK(enumerate_monomials({}, 5).size() == 1);
    CHECK(enumerate_monomials({V("1")}, 3).size() == 4);
    CHECK_THROWS_AS(enumerate_monomials(low_vars(3, 2), 12, 100), ResourceError);
    const auto ms = enumerate_monomials({V("1"), V("2"), V("12")}, 4);
    std::set<std::string> seen;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        CHECK(ms[i].weighted_degree() <= 4);
        if (i > 0) CHECK(ms[i - 1].weighted_degree() <= ms[i].weighted_degree());
        seen.insert(to_string(ms[i], 2));
    }
    CHECK(seen.size() == ms.size());
}

TEST_CASE("Poincare coefficients")
{
    const auto n = poincare_coefficients(2, 3, 4);
    const std::vector<int> expected = {1, 2, 4, 6, 9};
    for (int k = 0; k <= 4; ++k) CHECK(n[k] == expected[k]);
    const auto b = poincare_coefficients(4, 2, 6);
    for (int k = 0; k <= 6; ++k) {
        Integer binom;
        mpz_bin_uiui(binom.get_mpz_t(), k + 3, 3);
        CHECK(b[k] == binom);
    }
    CHECK_THROWS_AS(poincare_coefficients(2, 1, 3), DomainError);
}

TEST_CASE("Poincare coefficients match brute-force monomial counts")
{
    for (unsigned r = 1; r <= 3; ++r) {
        for (unsigned m = 2; m <= 4; ++m) {
            const auto vars = low_vars(r, m - 1);
            const auto n = poincare_coefficients(r, m, 8);
            std::vector<std::size_t> count(9, 0);
            for (const auto& mono : enumerate_monomials(vars, 8)) ++count[mono.weighted_degree()];
            for (unsigned k = 0; k <= 8; ++k) {
                CAPTURE(r);
                CAPTURE(m);
                CAPTURE(k);
                CHECK(n[k] == count[k]);
            }
        }
    }
}

TEST_CASE("text format")
{
    const Polynomial q = P("1/2*x1^2 - x1*x2 + 1/2*x2^2 + 2*x[12]");
    CHECK(to_string(q, 2) == "1/2*x[1]^2 - x[1]*x[2] + 1/2*x[2]^2 + 2*x[12]");
    CHECK(to_string(Polynomial(), 2) == "0");
    CHECK(to_string(P("-3"), 2) == "-3");
    CHECK(to_string(P("x1^2*x2 + 1/3*x2^3 - 4*x[112]"), 2) == "x[1]^2*x[2] + 1/3*x[2]^3 - 4*x[112]");
    std::mt19937 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const unsigned r = 2 + trial % 2;
        const Polynomial p = random_poly(rng, low_vars(r, 3), 6, 5);
        CHECK(parse_polynomial(to_string(p, r), r) == p);
    }
    CHECK(P("-(x1 - 2)*x2") == P("-x1*x2 + 2*x2"));
    CHECK(P("x1*-x2") == P("-x1*x2"));
    CHECK_THROWS_AS(P("x3"), ParseError);
    CHECK_THROWS_AS(P("x[21]"), ParseError);
    CHECK_THROWS_AS(P("x1 +"), ParseError);
    CHECK_THROWS_AS(P("x1/x2"), ParseError);
    CHECK_THROWS_AS(P("1/0"), ParseError);
    CHECK_THROWS_AS(P("(x1"), ParseError);
    CHECK_THROWS_AS(P("y1"), ParseError);
}

TEST_CASE("substitution and evaluation")
{
    const Polynomial p = P("x1^2 - x2");
    const Polynomial shifted = substitute(p, {{V("1"), P("x1 + 1")}});
    CHECK(shifted == P("x1^2 + 2*x1 + 1 - x2"));
    CHECK(evaluate(p, [](Var v) { return v.index == 0 ? 3.0 : 1.0; }) == doctest::Approx(8.0));
}
