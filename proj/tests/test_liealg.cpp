#include "ablift/errors.hpp"
#include "ablift/liealg.hpp"

#include "assoc_oracle.hpp"
#include "doctest.h"

#include <random>
#include <thread>

using namespace ablift;
using namespace ablift::lie;

namespace {

Index at(const AlgebraContext& ctx, const std::string& w)
{
    auto i = ctx.basis().parse(w);
    REQUIRE(i.has_value());
    return *i;
}

LieElement X(const AlgebraContext& ctx, const std::string& w, const Rational& c = 1)
{
    return LieElement::basis(ctx, at(ctx, w), c);
}

LieElement random_element(const AlgebraContext& ctx, std::mt19937& rng, unsigned max_degree)
{
    const Index end = ctx.basis().degree_end(max_degree);
    std::uniform_int_distribution<Index> pick(0, end - 1);
    std::uniform_int_distribution<int> coeff(-3, 3);
    std::uniform_int_distribution<int> count(1, 3);
    LieElement x(&ctx);
    for (int k = count(rng); k > 0; --k) x += LieElement::basis(ctx, pick(rng), Rational(coeff(rng)) / static_cast<int>(1 + rng() % 2));
    return x;
}

}  // namespace

TEST_CASE("basic brackets")
{
    AlgebraContext ctx(2, 5);
    CHECK(bracket(X(ctx, "1"), X(ctx, "2")) == X(ctx, "12"));
    CHECK(bracket(X(ctx, "2"), X(ctx, "1")) == -X(ctx, "12"));
    CHECK(bracket(X(ctx, "1"), X(ctx, "212")) == X(ctx, "2112"));
    CHECK(bracket(X(ctx, "1"), X(ctx, "1")).is_zero());
    CHECK(bracket(X(ctx, "12"), X(ctx, "1112")).is_zero());  // degree 6 > 5
}

TEST_CASE("basis-pair brackets agree with the associative expansion")
{
    for (unsigned r = 2; r <= 3; ++r) {
        const unsigned s = r == 2 ? 7 : 5;
        AlgebraContext ctx(r, s);
        const auto& b = ctx.basis();
        for (Index u = 0; u < b.size(); ++u) {
            for (Index v = 0; v < b.size(); ++v) {
                if (b.degree(u) + b.degree(v) > s) continue;
                const auto lhs = oracle::expand(ctx.bracket_basis(u, v));
                const auto rhs = oracle::commutator(oracle::expand_word(b, u), oracle::expand_word(b, v), s);
                CHECK(lhs == rhs);
            }
        }
    }
}

TEST_CASE("antisymmetry, Jacobi and grading on random elements")
{
    std::mt19937 rng(12345);
    for (int trial = 0; trial < 240; ++trial) {
        const unsigned r = 2 + trial % 2;
        const unsigned s = 4 + trial % 3;
        auto ctx = context_for(r, s);
        LieElement a = random_element(*ctx, rng, s);
        LieElement b = random_element(*ctx, rng, s);
        LieElement c = random_element(*ctx, rng, s);
        CHECK(bracket(a, b) == -bracket(b, a));
        LieElement jac = bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) + bracket(c, bracket(a, b));
        CHECK(jac.is_zero());
        const Index u = rng() % ctx->basis().size();
        const Index v = rng() % ctx->basis().size();
        const LieElement uv = ctx->bracket_basis(u, v);
        if (!uv.is_zero()) {
            CHECK(uv.is_homogeneous());
            CHECK(uv.min_degree() == ctx->degree(u) + ctx->degree(v));
        }
    }
}

TEST_CASE("quotient brackets are full brackets modulo the killed words")
{
    for (unsigned m = 2; m <= 4; ++m) {
        const unsigned s = 2 * m + 2;
        AlgebraContext full(2, s);
        AlgebraContext q(2, s, m);
        const auto& b = q.basis();
        for (Index u = 0; u < b.size(); ++u) {
            for (Index v = u + 1; v < b.size(); ++v) {
                if (b.degree(u) + b.degree(v) > s) continue;
                auto fu = full.basis().find(b[u].letters);
                auto fv = full.basis().find(b[v].letters);
                REQUIRE(fu);
                REQUIRE(fv);
                const LieElement expected = transfer(full.bracket_basis(*fu, *fv), q);
                CHECK(q.bracket_basis(u, v) == expected);
                if (b.degree(u) >= m && b.degree(v) >= m) CHECK(q.bracket_basis(u, v).is_zero());
            }
        }
    }
}

TEST_CASE("quotient soundness on random elements of g^(m)")
{
    std::mt19937 rng(7);
    AlgebraContext q(3, 8, 3);
    const Index lo = q.basis().degree_begin(3);
    for (int trial = 0; trial < 200; ++trial) {
        LieElement a(&q), b(&q);
        for (int k = 0; k < 3; ++k) {
            a += LieElement::basis(q, lo + rng() % (q.basis().size() - lo), 1 + static_cast<int>(rng() % 5));
            b += LieElement::basis(q, lo + rng() % (q.basis().size() - lo), 1 + static_cast<int>(rng() % 5));
        }
        CHECK(bracket(a, b).is_zero());
    }
}

TEST_CASE("cache coherence")
{
    AlgebraContext ctx(3, 6, 3);
    const auto& b = ctx.basis();
    for (Index u = 0; u < b.size(); u += 3) {
        for (Index v = 0; v < b.size(); v += 5) {
            if (b.degree(u) + b.degree(v) > 6) continue;
            CHECK(ctx.bracket_basis(u, v) == ctx.bracket_basis_uncached(u, v));
        }
    }
}

TEST_CASE("concurrent cache use gives identical results")
{
    AlgebraContext shared(2, 9, 3);
    AlgebraContext serial(2, 9, 3);
    const auto& b = shared.basis();
    std::vector<std::thread> pool;
    for (int t = 0; t < 4; ++t) {
        pool.emplace_back([&, t] {
            for (Index u = t; u < b.size(); u += 1) {
                for (Index v = 0; v < b.size(); ++v) {
                    if (b.degree(u) + b.degree(v) <= 9) (void)shared.bracket_basis(u, v);
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    for (Index u = 0; u < b.size(); ++u) {
        for (Index v = 0; v < b.size(); ++v) {
            if (b.degree(u) + b.degree(v) <= 9) CHECK(shared.bracket_basis(u, v) == serial.bracket_basis(u, v));
        }
    }
}

TEST_CASE("adjoint words")
{
    AlgebraContext ctx(2, 11, 3);
    const Index x1 = at(ctx, "1");
    const Index x2 = at(ctx, "2");
    const Index x12 = at(ctx, "12");
    CHECK(apply_ad_word({{x1, 1}}, X(ctx, "1")).is_zero());
    LieElement t = X(ctx, "12");
    std::string word = "12";
    for (unsigned b = 1; b <= 9; ++b) {
        word = "2" + word;
        CHECK(apply_ad_word({{x2, b}}, X(ctx, "12")) == X(ctx, word));
    }
    // [ad X1, ad X2] = ad X12 on g^(3).
    for (Index z : lower_central_term(ctx, 3)) {
        if (ctx.degree(z) > 8) continue;
        const LieElement Z = LieElement::basis(ctx, z);
        CHECK(ad(x1, ad(x2, Z)) - ad(x2, ad(x1, Z)) == ad(x12, Z));
    }
}

TEST_CASE("lower central terms")
{
    AlgebraContext a(2, 3, 3);
    auto w = lower_central_term(a, 3);
    REQUIRE(w.size() == 2);
    CHECK(a.basis().to_string(w[0]) == "112");
    CHECK(a.basis().to_string(w[1]) == "212");
    AlgebraContext b(2, 3);
    CHECK(lower_central_term(b, 1).size() == b.basis().size());
    AlgebraContext c(3, 4, 4);
    CHECK(lower_central_term(c, 4).size() == 18);
}

TEST_CASE("context mismatch")
{
    AlgebraContext a(2, 3);
    AlgebraContext b(2, 3);
    CHECK_THROWS_AS(bracket(X(a, "1"), X(b, "2")), ContextMismatch);
    CHECK(context_for(2, 5, 3).get() == context_for(2, 5, 3).get());
    CHECK(!a.dump_bracket_table(3).empty());
}
