#include "ablift/abnormal.hpp"

#include "ablift/errors.hpp"

#include <algorithm>

namespace ablift::abn {

Covector::Covector(std::shared_ptr<const AlgebraContext> ctx) : ctx_(std::move(ctx))
{
    if (!ctx_) throw DomainError("covector needs a context");
}

void Covector::set(Index word, const Rational& value)
{
    if (word >= ctx_->basis().size()) throw DomainError("covector word outside context basis");
    if (value == 0) {
        components_.erase(word);
    } else {
        components_[word] = value;
    }
}

Rational Covector::get(Index word) const
{
    auto it = components_.find(word);
    return it == components_.end() ? Rational(0) : it->second;
}

Rational Covector::apply(const LieElement& x) const
{
    if (x.context() && x.context() != ctx_.get()) throw ContextMismatch("covector and Lie element contexts differ");
    Rational total = 0;
    for (const auto& t : x.terms()) {
        auto it = components_.find(t.word);
        if (it != components_.end()) total += t.coeff * it->second;
    }
    return total;
}

nlohmann::json covector_to_json(const Covector& lam)
{
    nlohmann::json comps = nlohmann::json::object();
    for (const auto& [w, v] : lam.components()) comps[lam.context().basis().to_string(w)] = to_string(v);
    return {{"context",
             {{"rank", lam.context().rank()},
              {"step", lam.context().step()},
              {"quotient_layer", lam.context().quotient_layer()}}},
            {"components", comps}};
}

Covector covector_from_json(const nlohmann::json& j)
{
    try {
        const auto& c = j.at("context");
        auto ctx = lie::context_for(c.at("rank").get<unsigned>(), c.at("step").get<unsigned>(),
                                    c.value("quotient_layer", 0u));
        Covector lam(ctx);
        for (const auto& [word, value] : j.at("components").items()) {
            auto idx = ctx->basis().parse(word);
            if (!idx) throw ParseError("'" + word + "' is not a Hall word of the covector context");
            lam.set(*idx, parse_rational(value.get<std::string>()));
        }
        return lam;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed covector JSON: ") + e.what());
    }
}

namespace {

void expand(const LieElement& e, Index start, const Monomial& mono, const Rational& weight,
            std::vector<ExpansionTerm>& out)
{
    out.push_back({mono, weight * e});
    const AlgebraContext& ctx = *e.context();
    const auto& basis = ctx.basis();
    const unsigned low = e.min_degree();
    unsigned budget = ctx.step() - low;
    const unsigned m = ctx.quotient_layer();
    if (m > 0 && low >= m) budget = std::min(budget, m - 1);
    const Index end = basis.degree_end(budget);
    for (Index j = start; j < end; ++j) {
        LieElement next = lie::ad(j, e);
        if (next.is_zero()) continue;
        const std::uint32_t exp = mono.exponent(poly::Var{j, 0}) + 1;
        expand(next, j, mono * Monomial::of(poly::var_of(basis, j)), weight / exp, out);
    }
}

}  // namespace

std::vector<ExpansionTerm> adjoint_expansion(const LieElement& z)
{
    std::vector<ExpansionTerm> out;
    if (z.is_zero()) return out;
    expand(z, 0, Monomial(), Rational(1), out);
    return out;
}

Polynomial abnormal_polynomial(const LieElement& z, const Covector& lam)
{
    if (z.context() && z.context() != &lam.context()) throw ContextMismatch("abnormal_polynomial: contexts differ");
    Polynomial p;
    for (const auto& t : adjoint_expansion(z)) p.add_term(t.monomial, lam.apply(t.value));
    return p;
}

Index minimal_word(const hall::HallBasis& basis, unsigned m)
{
    if (basis.rank() < 2) throw DomainError("the minimal word 1^{m-1}2 needs rank >= 2");
    if (m < 2 || m > basis.max_degree()) throw DomainError("minimal word degree outside the basis");
    std::u16string letters(m - 1, u'\x01');
    letters.push_back(u'\x02');
    auto idx = basis.find(letters);
    if (!idx) throw std::logic_error("minimal word missing from basis");
    return *idx;
}

Index monomial_word(const hall::HallBasis& basis, const Monomial& mono, Index w)
{
    Index t = w;
    for (const auto& f : mono.factors()) {
        for (std::uint32_t e = 0; e < f.exp; ++e) {
            auto next = basis.find_pair(f.var.index, t);
            if (!next) throw DomainError("monomial word leaves the basis");
            t = *next;
        }
    }
    return t;
}

Covector realize_polynomial(const Polynomial& p, unsigned m, std::shared_ptr<const AlgebraContext> ctx)
{
    if (ctx->rank() < 2) throw DomainError("realize_polynomial needs rank >= 2");
    if (ctx->quotient_layer() != m) throw DomainError("realize_polynomial needs a context with quotient layer m");
    if (p.max_variable_degree() >= m) throw DomainError("polynomial uses a variable of degree >= m");
    if (m + p.degree() > ctx->step()) throw DomainError("polynomial degree exceeds step - m");
    const Index w = minimal_word(ctx->basis(), m);
    Covector lam(ctx);
    for (const auto& [mono, c] : p.terms()) lam.set(monomial_word(ctx->basis(), mono, w), c * Rational(mono.factorial()));
    return lam;
}

WordCombination to_words(const LieElement& x)
{
    WordCombination out;
    if (!x.context()) return out;
    for (const auto& t : x.terms()) out.emplace_back(x.context()->basis()[t.word].letters, t.coeff);
    return out;
}

Polynomial derive_in(unsigned rank, const WordCombination& x, const Polynomial& p, unsigned layer, unsigned step)
{
    if (rank < 2) throw DomainError("derivation action needs rank >= 2");
    if (p.is_constant() || x.empty()) return Polynomial();
    auto ctx = lie::context_for(rank, step, layer);
    const Covector lam = realize_polynomial(p, layer, ctx);
    LieElement xx(ctx.get());
    for (const auto& [letters, c] : x) {
        if (letters.size() > step) continue;
        if (auto idx = ctx->basis().find(letters)) xx += LieElement::basis(*ctx, *idx, c);
    }
    const LieElement y = LieElement::basis(*ctx, minimal_word(ctx->basis(), layer));
    return abnormal_polynomial(lie::bracket(xx, y), lam);
}

Polynomial derive(unsigned rank, const WordCombination& x, const Polynomial& p)
{
    const unsigned layer = std::max(2u, 1 + p.max_variable_degree());
    return derive_in(rank, x, p, layer, layer + p.degree());
}

Polynomial derive(const LieElement& x, const Polynomial& p)
{
    if (!x.context()) return Polynomial();
    return derive(x.context()->rank(), to_words(x), p);
}

Polynomial derive(unsigned rank, poly::Var w, const Polynomial& p)
{
    const auto& basis = poly::variable_basis(rank, w.degree);
    return derive(rank, WordCombination{{basis[w.index].letters, Rational(1)}}, p);
}

}  // namespace ablift::abn
