#ifndef ABLIFT_ABNORMAL_HPP
#define ABLIFT_ABNORMAL_HPP

#include "ablift/liealg.hpp"
#include "ablift/polyring.hpp"
#include "ablift/rational.hpp"

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace ablift::abn {

using hall::Index;
using lie::AlgebraContext;
using lie::LieElement;
using poly::Monomial;
using poly::Polynomial;

/// lambda_w = lambda(X_w) on the Hall basis of one context.
class Covector {
public:
    explicit Covector(std::shared_ptr<const AlgebraContext> ctx);

    const AlgebraContext& context() const { return *ctx_; }
    std::shared_ptr<const AlgebraContext> context_ptr() const { return ctx_; }
    const std::map<Index, Rational>& components() const { return components_; }
    bool is_zero() const { return components_.empty(); }

    void set(Index word, const Rational& value);
    Rational get(Index word) const;
    Rational apply(const LieElement& x) const;

private:
    std::shared_ptr<const AlgebraContext> ctx_;
    std::map<Index, Rational> components_;
};

nlohmann::json covector_to_json(const Covector& lam);
Covector covector_from_json(const nlohmann::json& j);

struct ExpansionTerm {
    Monomial monomial;
    LieElement value;  // ad_{x_n}^{i_n} ... ad_{x_1}^{i_1} Z / I!
};

/// Every nonzero term of the coordinate expansion of Ad_g Z, indexed by the
/// monomial x^I. Variables are applied in non-decreasing Hall order and a
/// branch stops as soon as the bracket vanishes. When every term of the
/// running bracket lies in g^(m) of a quotient context, only variables of
/// degree < m are tried.
std::vector<ExpansionTerm> adjoint_expansion(const LieElement& z);

Polynomial abnormal_polynomial(const LieElement& z, const Covector& lam);

/// Position of the word 1^{m-1}2 (that is, ad_{X_1}^{m-1} X_2).
Index minimal_word(const hall::HallBasis& basis, unsigned m);

/// Word v(I)w obtained by pairing the variables of I (smallest first) onto w.
Index monomial_word(const hall::HallBasis& basis, const Monomial& mono, Index w);

/// Covector with abnormal_polynomial(X_w, lambda) = p for w = 1^{m-1}2.
Covector realize_polynomial(const Polynomial& p, unsigned m, std::shared_ptr<const AlgebraContext> ctx);

/// A Lie element given context-free, as Hall words (letter strings) with coefficients.
using WordCombination = std::vector<std::pair<std::u16string, Rational>>;

WordCombination to_words(const LieElement& x);

/// Left-invariant derivative X P in adapted coordinates, through
/// X P^{Y}_lambda = P^{[X,Y]}_lambda in the smallest quotient that carries p.
Polynomial derive(const LieElement& x, const Polynomial& p);
Polynomial derive(unsigned rank, const WordCombination& x, const Polynomial& p);
/// Derivative by the basis field of a variable's Hall word.
Polynomial derive(unsigned rank, poly::Var w, const Polynomial& p);
/// Same computation in an explicitly chosen context (rank, step, layer).
Polynomial derive_in(unsigned rank, const WordCombination& x, const Polynomial& p, unsigned layer, unsigned step);

}  // namespace ablift::abn

#endif  // ABLIFT_ABNORMAL_HPP
