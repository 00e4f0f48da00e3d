#ifndef ABLIFT_POLYRING_HPP
#define ABLIFT_POLYRING_HPP

#include "ablift/hall.hpp"
#include "ablift/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ablift::poly {

using hall::Index;

/// A coordinate x_w. The index is the position of w in the full Hall basis of
/// the ambient rank; quotient contexts keep those positions for every word that
/// can occur as a variable, so indices are comparable across contexts.
struct Var {
    Index index = 0;
    std::uint32_t degree = 1;

    friend bool operator==(const Var& a, const Var& b) { return a.index == b.index; }
    friend auto operator<=>(const Var& a, const Var& b) { return a.index <=> b.index; }
};

/// Full Hall basis of the given rank holding at least every word of degree
/// <= min_degree. Grows on demand; returned references stay valid.
const hall::HallBasis& variable_basis(unsigned rank, unsigned min_degree);

/// Variable for the Hall word at position `index` of `basis` (any context of
/// the same rank, as long as the word has degree < 2 * quotient layer).
Var var_of(const hall::HallBasis& basis, Index index);
/// Variable for generator g (1-based).
inline Var generator_var(unsigned g) { return Var{static_cast<Index>(g - 1), 1}; }

struct VarPower {
    Var var;
    std::uint32_t exp;
};

class Monomial {
public:
    Monomial() = default;
    static Monomial of(Var v, std::uint32_t exp = 1);

    const std::vector<VarPower>& factors() const { return factors_; }
    std::uint32_t weighted_degree() const { return weighted_degree_; }
    std::uint32_t exponent(Var v) const;
    bool is_one() const { return factors_.empty(); }

    friend Monomial operator*(const Monomial& a, const Monomial& b);
    // a / b if b divides a.
    bool divides(const Monomial& a) const;
    friend Monomial operator/(const Monomial& a, const Monomial& b);

    // Product of exponent factorials.
    Integer factorial() const;

    friend bool operator==(const Monomial& a, const Monomial& b);
    std::size_t hash() const;

private:
    std::vector<VarPower> factors_;  // sorted by variable index, exponents > 0
    std::uint32_t weighted_degree_ = 0;
};

/// Printing order: higher weighted degree first, then lexicographically
/// larger exponent vector (variables in Hall order) first.
struct MonomialOrder {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

class Polynomial {
public:
    using TermMap = std::map<Monomial, Rational, MonomialOrder>;

    Polynomial() = default;
    Polynomial(const Rational& c);  // NOLINT: implicit constants
    Polynomial(int c) : Polynomial(Rational(c)) {}  // NOLINT
    static Polynomial variable(Var v);
    static Polynomial term(const Monomial& m, const Rational& c);

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rational constant_term() const;
    Rational coefficient(const Monomial& m) const;
    std::size_t size() const { return terms_.size(); }
    // Weighted degree; 0 for the zero polynomial.
    std::uint32_t degree() const;
    std::vector<Var> variables() const;
    std::uint32_t max_variable_degree() const;

    void add_term(const Monomial& m, const Rational& c);

    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(const Rational& c);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
    Polynomial operator-() const;
    friend bool operator==(const Polynomial& a, const Polynomial& b);

private:
    TermMap terms_;
};

Polynomial pow(const Polynomial& p, unsigned e);

Polynomial partial_derivative(const Polynomial& p, Var v);

/// Antiderivative in v with no v-free terms (zero constant of integration).
Polynomial integrate(const Polynomial& p, Var v);

/// Simultaneous substitution of polynomials for variables; unlisted variables stay.
Polynomial substitute(const Polynomial& p, const std::vector<std::pair<Var, Polynomial>>& values);

/// Floating-point evaluation; values are looked up by variable index.
double evaluate(const Polynomial& p, const std::function<double(Var)>& value);

/// Q with dQ/dw_k = G_k for every listed variable and Q(0) = 0. Integrates from
/// the highest variable down. Throws InexactError naming the first
/// incompatible pair.
Polynomial staircase_antiderivative(const std::vector<std::pair<Var, Polynomial>>& gradient);

/// All monomials of weighted degree <= max_degree, ascending degree then
/// ascending exponent order. Throws ResourceError beyond cap.
std::vector<Monomial> enumerate_monomials(const std::vector<Var>& variables, std::uint32_t max_degree,
                                          std::size_t cap = 20'000'000);

/// Coefficients N_0..N_K of prod_{k<m} (1 - t^k)^{-dim F(k)}.
std::vector<Integer> poincare_coefficients(unsigned rank, unsigned m, std::size_t K);

std::string to_string(const Monomial& m, unsigned rank);
std::string to_string(const Polynomial& p, unsigned rank);

/// Grammar: sums/differences of products/powers of rational literals,
/// variables and parenthesized expressions. Variables are `xN` (generator N)
/// or `x[w]` (Hall word w of the given rank).
Polynomial parse_polynomial(std::string_view text, unsigned rank);

}  // namespace ablift::poly

#endif  // ABLIFT_POLYRING_HPP
