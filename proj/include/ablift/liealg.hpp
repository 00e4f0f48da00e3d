#ifndef ABLIFT_LIEALG_HPP
#define ABLIFT_LIEALG_HPP

#include "ablift/hall.hpp"
#include "ablift/rational.hpp"

#include <cstddef>
#include <memory>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ablift::lie {

using hall::Index;

class AlgebraContext;

struct Term {
    Index word;
    Rational coeff;
};

/// Sparse rational combination of Hall basis elements of one context.
/// Terms are sorted by basis position and never hold a zero coefficient.
class LieElement {
public:
    LieElement() = default;
    explicit LieElement(const AlgebraContext* ctx) : ctx_(ctx) {}

    static LieElement basis(const AlgebraContext& ctx, Index word, const Rational& coeff = 1);

    const AlgebraContext* context() const { return ctx_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    Rational coefficient(Index word) const;

    // Smallest / largest degree present; 0 for the zero element.
    unsigned min_degree() const;
    unsigned max_degree() const;
    bool is_homogeneous() const { return min_degree() == max_degree(); }

    LieElement& operator+=(const LieElement& other);
    LieElement& operator-=(const LieElement& other);
    LieElement& operator*=(const Rational& scale);
    friend LieElement operator+(LieElement a, const LieElement& b) { return a += b; }
    friend LieElement operator-(LieElement a, const LieElement& b) { return a -= b; }
    friend LieElement operator*(const Rational& s, LieElement a) { return a *= s; }
    LieElement operator-() const;
    friend bool operator==(const LieElement& a, const LieElement& b);

    std::string to_string() const;

private:
    friend class LieAccumulator;
    const AlgebraContext* ctx_ = nullptr;
    std::vector<Term> terms_;
};

/// Scratch space for summing many scaled basis elements.
class LieAccumulator {
public:
    explicit LieAccumulator(const AlgebraContext* ctx) : ctx_(ctx) {}
    void add(Index word, const Rational& coeff);
    void add(const LieElement& element, const Rational& scale);
    LieElement finish();

private:
    const AlgebraContext* ctx_;
    std::unordered_map<Index, Rational> acc_;
};

/// F_{r,s}, or F_{r,s} / [F^(m), F^(m)] when quotient_layer = m > 0.
/// Brackets of basis pairs are memoized in a table that tolerates concurrent
/// readers and racing (idempotent) inserts.
class AlgebraContext {
public:
    AlgebraContext(unsigned rank, unsigned step, unsigned quotient_layer = 0,
                   std::size_t cap = hall::HallBasis::kDefaultCap);
    AlgebraContext(const AlgebraContext&) = delete;
    AlgebraContext& operator=(const AlgebraContext&) = delete;

    unsigned rank() const { return basis_.rank(); }
    unsigned step() const { return basis_.max_degree(); }
    unsigned quotient_layer() const { return basis_.quotient_layer(); }
    const hall::HallBasis& basis() const { return basis_; }
    unsigned degree(Index w) const { return basis_.degree(w); }

    // [X_u, X_v] in the Hall basis (memoized).
    const LieElement& bracket_basis(Index u, Index v) const;
    // Same value recomputed by rewriting without consulting the memo table.
    LieElement bracket_basis_uncached(Index u, Index v) const;

    std::size_t cache_size() const;
    // Text dump of every basis-pair bracket up to the given total degree.
    std::string dump_bracket_table(unsigned max_total_degree) const;

    bool same_as(const AlgebraContext& other) const { return this == &other; }

private:
    LieElement compute_bracket(Index u, Index v, bool use_cache) const;

    hall::HallBasis basis_;
    LieElement zero_;
    mutable std::shared_mutex mutex_;
    mutable std::unordered_map<std::uint64_t, LieElement> cache_;
};

/// Shared, lazily built contexts keyed by (rank, step, quotient_layer).
std::shared_ptr<const AlgebraContext> context_for(unsigned rank, unsigned step, unsigned quotient_layer = 0);

LieElement bracket(const LieElement& a, const LieElement& b);

// ad_{X_word}(target)
LieElement ad(Index word, const LieElement& target);

/// ad_{w_k}^{i_k} ... ad_{w_1}^{i_1} target, with the list written outermost
/// first (so it is applied from the back).
LieElement apply_ad_word(const std::vector<std::pair<Index, unsigned>>& exponents, const LieElement& target);

/// Basis words of degree >= m surviving in the context (a spanning set of g^(m)).
std::vector<Index> lower_central_term(const AlgebraContext& ctx, unsigned m);

/// Re-express an element of one context in another by matching Hall words;
/// words absent from the target (degree overflow or quotiented) are dropped.
LieElement transfer(const LieElement& x, const AlgebraContext& target);

}  // namespace ablift::lie

#endif  // ABLIFT_LIEALG_HPP
