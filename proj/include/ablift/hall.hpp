#ifndef ABLIFT_HALL_HPP
#define ABLIFT_HALL_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ablift::hall {

using Index = std::uint32_t;
inline constexpr Index kNoChild = static_cast<Index>(-1);

/// One element of the deg-left-right Hall set. Children are positions in the
/// owning HallBasis; the word is the left-to-right leaf sequence (generators
/// numbered from 1).
struct HallWord {
    Index left = kNoChild;
    Index right = kNoChild;
    std::uint32_t degree = 1;
    std::u16string letters;

    bool is_generator() const { return degree == 1; }
};

/// All Hall words of degree <= max_degree over generators 1..rank, sorted in
/// deg-left-right order. Because the order is degree-first, the basis for
/// (r, s) is a prefix of the basis for (r, s + 1), so positions are stable
/// across steps of the same rank.
///
/// With quotient_layer = m > 0 only the words surviving in
/// F_{r,s} / [F^(m), F^(m)] are kept: a Hall tree lies in that ideal exactly
/// when both children of its root have degree >= m. Survivors of degree < 2m
/// keep the same positions as in the full basis.
class HallBasis {
public:
    static constexpr std::size_t kDefaultCap = 200000;

    HallBasis(unsigned rank, unsigned max_degree, std::size_t cap = kDefaultCap,
              unsigned quotient_layer = 0);

    unsigned rank() const { return rank_; }
    unsigned max_degree() const { return max_degree_; }
    unsigned quotient_layer() const { return quotient_layer_; }
    std::size_t size() const { return words_.size(); }

    const HallWord& operator[](Index i) const { return words_[i]; }
    const std::vector<HallWord>& words() const { return words_; }
    std::uint32_t degree(Index i) const { return words_[i].degree; }

    // Positions [begin, end) of the words of degree k (empty range if none).
    Index degree_begin(unsigned k) const;
    Index degree_end(unsigned k) const;

    Index generator(unsigned g) const;
    std::optional<Index> find(std::u16string_view letters) const;
    std::optional<Index> find_pair(Index left, Index right) const;

    std::string to_string(Index i) const;
    std::optional<Index> parse(std::string_view text) const;

    // True if the tree (left, right) satisfies the Hall conditions with respect
    // to this basis (both children already present).
    bool is_hall_pair(Index left, Index right) const;

private:
    unsigned rank_;
    unsigned max_degree_;
    unsigned quotient_layer_;
    std::vector<HallWord> words_;
    std::vector<Index> degree_start_;  // degree_start_[k] = first index of degree k
    std::unordered_map<std::u16string, Index> by_letters_;
    std::unordered_map<std::uint64_t, Index> by_pair_;
};

/// Full deg-left-right Hall basis up to degree s.
HallBasis enumerate_hall_words(unsigned rank, unsigned max_degree,
                               std::size_t cap = HallBasis::kDefaultCap);

/// Deg-left-right comparison of two words of the same basis, computed from the
/// tree structure (degree, then left subtree, then right subtree).
std::strong_ordering compare(const HallBasis& basis, Index a, Index b);

/// Left and right subtrees. Throws DomainError for generators.
std::pair<Index, Index> factorize(const HallBasis& basis, Index w);

struct AdFactorization {
    // Outermost factor first: w = (w_k)^{i_k} ... (w_1)^{i_1} core.
    std::vector<std::pair<Index, unsigned>> exponents;
    Index core = kNoChild;
};

/// Longest factorization of w as an iterated adjoint action on a core word.
AdFactorization ad_factorization(const HallBasis& basis, Index w);

/// "(2)^3(1)(12)" style rendering.
std::string format_ad_factorization(const HallBasis& basis, const AdFactorization& f);

/// Witt's necklace formula. Throws ResourceError when the value overflows 64 bits.
std::uint64_t layer_dimension(unsigned rank, unsigned degree);

std::string letters_to_string(std::u16string_view letters, unsigned rank);
std::optional<std::u16string> string_to_letters(std::string_view text, unsigned rank);

/// Ordered JSON array of word strings.
std::string dump_json(const HallBasis& basis);

}  // namespace ablift::hall

#endif  // ABLIFT_HALL_HPP
