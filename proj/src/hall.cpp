#include "ablift/hall.hpp"

#include "ablift/errors.hpp"
#include "ablift/rational.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace ablift::hall {

namespace {

std::uint64_t pair_key(Index left, Index right)
{
    return (static_cast<std::uint64_t>(left) << 32) | right;
}

int mobius(unsigned n)
{
    int result = 1;
    for (unsigned p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) return 0;
            result = -result;
        }
    }
    if (n > 1) result = -result;
    return result;
}

}  // namespace

HallBasis::HallBasis(unsigned rank, unsigned max_degree, std::size_t cap, unsigned quotient_layer)
    : rank_(rank), max_degree_(max_degree), quotient_layer_(quotient_layer)
{
    if (rank == 0) throw DomainError("Hall basis needs rank >= 1");
    if (max_degree == 0) throw DomainError("Hall basis needs max degree >= 1");
    if (rank > 0xFFFF) throw DomainError("rank too large");

    degree_start_.assign(max_degree + 2, 0);
    degree_start_[1] = 0;
    for (unsigned g = 1; g <= rank; ++g) {
        HallWord w;
        w.letters.push_back(static_cast<char16_t>(g));
        words_.push_back(std::move(w));
    }
    if (words_.size() > cap) throw ResourceError("Hall basis exceeds cap of " + std::to_string(cap) + " words");

    const unsigned m = quotient_layer_;
    for (unsigned n = 2; n <= max_degree; ++n) {
        degree_start_[n] = static_cast<Index>(words_.size());
        std::vector<std::pair<Index, Index>> candidates;
        for (unsigned d1 = 1; d1 <= n / 2; ++d1) {
            const unsigned d2 = n - d1;
            if (m > 0 && d1 >= m && d2 >= m) continue;
            for (Index h1 = degree_start_[d1]; h1 < degree_start_[d1 + 1]; ++h1) {
                for (Index h2 = degree_start_[d2]; h2 < degree_start_[d2 + 1]; ++h2) {
                    if (h1 >= h2) continue;
                    const HallWord& right = words_[h2];
                    if (!right.is_generator() && right.left > h1) continue;
                    candidates.emplace_back(h1, h2);
                }
            }
        }
        std::sort(candidates.begin(), candidates.end());
        if (words_.size() + candidates.size() > cap) {
            throw ResourceError("Hall basis (rank " + std::to_string(rank) + ", degree " +
                                std::to_string(max_degree) + ") exceeds cap of " + std::to_string(cap) +
                                " words");
        }
        for (auto [h1, h2] : candidates) {
            HallWord w;
            w.left = h1;
            w.right = h2;
            w.degree = n;
            w.letters = words_[h1].letters + words_[h2].letters;
            words_.push_back(std::move(w));
        }
    }
    degree_start_[max_degree + 1] = static_cast<Index>(words_.size());

    by_letters_.reserve(words_.size());
    by_pair_.reserve(words_.size());
    for (Index i = 0; i < words_.size(); ++i) {
        by_letters_.emplace(words_[i].letters, i);
        if (!words_[i].is_generator()) by_pair_.emplace(pair_key(words_[i].left, words_[i].right), i);
    }
}

Index HallBasis::degree_begin(unsigned k) const
{
    if (k == 0) return 0;
    if (k > max_degree_) return static_cast<Index>(words_.size());
    return degree_start_[k];
}

Index HallBasis::degree_end(unsigned k) const
{
    if (k == 0) return 0;
    if (k > max_degree_) return static_cast<Index>(words_.size());
    return degree_start_[k + 1];
}

Index HallBasis::generator(unsigned g) const
{
    if (g == 0 || g > rank_) throw DomainError("generator index out of range");
    return g - 1;
}

std::optional<Index> HallBasis::find(std::u16string_view letters) const
{
    auto it = by_letters_.find(std::u16string(letters));
    if (it == by_letters_.end()) return std::nullopt;
    return it->second;
}

std::optional<Index> HallBasis::find_pair(Index left, Index right) const
{
    auto it = by_pair_.find(pair_key(left, right));
    if (it == by_pair_.end()) return std::nullopt;
    return it->second;
}

bool HallBasis::is_hall_pair(Index left, Index right) const
{
    if (left >= right) return false;
    const HallWord& r = words_[right];
    return r.is_generator() || r.left <= left;
}

std::string HallBasis::to_string(Index i) const
{
    return letters_to_string(words_[i].letters, rank_);
}

std::optional<Index> HallBasis::parse(std::string_view text) const
{
    auto letters = string_to_letters(text, rank_);
    if (!letters) return std::nullopt;
    return find(*letters);
}

HallBasis enumerate_hall_words(unsigned rank, unsigned max_degree, std::size_t cap)
{
    return HallBasis(rank, max_degree, cap);
}

std::strong_ordering compare(const HallBasis& basis, Index a, Index b)
{
    if (a == b) return std::strong_ordering::equal;
    const HallWord& x = basis[a];
    const HallWord& y = basis[b];
    if (x.degree != y.degree) return x.degree <=> y.degree;
    if (x.is_generator()) return x.letters[0] <=> y.letters[0];
    if (auto c = compare(basis, x.left, y.left); c != 0) return c;
    return compare(basis, x.right, y.right);
}

std::pair<Index, Index> factorize(const HallBasis& basis, Index w)
{
    const HallWord& h = basis[w];
    if (h.is_generator()) throw DomainError("cannot factorize a degree-1 Hall word");
    return {h.left, h.right};
}

AdFactorization ad_factorization(const HallBasis& basis, Index w)
{
    const HallWord& h = basis[w];
    if (h.is_generator()) throw DomainError("cannot factorize a degree-1 Hall word");
    // Peel left children off the right spine while the outermost peeled word
    // stays strictly below the remaining core.
    const Index outer = h.left;
    std::vector<Index> peeled{outer};
    Index core = h.right;
    while (!basis[core].is_generator() && outer < basis[core].right) {
        peeled.push_back(basis[core].left);
        core = basis[core].right;
    }
    AdFactorization f;
    f.core = core;
    for (Index p : peeled) {
        if (!f.exponents.empty() && f.exponents.back().first == p) {
            ++f.exponents.back().second;
        } else {
            f.exponents.emplace_back(p, 1u);
        }
    }
    return f;
}

std::string format_ad_factorization(const HallBasis& basis, const AdFactorization& f)
{
    std::string out;
    for (auto [word, power] : f.exponents) {
        out += "(" + basis.to_string(word) + ")";
        if (power > 1) out += "^" + std::to_string(power);
    }
    out += "(" + basis.to_string(f.core) + ")";
    return out;
}

std::uint64_t layer_dimension(unsigned rank, unsigned degree)
{
    if (rank == 0 || degree == 0) throw DomainError("layer_dimension needs rank, degree >= 1");
    mpz_class total = 0;
    for (unsigned d = 1; d <= degree; ++d) {
        if (degree % d != 0) continue;
        int mu = mobius(d);
        if (mu == 0) continue;
        mpz_class power;
        mpz_ui_pow_ui(power.get_mpz_t(), rank, degree / d);
        total += mu * power;
    }
    total /= degree;
    if (!total.fits_ulong_p()) throw ResourceError("layer dimension overflows 64 bits");
    return total.get_ui();
}

std::string letters_to_string(std::u16string_view letters, unsigned rank)
{
    std::string out;
    for (std::size_t i = 0; i < letters.size(); ++i) {
        if (rank >= 10 && i > 0) out += '.';
        out += std::to_string(static_cast<unsigned>(letters[i]));
    }
    return out;
}

std::optional<std::u16string> string_to_letters(std::string_view text, unsigned rank)
{
    std::u16string letters;
    if (text.empty()) return std::nullopt;
    if (rank <= 9) {
        for (char c : text) {
            if (c < '1' || c > '9') return std::nullopt;
            unsigned g = static_cast<unsigned>(c - '0');
            if (g > rank) return std::nullopt;
            letters.push_back(static_cast<char16_t>(g));
        }
        return letters;
    }
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t dot = text.find('.', pos);
        if (dot == std::string_view::npos) dot = text.size();
        std::string_view part = text.substr(pos, dot - pos);
        if (part.empty() || part.size() > 5) return std::nullopt;
        unsigned g = 0;
        for (char c : part) {
            if (c < '0' || c > '9') return std::nullopt;
            g = g * 10 + static_cast<unsigned>(c - '0');
        }
        if (g == 0 || g > rank) return std::nullopt;
        letters.push_back(static_cast<char16_t>(g));
        pos = dot + 1;
    }
    return letters;
}

std::string dump_json(const HallBasis& basis)
{
    nlohmann::json arr = nlohmann::json::array();
    for (Index i = 0; i < basis.size(); ++i) arr.push_back(basis.to_string(i));
    return arr.dump();
}

}  // namespace ablift::hall
