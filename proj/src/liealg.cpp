#include "ablift/liealg.hpp"

#include "ablift/errors.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

namespace ablift::lie {

namespace {

std::uint64_t key(Index u, Index v)
{
    return (static_cast<std::uint64_t>(u) << 32) | v;
}

void check_same(const LieElement& a, const LieElement& b)
{
    if (a.context() && b.context() && a.context() != b.context()) {
        throw ContextMismatch("Lie elements belong to different algebra contexts");
    }
}

const AlgebraContext* pick(const LieElement& a, const LieElement& b)
{
    return a.context() ? a.context() : b.context();
}

}  // namespace

LieElement LieElement::basis(const AlgebraContext& ctx, Index word, const Rational& coeff)
{
    LieElement e(&ctx);
    if (coeff != 0) e.terms_.push_back({word, coeff});
    return e;
}

Rational LieElement::coefficient(Index word) const
{
    auto it = std::lower_bound(terms_.begin(), terms_.end(), word,
                               [](const Term& t, Index w) { return t.word < w; });
    if (it != terms_.end() && it->word == word) return it->coeff;
    return 0;
}

unsigned LieElement::min_degree() const
{
    if (terms_.empty() || !ctx_) return 0;
    // Positions are degree sorted.
    return ctx_->degree(terms_.front().word);
}

unsigned LieElement::max_degree() const
{
    if (terms_.empty() || !ctx_) return 0;
    return ctx_->degree(terms_.back().word);
}

LieElement& LieElement::operator+=(const LieElement& other)
{
    check_same(*this, other);
    if (!ctx_) ctx_ = other.ctx_;
    std::vector<Term> merged;
    merged.reserve(terms_.size() + other.terms_.size());
    auto a = terms_.begin();
    auto b = other.terms_.begin();
    while (a != terms_.end() || b != other.terms_.end()) {
        if (b == other.terms_.end() || (a != terms_.end() && a->word < b->word)) {
            merged.push_back(std::move(*a++));
        } else if (a == terms_.end() || b->word < a->word) {
            merged.push_back(*b++);
        } else {
            Rational c = a->coeff + b->coeff;
            if (c != 0) merged.push_back({a->word, std::move(c)});
            ++a;
            ++b;
        }
    }
    terms_ = std::move(merged);
    return *this;
}

LieElement& LieElement::operator-=(const LieElement& other)
{
    return *this += -other;
}

LieElement& LieElement::operator*=(const Rational& scale)
{
    if (scale == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& t : terms_) t.coeff *= scale;
    return *this;
}

LieElement LieElement::operator-() const
{
    LieElement r = *this;
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
}

bool operator==(const LieElement& a, const LieElement& b)
{
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
        if (a.terms_[i].word != b.terms_[i].word || a.terms_[i].coeff != b.terms_[i].coeff) return false;
    }
    return true;
}

std::string LieElement::to_string() const
{
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& t : terms_) {
        Rational c = t.coeff;
        if (!first) out << (c < 0 ? " - " : " + ");
        else if (c < 0) out << "-";
        first = false;
        Rational a = abs(c);
        if (a != 1) out << ablift::to_string(a) << "*";
        out << "X[" << (ctx_ ? ctx_->basis().to_string(t.word) : std::to_string(t.word)) << "]";
    }
    return out.str();
}

void LieAccumulator::add(Index word, const Rational& coeff)
{
    if (coeff == 0) return;
    auto [it, inserted] = acc_.try_emplace(word, coeff);
    if (!inserted) it->second += coeff;
}

void LieAccumulator::add(const LieElement& element, const Rational& scale)
{
    if (scale == 0) return;
    for (const auto& t : element.terms()) {
        auto [it, inserted] = acc_.try_emplace(t.word);
        if (inserted) {
            it->second = t.coeff * scale;
        } else {
            it->second += t.coeff * scale;
        }
    }
}

LieElement LieAccumulator::finish()
{
    LieElement e(ctx_);
    e.terms_.reserve(acc_.size());
    for (auto& [w, c] : acc_) {
        if (c != 0) e.terms_.push_back({w, std::move(c)});
    }
    std::sort(e.terms_.begin(), e.terms_.end(), [](const Term& a, const Term& b) { return a.word < b.word; });
    acc_.clear();
    return e;
}

AlgebraContext::AlgebraContext(unsigned rank, unsigned step, unsigned quotient_layer, std::size_t cap)
    : basis_(rank, step, cap, quotient_layer), zero_(this)
{
}

const LieElement& AlgebraContext::bracket_basis(Index u, Index v) const
{
    if (u == v) return zero_;
    {
        std::shared_lock lock(mutex_);
        auto it = cache_.find(key(u, v));
        if (it != cache_.end()) return it->second;
    }
    LieElement value = compute_bracket(u, v, true);
    std::unique_lock lock(mutex_);
    auto [it, inserted] = cache_.try_emplace(key(u, v), std::move(value));
    return it->second;
}

LieElement AlgebraContext::bracket_basis_uncached(Index u, Index v) const
{
    if (u == v) return zero_;
    return compute_bracket(u, v, false);
}

LieElement AlgebraContext::compute_bracket(Index u, Index v, bool use_cache) const
{
    auto sub = [&](Index a, Index b) -> LieElement {
        if (use_cache) return bracket_basis(a, b);
        return bracket_basis_uncached(a, b);
    };
    if (u > v) return -sub(v, u);
    const unsigned du = basis_.degree(u);
    const unsigned dv = basis_.degree(v);
    if (du + dv > step()) return zero_;
    const unsigned m = quotient_layer();
    if (m > 0 && du >= m && dv >= m) return zero_;
    if (basis_.is_hall_pair(u, v)) {
        auto w = basis_.find_pair(u, v);
        if (!w) throw std::logic_error("Hall pair missing from basis");
        return LieElement::basis(*this, *w);
    }
    // u < v1 < v2: [u,[v1,v2]] = [[u,v1],v2] + [v1,[u,v2]]
    const Index v1 = basis_[v].left;
    const Index v2 = basis_[v].right;
    LieAccumulator acc(this);
    const LieElement inner_left = sub(u, v1);
    for (const auto& t : inner_left.terms()) acc.add(sub(t.word, v2), t.coeff);
    const LieElement inner_right = sub(u, v2);
    for (const auto& t : inner_right.terms()) acc.add(sub(v1, t.word), t.coeff);
    return acc.finish();
}

std::size_t AlgebraContext::cache_size() const
{
    std::shared_lock lock(mutex_);
    return cache_.size();
}

std::string AlgebraContext::dump_bracket_table(unsigned max_total_degree) const
{
    std::ostringstream out;
    for (Index u = 0; u < basis_.size(); ++u) {
        for (Index v = u + 1; v < basis_.size(); ++v) {
            if (basis_.degree(u) + basis_.degree(v) > max_total_degree) continue;
            const LieElement& b = bracket_basis(u, v);
            out << "[" << basis_.to_string(u) << ", " << basis_.to_string(v) << "] = " << b.to_string() << "\n";
        }
    }
    return out.str();
}

std::shared_ptr<const AlgebraContext> context_for(unsigned rank, unsigned step, unsigned quotient_layer)
{
    static std::mutex mutex;
    static std::map<std::tuple<unsigned, unsigned, unsigned>, std::shared_ptr<const AlgebraContext>> table;
    const auto k = std::make_tuple(rank, step, quotient_layer);
    {
        std::lock_guard lock(mutex);
        auto it = table.find(k);
        if (it != table.end()) return it->second;
    }
    auto ctx = std::make_shared<const AlgebraContext>(rank, step, quotient_layer);
    std::lock_guard lock(mutex);
    auto [it, inserted] = table.try_emplace(k, std::move(ctx));
    return it->second;
}

LieElement bracket(const LieElement& a, const LieElement& b)
{
    check_same(a, b);
    const AlgebraContext* ctx = pick(a, b);
    if (!ctx || a.is_zero() || b.is_zero()) return LieElement(ctx);
    LieAccumulator acc(ctx);
    for (const auto& x : a.terms()) {
        for (const auto& y : b.terms()) acc.add(ctx->bracket_basis(x.word, y.word), x.coeff * y.coeff);
    }
    return acc.finish();
}

LieElement ad(Index word, const LieElement& target)
{
    const AlgebraContext* ctx = target.context();
    if (!ctx || target.is_zero()) return LieElement(ctx);
    LieAccumulator acc(ctx);
    for (const auto& y : target.terms()) acc.add(ctx->bracket_basis(word, y.word), y.coeff);
    return acc.finish();
}

LieElement apply_ad_word(const std::vector<std::pair<Index, unsigned>>& exponents, const LieElement& target)
{
    LieElement x = target;
    for (auto it = exponents.rbegin(); it != exponents.rend(); ++it) {
        for (unsigned i = 0; i < it->second && !x.is_zero(); ++i) x = ad(it->first, x);
        if (x.is_zero()) break;
    }
    return x;
}

std::vector<Index> lower_central_term(const AlgebraContext& ctx, unsigned m)
{
    std::vector<Index> out;
    for (Index i = ctx.basis().degree_begin(m); i < ctx.basis().size(); ++i) out.push_back(i);
    return out;
}

LieElement transfer(const LieElement& x, const AlgebraContext& target)
{
    if (x.context() == &target) return x;
    LieAccumulator acc(&target);
    if (!x.context()) return acc.finish();
    const auto& from = x.context()->basis();
    for (const auto& t : x.terms()) {
        if (from.degree(t.word) > target.step()) continue;
        if (auto w = target.basis().find(from[t.word].letters)) acc.add(*w, t.coeff);
    }
    return acc.finish();
}

}  // namespace ablift::lie
