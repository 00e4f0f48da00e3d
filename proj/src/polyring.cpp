#include "ablift/polyring.hpp"

#include "ablift/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <mutex>
#include <sstream>

namespace ablift::poly {

const hall::HallBasis& variable_basis(unsigned rank, unsigned min_degree)
{
    static std::mutex mutex;
    static std::map<unsigned, std::vector<std::unique_ptr<hall::HallBasis>>> registry;
    std::lock_guard lock(mutex);
    auto& chain = registry[rank];
    if (!chain.empty() && chain.back()->max_degree() >= min_degree) return *chain.back();
    const unsigned degree = std::max(min_degree, 1u);
    chain.push_back(std::make_unique<hall::HallBasis>(rank, degree));
    return *chain.back();
}

Var var_of(const hall::HallBasis& basis, Index index)
{
    const unsigned d = basis.degree(index);
    const unsigned m = basis.quotient_layer();
    if (m > 0 && d >= 2 * m) throw DomainError("word " + basis.to_string(index) + " is not a coordinate variable here");
    return Var{index, d};
}

// ---- Monomial ----

Monomial Monomial::of(Var v, std::uint32_t exp)
{
    Monomial m;
    if (exp == 0) return m;
    m.factors_.push_back({v, exp});
    m.weighted_degree_ = v.degree * exp;
    return m;
}

std::uint32_t Monomial::exponent(Var v) const
{
    for (const auto& f : factors_) {
        if (f.var.index == v.index) return f.exp;
    }
    return 0;
}

Monomial operator*(const Monomial& a, const Monomial& b)
{
    Monomial r;
    r.factors_.reserve(a.factors_.size() + b.factors_.size());
    auto i = a.factors_.begin();
    auto j = b.factors_.begin();
    while (i != a.factors_.end() || j != b.factors_.end()) {
        if (j == b.factors_.end() || (i != a.factors_.end() && i->var.index < j->var.index)) {
            r.factors_.push_back(*i++);
        } else if (i == a.factors_.end() || j->var.index < i->var.index) {
            r.factors_.push_back(*j++);
        } else {
            r.factors_.push_back({i->var, i->exp + j->exp});
            ++i;
            ++j;
        }
    }
    r.weighted_degree_ = a.weighted_degree_ + b.weighted_degree_;
    return r;
}

bool Monomial::divides(const Monomial& a) const
{
    for (const auto& f : factors_) {
        if (a.exponent(f.var) < f.exp) return false;
    }
    return true;
}

Monomial operator/(const Monomial& a, const Monomial& b)
{
    if (!b.divides(a)) throw DomainError("monomial does not divide");
    Monomial r;
    for (const auto& f : a.factors_) {
        const std::uint32_t e = f.exp - b.exponent(f.var);
        if (e > 0) {
            r.factors_.push_back({f.var, e});
            r.weighted_degree_ += e * f.var.degree;
        }
    }
    return r;
}

Integer Monomial::factorial() const
{
    Integer f = 1;
    for (const auto& p : factors_) f *= ablift::factorial(p.exp);
    return f;
}

bool operator==(const Monomial& a, const Monomial& b)
{
    if (a.weighted_degree_ != b.weighted_degree_ || a.factors_.size() != b.factors_.size()) return false;
    for (std::size_t i = 0; i < a.factors_.size(); ++i) {
        if (a.factors_[i].var.index != b.factors_[i].var.index || a.factors_[i].exp != b.factors_[i].exp) return false;
    }
    return true;
}

std::size_t Monomial::hash() const
{
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (const auto& f : factors_) {
        h ^= (static_cast<std::size_t>(f.var.index) * 0x100000001b3ull + f.exp) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
}

bool MonomialOrder::operator()(const Monomial& a, const Monomial& b) const
{
    if (a.weighted_degree() != b.weighted_degree()) return a.weighted_degree() > b.weighted_degree();
    const auto& fa = a.factors();
    const auto& fb = b.factors();
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < fa.size() && j < fb.size()) {
        if (fa[i].var.index != fb[j].var.index) return fa[i].var.index < fb[j].var.index;
        if (fa[i].exp != fb[j].exp) return fa[i].exp > fb[j].exp;
        ++i;
        ++j;
    }
    return i < fa.size() && j == fb.size();
}

// ---- Polynomial ----

Polynomial::Polynomial(const Rational& c)
{
    if (c != 0) terms_.emplace(Monomial(), c);
}

Polynomial Polynomial::variable(Var v)
{
    return term(Monomial::of(v), 1);
}

Polynomial Polynomial::term(const Monomial& m, const Rational& c)
{
    Polynomial p;
    p.add_term(m, c);
    return p;
}

bool Polynomial::is_constant() const
{
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Rational Polynomial::constant_term() const
{
    return coefficient(Monomial());
}

Rational Polynomial::coefficient(const Monomial& m) const
{
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

std::uint32_t Polynomial::degree() const
{
    return terms_.empty() ? 0 : terms_.begin()->first.weighted_degree();
}

std::vector<Var> Polynomial::variables() const
{
    std::vector<Var> vars;
    for (const auto& [m, c] : terms_) {
        for (const auto& f : m.factors()) vars.push_back(f.var);
    }
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    return vars;
}

std::uint32_t Polynomial::max_variable_degree() const
{
    std::uint32_t d = 0;
    for (const auto& [m, c] : terms_) {
        for (const auto& f : m.factors()) d = std::max(d, f.var.degree);
    }
    return d;
}

void Polynomial::add_term(const Monomial& m, const Rational& c)
{
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Polynomial& Polynomial::operator+=(const Polynomial& o)
{
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o)
{
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c)
{
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_) v *= c;
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b)
{
    Polynomial r;
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
    }
    return r;
}

Polynomial Polynomial::operator-() const
{
    Polynomial r = *this;
    for (auto& [m, v] : r.terms_) v = -v;
    return r;
}

bool operator==(const Polynomial& a, const Polynomial& b)
{
    return a.terms_ == b.terms_;
}

Polynomial pow(const Polynomial& p, unsigned e)
{
    Polynomial result = 1;
    Polynomial base = p;
    while (e > 0) {
        if (e & 1u) result = result * base;
        e >>= 1u;
        if (e > 0) base = base * base;
    }
    return result;
}

Polynomial partial_derivative(const Polynomial& p, Var v)
{
    Polynomial r;
    const Monomial dv = Monomial::of(v);
    for (const auto& [m, c] : p.terms()) {
        const std::uint32_t e = m.exponent(v);
        if (e == 0) continue;
        r.add_term(m / dv, c * e);
    }
    return r;
}

Polynomial integrate(const Polynomial& p, Var v)
{
    Polynomial r;
    const Monomial dv = Monomial::of(v);
    for (const auto& [m, c] : p.terms()) {
        const std::uint32_t e = m.exponent(v);
        r.add_term(m * dv, c / (e + 1));
    }
    return r;
}

Polynomial substitute(const Polynomial& p, const std::vector<std::pair<Var, Polynomial>>& values)
{
    std::map<std::pair<Index, std::uint32_t>, Polynomial> powers;
    auto power_of = [&](Var v, std::uint32_t e) -> const Polynomial& {
        auto key = std::make_pair(v.index, e);
        auto it = powers.find(key);
        if (it != powers.end()) return it->second;
        Polynomial base = Polynomial::variable(v);
        for (const auto& [w, q] : values) {
            if (w == v) base = q;
        }
        return powers.emplace(key, pow(base, e)).first->second;
    };
    Polynomial r;
    for (const auto& [m, c] : p.terms()) {
        Polynomial t = c;
        for (const auto& f : m.factors()) t = t * power_of(f.var, f.exp);
        r += t;
    }
    return r;
}

double evaluate(const Polynomial& p, const std::function<double(Var)>& value)
{
    double total = 0;
    for (const auto& [m, c] : p.terms()) {
        double t = c.get_d();
        for (const auto& f : m.factors()) t *= std::pow(value(f.var), static_cast<double>(f.exp));
        total += t;
    }
    return total;
}

Polynomial staircase_antiderivative(const std::vector<std::pair<Var, Polynomial>>& gradient)
{
    std::vector<std::pair<Var, Polynomial>> g = gradient;
    std::sort(g.begin(), g.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        if (g[i].first == g[i + 1].first) throw DomainError("duplicate variable in gradient");
    }
    auto listed = [&](Var v) {
        return std::any_of(g.begin(), g.end(), [&](const auto& e) { return e.first == v; });
    };
    for (const auto& [v, gv] : g) {
        for (Var u : gv.variables()) {
            if (!listed(u)) {
                throw InexactError("gradient component for index " + std::to_string(v.index) +
                                   " depends on unlisted variable index " + std::to_string(u.index));
            }
        }
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = i + 1; j < g.size(); ++j) {
            if (partial_derivative(g[i].second, g[j].first) != partial_derivative(g[j].second, g[i].first)) {
                throw InexactError("mixed partials disagree for variable indices " + std::to_string(g[i].first.index) +
                                   " and " + std::to_string(g[j].first.index));
            }
        }
    }
    Polynomial q;
    for (auto it = g.rbegin(); it != g.rend(); ++it) {
        Polynomial rest = it->second - partial_derivative(q, it->first);
        q += integrate(rest, it->first);
    }
    for (const auto& [v, gv] : g) {
        if (partial_derivative(q, v) != gv) throw InexactError("staircase integration failed to reproduce gradient");
    }
    return q;
}

std::vector<Monomial> enumerate_monomials(const std::vector<Var>& variables, std::uint32_t max_degree, std::size_t cap)
{
    std::vector<Var> vars = variables;
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    std::vector<Monomial> out;
    std::function<void(std::size_t, const Monomial&)> rec = [&](std::size_t k, const Monomial& cur) {
        if (k == vars.size()) {
            if (out.size() >= cap) throw ResourceError("monomial enumeration exceeds cap of " + std::to_string(cap));
            out.push_back(cur);
            return;
        }
        Monomial m = cur;
        while (true) {
            rec(k + 1, m);
            if (m.weighted_degree() + vars[k].degree > max_degree) break;
            m = m * Monomial::of(vars[k]);
        }
    };
    rec(0, Monomial());
    std::sort(out.begin(), out.end(), [](const Monomial& a, const Monomial& b) {
        if (a.weighted_degree() != b.weighted_degree()) return a.weighted_degree() < b.weighted_degree();
        return MonomialOrder()(b, a);
    });
    return out;
}

std::vector<Integer> poincare_coefficients(unsigned rank, unsigned m, std::size_t K)
{
    if (m < 2) throw DomainError("poincare_coefficients needs m >= 2");
    std::vector<Integer> n(K + 1, 0);
    n[0] = 1;
    for (unsigned k = 1; k < m; ++k) {
        const std::uint64_t dim = hall::layer_dimension(rank, k);
        for (std::uint64_t rep = 0; rep < dim; ++rep) {
            for (std::size_t i = k; i <= K; ++i) n[i] += n[i - k];
        }
    }
    return n;
}

// ---- printing ----

std::string to_string(const Monomial& m, unsigned rank)
{
    if (m.is_one()) return "1";
    const auto& basis = variable_basis(rank, 1);
    std::string out;
    for (const auto& f : m.factors()) {
        if (!out.empty()) out += "*";
        const auto& b = f.var.index < basis.size() ? basis : variable_basis(rank, f.var.degree);
        out += "x[" + b.to_string(f.var.index) + "]";
        if (f.exp > 1) out += "^" + std::to_string(f.exp);
    }
    return out;
}

std::string to_string(const Polynomial& p, unsigned rank)
{
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
        const bool neg = c < 0;
        if (first) {
            if (neg) out += "-";
        } else {
            out += neg ? " - " : " + ";
        }
        first = false;
        const Rational a = abs(c);
        if (m.is_one()) {
            out += ablift::to_string(a);
        } else {
            if (a != 1) out += ablift::to_string(a) + "*";
            out += to_string(m, rank);
        }
    }
    return out;
}

// ---- parsing ----

namespace {

class Parser {
public:
    Parser(std::string_view text, unsigned rank) : text_(text), rank_(rank) {}

    Polynomial parse()
    {
        Polynomial p = expr();
        skip();
        if (pos_ != text_.size()) fail("unexpected character");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& what) const
    {
        throw ParseError(what + " at position " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
    }

    void skip()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c)
    {
        skip();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Polynomial expr()
    {
        Polynomial p;
        bool neg = false;
        if (accept('-')) neg = true;
        else accept('+');
        p = term();
        if (neg) p = -p;
        while (true) {
            if (accept('+')) p += term();
            else if (accept('-')) p -= term();
            else break;
        }
        return p;
    }

    Polynomial term()
    {
        Polynomial p = factor();
        while (true) {
            if (accept('*')) {
                p = p * factor();
            } else if (accept('/')) {
                Polynomial d = factor();
                if (!d.is_constant() || d.is_zero()) fail("division by a non-constant or zero");
                p *= Rational(1) / d.constant_term();
            } else {
                break;
            }
        }
        return p;
    }

    Polynomial factor()
    {
        Polynomial base = primary();
        if (accept('^')) {
            skip();
            const std::string digits = read_digits();
            if (digits.empty()) fail("expected exponent");
            if (digits.size() > 4) fail("exponent too large");
            base = pow(base, static_cast<unsigned>(std::stoul(digits)));
        }
        return base;
    }

    std::string read_digits()
    {
        std::string d;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) d += text_[pos_++];
        return d;
    }

    Polynomial primary()
    {
        skip();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Polynomial p = expr();
            if (!accept(')')) fail("expected ')'");
            return p;
        }
        if (c == '-') {
            ++pos_;
            return -factor();
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Integer n(read_digits());
            return Polynomial(Rational(n));
        }
        if (c == 'x') {
            ++pos_;
            if (pos_ < text_.size() && text_[pos_] == '[') {
                ++pos_;
                const std::size_t close = text_.find(']', pos_);
                if (close == std::string_view::npos) fail("expected ']'");
                const std::string_view word = text_.substr(pos_, close - pos_);
                auto letters = hall::string_to_letters(word, rank_);
                if (!letters) fail("bad Hall word '" + std::string(word) + "'");
                const auto& basis = variable_basis(rank_, static_cast<unsigned>(letters->size()));
                auto idx = basis.find(*letters);
                if (!idx) fail("'" + std::string(word) + "' is not a Hall word");
                pos_ = close + 1;
                return Polynomial::variable(var_of(basis, *idx));
            }
            const std::string digits = read_digits();
            if (digits.empty() || digits.size() > 5) fail("expected generator number after 'x'");
            const unsigned g = static_cast<unsigned>(std::stoul(digits));
            if (g == 0 || g > rank_) fail("generator x" + digits + " outside rank " + std::to_string(rank_));
            return Polynomial::variable(generator_var(g));
        }
        fail(std::string("unexpected '") + c + "'");
    }

    std::string_view text_;
    unsigned rank_;
    std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text, unsigned rank)
{
    if (rank == 0) throw DomainError("rank must be >= 1");
    return Parser(text, rank).parse();
}

}  // namespace ablift::poly
