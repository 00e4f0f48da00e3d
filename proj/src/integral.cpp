#include "ablift/integral.hpp"

#include "ablift/abnormal.hpp"
#include "ablift/errors.hpp"

#include <algorithm>

namespace ablift::integral {

using poly::Var;

PolynomialODE::PolynomialODE(unsigned r, std::vector<Polynomial> comps) : rank(r), components(std::move(comps))
{
    if (rank == 0) throw DomainError("ODE rank must be >= 1");
    if (components.size() != rank) throw DomainError("ODE needs exactly one component per coordinate");
    for (const auto& p : components) {
        for (Var v : p.variables()) {
            if (v.degree != 1 || v.index >= rank) throw DomainError("ODE components may only use x1..x" + std::to_string(rank));
        }
    }
}

unsigned PolynomialODE::degree_bound() const
{
    unsigned d = 0;
    for (const auto& p : components) d = std::max(d, p.degree());
    return d;
}

bool PolynomialODE::is_zero() const
{
    return std::all_of(components.begin(), components.end(), [](const Polynomial& p) { return p.is_zero(); });
}

std::string PolynomialODE::to_string() const
{
    std::string out;
    for (std::size_t i = 0; i < components.size(); ++i) {
        if (i > 0) out += "; ";
        out += poly::to_string(components[i], rank);
    }
    return out;
}

namespace {

std::vector<std::string> split(std::string_view text, char sep)
{
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = text.find(sep, pos);
        parts.emplace_back(text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return parts;
}

}  // namespace

PolynomialODE parse_ode(std::string_view text)
{
    const auto parts = split(text, ';');
    const unsigned rank = static_cast<unsigned>(parts.size());
    std::vector<Polynomial> comps;
    for (const auto& part : parts) comps.push_back(poly::parse_polynomial(part, rank));
    try {
        return PolynomialODE(rank, std::move(comps));
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    }
}

nlohmann::json ode_to_json(const PolynomialODE& ode)
{
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& p : ode.components) comps.push_back(poly::to_string(p, ode.rank));
    return {{"rank", ode.rank}, {"components", comps}};
}

PolynomialODE ode_from_json(const nlohmann::json& j, std::vector<Rational>* initial_point)
{
    try {
        const unsigned rank = j.at("rank").get<unsigned>();
        std::vector<Polynomial> comps;
        for (const auto& c : j.at("components")) comps.push_back(poly::parse_polynomial(c.get<std::string>(), rank));
        if (initial_point) {
            initial_point->clear();
            if (j.contains("initial_point")) {
                for (const auto& x : j.at("initial_point")) initial_point->push_back(parse_rational(x.get<std::string>()));
            }
        }
        return PolynomialODE(rank, std::move(comps));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed ODE JSON: ") + e.what());
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    }
}

PolynomialODE translate_ode(const PolynomialODE& ode, const std::vector<Rational>& point)
{
    if (point.size() != ode.rank) throw DomainError("initial point needs one coordinate per ODE component");
    std::vector<std::pair<Var, Polynomial>> shift;
    for (unsigned i = 0; i < ode.rank; ++i) {
        const Var v = poly::generator_var(i + 1);
        shift.emplace_back(v, Polynomial::variable(v) + Polynomial(point[i]));
    }
    std::vector<Polynomial> comps;
    for (const auto& p : ode.components) comps.push_back(poly::substitute(p, shift));
    return PolynomialODE(ode.rank, std::move(comps));
}

std::vector<Polynomial> orthogonalize(const PolynomialODE& ode, const std::optional<std::vector<Polynomial>>& override_q)
{
    if (ode.rank < 2) throw DomainError("rank-1 ODEs carry no certificate");
    if (override_q) {
        const auto& q = *override_q;
        if (q.size() != ode.rank) throw DomainError("orthogonal override needs one polynomial per component");
        Polynomial dot;
        unsigned dq = 0;
        for (unsigned i = 0; i < ode.rank; ++i) {
            for (Var v : q[i].variables()) {
                if (v.degree != 1) throw DomainError("orthogonal override may only use horizontal variables");
            }
            dot += ode.components[i] * q[i];
            dq = std::max(dq, q[i].degree());
        }
        if (!dot.is_zero()) throw DomainError("orthogonal override is not orthogonal to the ODE");
        if (std::all_of(q.begin(), q.end(), [](const Polynomial& p) { return p.is_zero(); })) {
            throw DomainError("orthogonal override is identically zero");
        }
        if (dq > ode.degree_bound()) throw DomainError("orthogonal override exceeds the ODE degree");
        return q;
    }
    const Polynomial& p1 = ode.components[0];
    const Polynomial& p2 = ode.components[1];
    if (p1.is_zero() && p2.is_zero()) {
        throw DomainError("P1 = P2 = 0: the default orthogonal vector vanishes; supply an override");
    }
    std::vector<Polynomial> q(ode.rank);
    q[0] = p2;
    q[1] = -p1;
    return q;
}

Polynomial PhiFamily::at(Index w) const
{
    auto it = values.find(w);
    return it == values.end() ? Polynomial() : it->second;
}

PhiFamily phi_family(unsigned rank, const std::vector<Polynomial>& q)
{
    if (rank < 2) throw DomainError("phi_family needs rank >= 2");
    if (q.size() != rank) throw DomainError("phi_family needs one polynomial per generator");
    unsigned d = 0;
    for (const auto& p : q) {
        for (Var v : p.variables()) {
            if (v.degree != 1) throw DomainError("phi_family inputs must be horizontal");
        }
        d = std::max(d, p.degree());
    }
    PhiFamily phi;
    phi.rank = rank;
    phi.checked_degree = d + 2;
    const auto& basis = poly::variable_basis(rank, phi.checked_degree);
    for (unsigned g = 1; g <= rank; ++g) {
        if (!q[g - 1].is_zero()) phi.values[g - 1] = q[g - 1];
    }
    for (Index w = rank; w < basis.degree_end(phi.checked_degree); ++w) {
        const auto& h = basis[w];
        const Polynomial a = phi.at(h.right);
        const Polynomial b = phi.at(h.left);
        Polynomial value = abn::derive(rank, poly::var_of(basis, h.left), a) - abn::derive(rank, poly::var_of(basis, h.right), b);
        if (!value.is_zero()) {
            if (h.degree == phi.checked_degree) {
                throw InexactError("derivative family does not terminate at word " + basis.to_string(w));
            }
            phi.values[w] = std::move(value);
        }
    }
    for (const auto& [w, v] : phi.values) phi.effective_step = std::max(phi.effective_step, basis.degree(w));
    return phi;
}

Polynomial first_integral(const PhiFamily& phi)
{
    const unsigned rank = phi.rank;
    const unsigned top = phi.effective_step;
    if (top == 0) return Polynomial();
    const auto& basis = poly::variable_basis(rank, phi.checked_degree);
    const Index n = basis.degree_end(top);
    std::vector<Var> vars;
    for (Index i = 0; i < n; ++i) vars.push_back(poly::var_of(basis, i));

    // Coordinate gradient from the left-invariant one, highest variable first:
    // X_w = d_w + sum_{v > w} a_{w,v} d_v.
    std::vector<Polynomial> grad(n);
    for (Index w = n; w-- > 0;) {
        Polynomial g = phi.at(w);
        for (Index v = 0; v < n; ++v) {
            const Polynomial a = abn::derive(rank, vars[w], Polynomial::variable(vars[v]));
            if (v < w) {
                if (!a.is_zero()) throw InexactError("frame is not unitriangular at " + basis.to_string(w));
            } else if (v == w) {
                if (a != Polynomial(1)) throw InexactError("frame is not unitriangular at " + basis.to_string(w));
            } else if (!a.is_zero()) {
                g -= a * grad[v];
            }
        }
        grad[w] = std::move(g);
    }
    std::vector<std::pair<Var, Polynomial>> gradient;
    for (Index i = 0; i < n; ++i) gradient.emplace_back(vars[i], grad[i]);
    Polynomial q = poly::staircase_antiderivative(gradient);

    for (Index w = 0; w < basis.degree_end(phi.checked_degree); ++w) {
        if (abn::derive(rank, poly::var_of(basis, w), q) != phi.at(w)) {
            throw InexactError("first integral fails X_w Q = phi(w) at " + basis.to_string(w));
        }
    }
    return q;
}

Polynomial flow_derivative(const PolynomialODE& ode, const Polynomial& q)
{
    Polynomial total;
    for (unsigned i = 0; i < ode.rank; ++i) {
        if (ode.components[i].is_zero()) continue;
        total += ode.components[i] * abn::derive(ode.rank, poly::generator_var(i + 1), q);
    }
    return total;
}

}  // namespace ablift::integral
