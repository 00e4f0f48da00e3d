#include "ablift/numeric.hpp"

#include "ablift/abnormal.hpp"
#include "ablift/errors.hpp"

#include <cmath>
#include <unordered_map>

namespace ablift::numeric {

using poly::Polynomial;
using poly::Var;

Trajectory numeric_check(const integral::PolynomialODE& ode, const Polynomial& q, double horizon, double step,
                         const std::vector<double>& start)
{
    if (!(step > 0) || !(horizon >= 0)) throw DomainError("numeric check needs T >= 0 and h > 0");
    if (!start.empty() && start.size() != ode.rank) throw DomainError("start point needs one coordinate per component");
    const unsigned r = ode.rank;
    const unsigned depth = std::max(1u, q.max_variable_degree());
    const auto& basis = poly::variable_basis(r, depth);
    const std::size_t n = basis.degree_end(depth);
    std::vector<Var> vars;
    std::unordered_map<std::uint32_t, std::size_t> slot;
    for (std::size_t v = 0; v < n; ++v) {
        vars.push_back(poly::var_of(basis, static_cast<hall::Index>(v)));
        slot[vars.back().index] = v;
    }
    for (Var v : q.variables()) {
        if (!slot.count(v.index)) throw DomainError("Q uses a variable outside the rank");
    }
    // field[i][v] = X_i x_v.
    std::vector<std::vector<Polynomial>> field(r, std::vector<Polynomial>(n));
    for (unsigned i = 0; i < r; ++i) {
        for (std::size_t v = 0; v < n; ++v) field[i][v] = abn::derive(r, poly::generator_var(i + 1), Polynomial::variable(vars[v]));
    }

    const auto eval = [&](const Polynomial& p, const std::vector<double>& x) {
        return poly::evaluate(p, [&](Var v) { return x[slot.at(v.index)]; });
    };
    const auto rhs = [&](const std::vector<double>& x) {
        std::vector<double> dx(n, 0.0);
        for (unsigned i = 0; i < r; ++i) {
            const double pi = eval(ode.components[i], x);
            if (pi == 0) continue;
            for (std::size_t v = 0; v < n; ++v) {
                if (!field[i][v].is_zero()) dx[v] += pi * eval(field[i][v], x);
            }
        }
        return dx;
    };

    std::vector<double> x(n, 0.0);
    for (std::size_t i = 0; i < start.size(); ++i) x[i] = start[i];
    Trajectory t;
    t.initial_value = eval(q, x);
    const auto steps = static_cast<std::size_t>(std::llround(horizon / step));
    std::vector<double> tmp(n);
    for (std::size_t k = 0; k < steps; ++k) {
        const auto k1 = rhs(x);
        for (std::size_t v = 0; v < n; ++v) tmp[v] = x[v] + 0.5 * step * k1[v];
        const auto k2 = rhs(tmp);
        for (std::size_t v = 0; v < n; ++v) tmp[v] = x[v] + 0.5 * step * k2[v];
        const auto k3 = rhs(tmp);
        for (std::size_t v = 0; v < n; ++v) tmp[v] = x[v] + step * k3[v];
        const auto k4 = rhs(tmp);
        for (std::size_t v = 0; v < n; ++v) x[v] += step / 6 * (k1[v] + 2 * k2[v] + 2 * k3[v] + k4[v]);
        const double value = eval(q, x);
        if (!std::isfinite(value)) {
            t.finite = false;
            break;
        }
        t.max_residual = std::max(t.max_residual, std::abs(value - t.initial_value));
        ++t.steps;
    }
    return t;
}

}  // namespace ablift::numeric
