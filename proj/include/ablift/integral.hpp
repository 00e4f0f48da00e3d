#ifndef ABLIFT_INTEGRAL_HPP
#define ABLIFT_INTEGRAL_HPP

#include "ablift/polyring.hpp"
#include "ablift/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace ablift::integral {

using hall::Index;
using poly::Polynomial;

/// x' = P(x) in R^r with polynomial components in x1..xr.
struct PolynomialODE {
    unsigned rank = 0;
    std::vector<Polynomial> components;

    PolynomialODE() = default;
    PolynomialODE(unsigned rank, std::vector<Polynomial> components);

    unsigned degree_bound() const;
    bool is_zero() const;
    std::string to_string() const;  // "P1; P2; ..."
};

/// Components separated by ';'. The rank is the number of components.
PolynomialODE parse_ode(std::string_view text);
nlohmann::json ode_to_json(const PolynomialODE& ode);
/// {rank, components: [string], initial_point?: [rational strings]}.
PolynomialODE ode_from_json(const nlohmann::json& j, std::vector<Rational>* initial_point = nullptr);

/// Substitute x_i -> x_i + point_i.
PolynomialODE translate_ode(const PolynomialODE& ode, const std::vector<Rational>& point);

/// (Q_1, ..., Q_r) with sum P_i Q_i = 0. Default (P_2, -P_1, 0, ..., 0).
std::vector<Polynomial> orthogonalize(const PolynomialODE& ode,
                                      const std::optional<std::vector<Polynomial>>& override_q = std::nullopt);

/// phi(X_w) = X_w Q for the Q with X_i Q = Q_i, on every Hall word up to
/// checked_degree. Only nonzero values are stored.
struct PhiFamily {
    unsigned rank = 0;
    unsigned checked_degree = 0;
    unsigned effective_step = 0;  // highest degree with a nonzero value
    std::map<Index, Polynomial> values;  // keyed by full-basis position

    Polynomial at(Index w) const;
};

PhiFamily phi_family(unsigned rank, const std::vector<Polynomial>& q);

/// Q with X_w Q = phi(w) for all Hall words and Q(0) = 0.
Polynomial first_integral(const PhiFamily& phi);

/// sum_i P_i * (X_i Q): zero exactly when Q is a first integral of the lifted flow.
Polynomial flow_derivative(const PolynomialODE& ode, const Polynomial& q);

}  // namespace ablift::integral

#endif  // ABLIFT_INTEGRAL_HPP
