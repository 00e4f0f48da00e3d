#ifndef ABLIFT_NUMERIC_HPP
#define ABLIFT_NUMERIC_HPP

#include "ablift/integral.hpp"

#include <vector>

namespace ablift::numeric {

struct Trajectory {
    double max_residual = 0;  // max |Q(x(t)) - Q(x(0))|
    double initial_value = 0;
    std::size_t steps = 0;
    bool finite = true;
};

/// Fixed-step RK4 on the horizontal lift x' = sum_i P_i(x) X_i(x), in the
/// coordinates of every Hall word up to the highest variable degree of Q.
/// `start` gives the horizontal coordinates (default: the origin); the rest start at 0.
/// Floating point only: advisory, never part of a certificate.
Trajectory numeric_check(const integral::PolynomialODE& ode, const poly::Polynomial& q, double horizon, double step,
                         const std::vector<double>& start = {});

}  // namespace ablift::numeric

#endif  // ABLIFT_NUMERIC_HPP
