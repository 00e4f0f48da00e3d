#ifndef ABLIFT_BOUND_HPP
#define ABLIFT_BOUND_HPP

#include "ablift/rational.hpp"

#include <cstdint>
#include <vector>

namespace ablift::solver {

/// Counting data for the factor system at layer m with deg Q = q.
/// N_k counts monomials of weighted degree k in the variables of degree < m,
/// d is the dimension of layer m.
struct CountingData {
    unsigned rank = 0;
    unsigned layer = 0;
    unsigned q = 0;
    std::uint64_t d = 0;
    std::vector<std::uint64_t> dims;  // dims[k] = layer dimension k, k < m
};

CountingData counting_data(unsigned rank, unsigned m, unsigned q);

/// delta_0 .. delta_{terms-1} of (1 - d (1 - t^q)) t^m / prod_{k<m} (1 - t^k)^{dim k}.
std::vector<Integer> delta_series(unsigned rank, unsigned m, unsigned q, std::size_t terms);

/// Number of monomials of weighted degree <= n in the variables of degree < m.
Integer monomial_count_upto(unsigned rank, unsigned m, std::int64_t n);

/// V_s - E_s = sum_{k<=s} delta_k, evaluated directly for a single s.
Integer partial_sum(unsigned rank, unsigned m, unsigned q, std::uint64_t s);

struct BoundOptions {
    std::uint64_t cap = 40'000'000;  // largest step searched
};

/// Smallest s >= m with sum_{k<=s} delta_k >= 1.
std::uint64_t step_bound(unsigned rank, unsigned m, unsigned q, const BoundOptions& options = {});

/// Same answer by streaming the exact integer series, doubling the truncation.
std::uint64_t step_bound_exact(unsigned rank, unsigned m, unsigned q, const BoundOptions& options = {});

/// Bound for an ODE of degree d: m = d + 2, q = d + 1.
std::uint64_t ode_step_bound(unsigned rank, unsigned degree, const BoundOptions& options = {});

}  // namespace ablift::solver

#endif  // ABLIFT_BOUND_HPP
