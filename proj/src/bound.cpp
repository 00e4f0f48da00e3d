#include "ablift/bound.hpp"

#include "ablift/errors.hpp"
#include "ablift/hall.hpp"
#include "ablift/polyring.hpp"

#include <cfloat>
#include <cmath>
#include <memory>
#include <numeric>

namespace ablift::solver {

CountingData counting_data(unsigned rank, unsigned m, unsigned q)
{
    if (rank < 2) throw DomainError("step bound needs rank >= 2");
    if (m < 2) throw DomainError("step bound needs m >= 2");
    if (q < 1) throw DomainError("step bound needs deg Q >= 1");
    CountingData c;
    c.rank = rank;
    c.layer = m;
    c.q = q;
    c.d = hall::layer_dimension(rank, m);
    c.dims.assign(m, 0);
    for (unsigned k = 1; k < m; ++k) c.dims[k] = hall::layer_dimension(rank, k);
    return c;
}

std::vector<Integer> delta_series(unsigned rank, unsigned m, unsigned q, std::size_t terms)
{
    const CountingData c = counting_data(rank, m, q);
    const auto n = poly::poincare_coefficients(rank, m, terms);
    std::vector<Integer> delta(terms, 0);
    const Integer d = static_cast<unsigned long>(c.d);
    for (std::size_t k = 0; k < terms; ++k) {
        if (k >= m) delta[k] -= (d - 1) * n[k - m];
        if (k >= m + q) delta[k] += d * n[k - m - q];
    }
    return delta;
}

namespace {

// 1 / ((1 - t) prod (1 - t^k)^{dim k}) = num(t) / (1 - t^L)^D with L = lcm(1..m-1).
struct QuasiPolynomial {
    std::uint64_t period = 1;
    unsigned long pole_order = 0;
    std::vector<Integer> num;

    explicit QuasiPolynomial(const CountingData& c)
    {
        for (unsigned k = 1; k < c.layer; ++k) period = std::lcm(period, std::uint64_t{k});
        std::vector<std::pair<std::uint64_t, std::uint64_t>> factors{{1, 1}};
        for (unsigned k = 1; k < c.layer; ++k) factors.emplace_back(k, c.dims[k]);
        std::uint64_t degree = 0;
        for (auto [k, e] : factors) {
            degree += e * (period - k);
            pole_order += e;
        }
        if (degree > 50'000'000) throw ResourceError("quasi-polynomial numerator too large");
        num.assign(degree + 1, 0);
        num[0] = 1;
        std::uint64_t current = 0;
        std::vector<Integer> prefix;
        for (auto [k, e] : factors) {
            for (std::uint64_t rep = 0; rep < e; ++rep) {
                // Multiply by 1 + t^k + ... + t^{L-k}.
                const std::uint64_t next = current + period - k;
                prefix.assign(next + 1, 0);
                for (std::uint64_t i = 0; i <= next; ++i) {
                    if (i <= current) prefix[i] = num[i];
                    if (i >= k) prefix[i] += prefix[i - k];
                }
                for (std::uint64_t i = 0; i <= next; ++i) {
                    num[i] = prefix[i];
                    if (i >= period) num[i] -= prefix[i - period];
                }
                current = next;
            }
        }
    }

    Integer coefficient(std::uint64_t n) const
    {
        Integer total = 0;
        std::uint64_t j = n % period;
        if (j >= num.size()) return total;
        // Walk j = n mod L upwards; a = (n - j) / L decreases by one each step.
        std::uint64_t a = (n - j) / period;
        Integer binom;
        mpz_bin_uiui(binom.get_mpz_t(), a + pole_order - 1, pole_order - 1);
        while (true) {
            total += num[j] * binom;
            j += period;
            if (j >= num.size() || j > n) break;
            // C(a-1+D-1, D-1) = C(a+D-1, D-1) * a / (a+D-1)
            binom *= static_cast<unsigned long>(a);
            mpz_divexact_ui(binom.get_mpz_t(), binom.get_mpz_t(), a + pole_order - 1);
            --a;
        }
        return total;
    }
};

Integer partial_from(const CountingData& c, const QuasiPolynomial& qp, std::uint64_t s)
{
    Integer v = 0, e = 0;
    if (s >= c.layer) e = qp.coefficient(s - c.layer);
    if (s >= c.layer + c.q) v = qp.coefficient(s - c.layer - c.q);
    const Integer d = static_cast<unsigned long>(c.d);
    return d * v - (d - 1) * e;
}

}  // namespace

Integer monomial_count_upto(unsigned rank, unsigned m, std::int64_t n)
{
    if (n < 0) return 0;
    const CountingData c = counting_data(rank, m, 1);
    return QuasiPolynomial(c).coefficient(static_cast<std::uint64_t>(n));
}

Integer partial_sum(unsigned rank, unsigned m, unsigned q, std::uint64_t s)
{
    const CountingData c = counting_data(rank, m, q);
    return partial_from(c, QuasiPolynomial(c), s);
}

std::uint64_t step_bound(unsigned rank, unsigned m, unsigned q, const BoundOptions& options)
{
    const CountingData c = counting_data(rank, m, q);
    std::unique_ptr<QuasiPolynomial> exact;
    double weight = 1;  // 1 + sum dim_k / k
    for (unsigned k = 1; k < m; ++k) weight += static_cast<double>(c.dims[k]) / k;
    const long double d = static_cast<long double>(c.d);

    // Cumulative counts S(n) in long double. Every entry is a sum of positive
    // terms along chains of at most n / k additions per pass, so its relative
    // error stays below u * n * weight.
    std::size_t terms = 1024;
    std::uint64_t s = m;
    while (true) {
        const std::uint64_t limit = std::min<std::uint64_t>(options.cap, terms - 1 + m);
        std::vector<long double> S(terms, 0.0L);
        S[0] = 1;
        for (unsigned k = 1; k < m; ++k) {
            for (std::uint64_t rep = 0; rep < c.dims[k]; ++rep) {
                for (std::size_t i = k; i < terms; ++i) S[i] += S[i - k];
            }
        }
        for (std::size_t i = 1; i < terms; ++i) S[i] += S[i - 1];
        if (!std::isfinite(S[terms - 1])) throw ResourceError("step bound series overflows extended precision");
        const long double rel = 4.0L * LDBL_EPSILON * static_cast<long double>(terms) * weight;
        for (; s <= limit; ++s) {
            const std::uint64_t ne = s - m;
            const long double se = S[ne];
            const long double sv = s >= m + q ? S[s - m - q] : 0.0L;
            const long double f = d * sv - (d - 1) * se;
            const long double err = rel * (d * sv + (d - 1) * se) + 0.5L;
            if (f - err >= 1) return s;
            if (f + err < 1) continue;
            if (!exact) exact = std::make_unique<QuasiPolynomial>(c);
            if (partial_from(c, *exact, s) >= 1) return s;
        }
        if (limit >= options.cap) throw ResourceError("step bound exceeds the configured cap");
        terms *= 2;
    }
}

std::uint64_t step_bound_exact(unsigned rank, unsigned m, unsigned q, const BoundOptions& options)
{
    (void)counting_data(rank, m, q);
    std::size_t terms = 256;
    while (true) {
        const auto delta = delta_series(rank, m, q, terms);
        Integer sum = 0;
        for (std::size_t k = 0; k < terms; ++k) {
            sum += delta[k];
            if (k >= m && sum >= 1) return k;
            if (k >= options.cap) throw ResourceError("step bound exceeds the configured cap");
        }
        terms *= 2;
    }
}

std::uint64_t ode_step_bound(unsigned rank, unsigned degree, const BoundOptions& options)
{
    if (degree < 1) throw DomainError("ODE degree bound must be >= 1");
    return step_bound(rank, degree + 2, degree + 1, options);
}

}  // namespace ablift::solver
