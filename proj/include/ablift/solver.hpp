#ifndef ABLIFT_SOLVER_HPP
#define ABLIFT_SOLVER_HPP

#include "ablift/abnormal.hpp"
#include "ablift/bound.hpp"
#include "ablift/integral.hpp"
#include "ablift/sparse.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace ablift::solver {

using abn::Covector;
using hall::Index;
using integral::PolynomialODE;
using lie::AlgebraContext;
using lie::LieElement;
using poly::Monomial;
using poly::Polynomial;

struct LambdaVar {
    Index word;
};

struct FactorVar {
    unsigned i;  // position among the degree-m words
    Monomial monomial;
};

using ColumnLabel = std::variant<LambdaVar, FactorVar>;

struct RowLabel {
    unsigned i;
    Monomial monomial;
};

/// Coefficients of P^{w_i}_lambda - C_i Q, one row per (i, monomial).
/// Lambda columns come first (by word), then factor columns (by i, then monomial order).
struct LinearSystem {
    unsigned rank = 0;
    unsigned layer = 0;
    unsigned step = 0;
    std::shared_ptr<const AlgebraContext> ctx;
    Polynomial q;
    std::vector<Index> words;  // degree-m words w_1 < ... < w_d
    std::vector<Monomial> factor_monomials;
    std::vector<ColumnLabel> columns;
    std::vector<RowLabel> rows;
    sparse::Matrix matrix;

    std::size_t lambda_columns() const;
    std::size_t factor_columns() const { return columns.size() - lambda_columns(); }
    std::string column_name(sparse::Column c) const;
};

LinearSystem build_system(unsigned rank, const Polynomial& q, unsigned m, unsigned step,
                          sparse::Backend backend = sparse::Backend::parallel);

/// The system after substituting lambda_{v(I)w_1} = I! (C_1 Q)_I: rows of the
/// words w_2..w_d over the remaining columns.
struct ReducedSystem {
    std::vector<sparse::Column> kept;  // full-system column of each reduced column
    std::size_t equations = 0;
    std::size_t factor_variables = 0;
    std::size_t lambda_variables = 0;  // lambda columns not fixed by the substitution
    sparse::Matrix matrix;
    // Eliminated lambda column -> combination of full-system factor columns.
    std::vector<std::pair<sparse::Column, sparse::Vector>> substitution;
};

ReducedSystem reduce(const LinearSystem& sys);

struct SolveOptions {
    bool eliminate_lambda = true;  // applied only when m >= 3
    sparse::Backend backend = sparse::Backend::parallel;
};

/// Kernel basis in full-system coordinates.
std::vector<sparse::Vector> solve_kernel(const LinearSystem& sys, const SolveOptions& options = {});

/// Index of the preferred kernel vector: nonzero factor part, smallest
/// support, then lexicographically smallest support.
std::optional<std::size_t> select_vector(const LinearSystem& sys, const std::vector<sparse::Vector>& basis);

struct CheckResult {
    std::string name;
    bool passed;
    std::string detail;
};

struct Report {
    std::vector<CheckResult> checks;
    bool passed() const;
    const CheckResult* find(const std::string& name) const;
};

struct Certificate {
    explicit Certificate(std::shared_ptr<const AlgebraContext> ctx) : lambda(std::move(ctx)) {}

    unsigned rank = 0;
    unsigned step = 0;
    unsigned layer = 0;
    std::optional<PolynomialODE> ode;  // absent for concatenation certificates
    Polynomial q;
    Covector lambda;  // on the quotient context (rank, step, layer)
    std::vector<Polynomial> factors;
    Report report;
};

/// Checks (a) sum P_i X_i Q = 0, (b) Q(0) = 0, (c) P^{w_i}_lambda = C_i Q for
/// every degree-m word, (d) some C_i != 0, (e) lambda != 0. Without an ODE
/// check (a) is reported as not applicable and passes.
Report verify(const Certificate& cert);

struct SearchOptions {
    SolveOptions solve;
    std::optional<std::vector<Rational>> initial_point;
    std::optional<std::vector<Polynomial>> orthogonal;
    std::uint64_t step_cap = 64;  // largest s' tried
    // Called after each step tried: (s', equations, unknowns, kernel dimension).
    std::function<void(unsigned, std::size_t, std::size_t, std::size_t)> on_step;
};

/// Certificate for Q at layer m from the first step s' >= m + deg Q with a
/// usable kernel vector.
Certificate certify_factor(unsigned rank, const Polynomial& q, unsigned m, const SearchOptions& options = {},
                           std::optional<PolynomialODE> ode = std::nullopt);

Certificate find_certificate(const PolynomialODE& ode, const SearchOptions& options = {});

/// Q = P^{X_A}_{lambda_A} P^{X_B}_{lambda_B} certified at layer m = step of the context.
Certificate concat_certificate(const Covector& lam_a, const lie::LieElement& x_a, const Covector& lam_b,
                               const lie::LieElement& x_b, const SearchOptions& options = {});

/// Assemble a certificate from a kernel vector of a system.
Certificate certificate_from_vector(const LinearSystem& sys, const sparse::Vector& v,
                                    std::optional<PolynomialODE> ode = std::nullopt);

nlohmann::json certificate_to_json(const Certificate& cert);
/// Reads the mathematical content; the stored report is ignored and recomputed.
Certificate certificate_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const Report& report);

}  // namespace ablift::solver

#endif  // ABLIFT_SOLVER_HPP
