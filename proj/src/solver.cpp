#include "ablift/solver.hpp"

#include "ablift/errors.hpp"

#include <algorithm>
#include <unordered_map>

namespace ablift::solver {

using sparse::Column;

std::size_t LinearSystem::lambda_columns() const
{
    std::size_t n = 0;
    while (n < columns.size() && std::holds_alternative<LambdaVar>(columns[n])) ++n;
    return n;
}

std::string LinearSystem::column_name(Column c) const
{
    const auto& label = columns.at(c);
    if (const auto* l = std::get_if<LambdaVar>(&label)) return "lambda_" + ctx->basis().to_string(l->word);
    const auto& f = std::get<FactorVar>(label);
    return "c_" + std::to_string(f.i + 1) + "[" + poly::to_string(f.monomial, rank) + "]";
}

namespace {

using Expansion = std::map<Monomial, std::vector<std::pair<Index, Rational>>, poly::MonomialOrder>;

Expansion expansion_of(const AlgebraContext& ctx, Index w)
{
    Expansion out;
    for (const auto& t : abn::adjoint_expansion(LieElement::basis(ctx, w))) {
        auto& entries = out[t.monomial];
        for (const auto& term : t.value.terms()) entries.emplace_back(term.word, term.coeff);
    }
    return out;
}

void check_factor_input(unsigned rank, const Polynomial& q, unsigned m, unsigned step)
{
    if (rank < 2) throw DomainError("the factor system needs rank >= 2");
    if (m < 2) throw DomainError("the factor system needs m >= 2");
    if (q.is_zero()) throw DomainError("Q must be nonzero");
    if (q.max_variable_degree() >= m) throw DomainError("Q uses a variable of degree >= m");
    if (m > step || q.degree() + m > step) throw DomainError("the factor system needs deg Q <= step - m");
    const auto& basis = poly::variable_basis(rank, m);
    for (poly::Var v : q.variables()) {
        if (v.index >= basis.size() || basis.degree(v.index) != v.degree) {
            throw DomainError("Q has a variable outside rank " + std::to_string(rank));
        }
    }
}

}  // namespace

LinearSystem build_system(unsigned rank, const Polynomial& q, unsigned m, unsigned step, sparse::Backend backend)
{
    check_factor_input(rank, q, m, step);
    LinearSystem sys;
    sys.rank = rank;
    sys.layer = m;
    sys.step = step;
    sys.q = q;
    sys.ctx = lie::context_for(rank, step, m);
    const AlgebraContext& ctx = *sys.ctx;
    const auto& basis = ctx.basis();
    for (Index w = basis.degree_begin(m); w < basis.degree_end(m); ++w) sys.words.push_back(w);
    std::vector<poly::Var> vars;
    for (Index j = 0; j < basis.degree_end(m - 1); ++j) vars.push_back(poly::var_of(basis, j));
    sys.factor_monomials = poly::enumerate_monomials(vars, step - m - q.degree());

    const std::size_t d = sys.words.size();
    std::vector<Expansion> expansions(d);
    if (backend == sparse::Backend::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::size_t i = 0; i < d; ++i) expansions[i] = expansion_of(ctx, sys.words[i]);
    } else {
        for (std::size_t i = 0; i < d; ++i) expansions[i] = expansion_of(ctx, sys.words[i]);
    }

    std::vector<Index> lambda_words;
    for (const auto& e : expansions) {
        for (const auto& [mono, entries] : e) {
            for (const auto& [w, c] : entries) lambda_words.push_back(w);
        }
    }
    std::sort(lambda_words.begin(), lambda_words.end());
    lambda_words.erase(std::unique(lambda_words.begin(), lambda_words.end()), lambda_words.end());
    std::unordered_map<Index, Column> lambda_col;
    for (Index w : lambda_words) {
        lambda_col[w] = static_cast<Column>(sys.columns.size());
        sys.columns.push_back(LambdaVar{w});
    }
    const Column factor_base = static_cast<Column>(sys.columns.size());
    const std::size_t nf = sys.factor_monomials.size();
    for (std::size_t i = 0; i < d; ++i) {
        for (const auto& mono : sys.factor_monomials) sys.columns.push_back(FactorVar{static_cast<unsigned>(i), mono});
    }
    sys.matrix.columns = sys.columns.size();

    // Rows of one block: the expansion entries plus -q_K on c_{i,J} for every J K = I.
    std::vector<std::vector<std::pair<Monomial, sparse::Vector>>> blocks(d);
    const auto fill = [&](std::size_t i) {
        std::map<Monomial, std::map<Column, Rational>, poly::MonomialOrder> rows;
        for (const auto& [mono, entries] : expansions[i]) {
            auto& row = rows[mono];
            for (const auto& [w, c] : entries) row[lambda_col.at(w)] += c;
        }
        for (std::size_t f = 0; f < nf; ++f) {
            const Column col = factor_base + static_cast<Column>(i * nf + f);
            for (const auto& [k, qk] : q.terms()) rows[sys.factor_monomials[f] * k][col] -= qk;
        }
        for (auto& [mono, row] : rows) {
            sparse::Vector v;
            for (auto& [col, val] : row) {
                if (val != 0) v.push_back({col, std::move(val)});
            }
            if (!v.empty()) blocks[i].emplace_back(mono, std::move(v));
        }
    };
    if (backend == sparse::Backend::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::size_t i = 0; i < d; ++i) fill(i);
    } else {
        for (std::size_t i = 0; i < d; ++i) fill(i);
    }
    for (std::size_t i = 0; i < d; ++i) {
        for (auto& [mono, v] : blocks[i]) {
            sys.rows.push_back({static_cast<unsigned>(i), mono});
            sys.matrix.rows.push_back(std::move(v));
        }
    }
    return sys;
}

ReducedSystem reduce(const LinearSystem& sys)
{
    if (sys.words.empty() || sys.words.front() != abn::minimal_word(sys.ctx->basis(), sys.layer)) {
        throw std::logic_error("reduce: the first word is not 1^{m-1}2");
    }
    const std::size_t nl = sys.lambda_columns();
    ReducedSystem red;
    std::unordered_map<Column, sparse::Vector> subst;
    for (std::size_t r = 0; r < sys.rows.size(); ++r) {
        if (sys.rows[r].i != 0) continue;
        const auto& row = sys.matrix.rows[r];
        // Exactly one lambda entry, lambda_{v(I)w_1} / I!, by the free abnormal polynomial structure.
        if (row.empty() || row.front().col >= nl || (row.size() > 1 && row[1].col < nl)) {
            throw std::logic_error("reduce: unexpected shape of a w_1 row");
        }
        const Rational inv = 1 / row.front().value;
        sparse::Vector combo;
        for (std::size_t k = 1; k < row.size(); ++k) combo.push_back({row[k].col, -inv * row[k].value});
        subst.emplace(row.front().col, std::move(combo));
    }
    std::vector<Column> new_index(sys.columns.size(), 0);
    for (Column c = 0; c < sys.columns.size(); ++c) {
        if (subst.count(c)) continue;
        new_index[c] = static_cast<Column>(red.kept.size());
        red.kept.push_back(c);
        if (c < nl) {
            ++red.lambda_variables;
        } else {
            ++red.factor_variables;
        }
    }
    red.matrix.columns = red.kept.size();
    for (std::size_t r = 0; r < sys.rows.size(); ++r) {
        if (sys.rows[r].i == 0) continue;
        std::map<Column, Rational> acc;
        for (const auto& e : sys.matrix.rows[r]) {
            auto it = subst.find(e.col);
            if (it == subst.end()) {
                acc[e.col] += e.value;
            } else {
                for (const auto& s : it->second) acc[s.col] += e.value * s.value;
            }
        }
        sparse::Vector v;
        for (auto& [col, val] : acc) {
            if (val != 0) v.push_back({new_index[col], std::move(val)});
        }
        red.matrix.rows.push_back(std::move(v));
        ++red.equations;
    }
    for (auto& [col, combo] : subst) red.substitution.emplace_back(col, std::move(combo));
    std::sort(red.substitution.begin(), red.substitution.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return red;
}

std::vector<sparse::Vector> solve_kernel(const LinearSystem& sys, const SolveOptions& options)
{
    if (!options.eliminate_lambda || sys.layer < 3) return sparse::kernel(sys.matrix, options.backend).basis;
    const ReducedSystem red = reduce(sys);
    const auto k = sparse::kernel(red.matrix, options.backend);
    std::vector<sparse::Vector> out;
    out.reserve(k.basis.size());
    for (const auto& v : k.basis) {
        std::map<Column, Rational> full;
        for (const auto& e : v) full[red.kept[e.col]] = e.value;
        for (const auto& [col, combo] : red.substitution) {
            Rational val = 0;
            for (const auto& s : combo) {
                auto it = full.find(s.col);
                if (it != full.end()) val += s.value * it->second;
            }
            if (val != 0) full[col] = val;
        }
        sparse::Vector fv;
        for (auto& [col, val] : full) fv.push_back({col, std::move(val)});
        out.push_back(std::move(fv));
    }
    return out;
}

std::optional<std::size_t> select_vector(const LinearSystem& sys, const std::vector<sparse::Vector>& basis)
{
    const std::size_t nl = sys.lambda_columns();
    std::optional<std::size_t> best;
    for (std::size_t k = 0; k < basis.size(); ++k) {
        const auto& v = basis[k];
        if (v.empty() || v.back().col < nl) continue;
        if (!best) {
            best = k;
            continue;
        }
        const auto& b = basis[*best];
        if (v.size() != b.size()) {
            if (v.size() < b.size()) best = k;
            continue;
        }
        for (std::size_t t = 0; t < v.size(); ++t) {
            if (v[t].col != b[t].col) {
                if (v[t].col < b[t].col) best = k;
                break;
            }
        }
    }
    return best;
}

bool Report::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* Report::find(const std::string& name) const
{
    for (const auto& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

Report verify(const Certificate& cert)
{
    Report report;
    const AlgebraContext& ctx = cert.lambda.context();
    if (cert.ode) {
        const bool ok = integral::flow_derivative(*cert.ode, cert.q).is_zero();
        report.checks.push_back({"a_first_integral", ok, ok ? "" : "sum P_i X_i Q != 0"});
    } else {
        report.checks.push_back({"a_first_integral", true, "not applicable: no ODE"});
    }
    const bool b = cert.q.constant_term() == 0;
    report.checks.push_back({"b_vanishes_at_origin", b, b ? "" : "Q(0) = " + to_string(cert.q.constant_term())});

    std::string detail;
    bool c = ctx.rank() == cert.rank && ctx.step() == cert.step && ctx.quotient_layer() == cert.layer;
    if (!c) detail = "covector context does not match (rank, step, layer)";
    const auto& basis = ctx.basis();
    if (c) {
        const Index begin = basis.degree_begin(cert.layer);
        const Index end = basis.degree_end(cert.layer);
        if (cert.factors.size() != end - begin) {
            c = false;
            detail = "expected " + std::to_string(end - begin) + " factors";
        } else {
            for (Index w = begin; w < end; ++w) {
                const Polynomial p = abn::abnormal_polynomial(LieElement::basis(ctx, w), cert.lambda);
                if (p != cert.factors[w - begin] * cert.q) {
                    c = false;
                    detail = "P^{" + basis.to_string(w) + "} != C_" + std::to_string(w - begin + 1) + " Q";
                    break;
                }
            }
        }
    }
    report.checks.push_back({"c_factorization", c, detail});
    const bool d = std::any_of(cert.factors.begin(), cert.factors.end(), [](const Polynomial& p) { return !p.is_zero(); });
    report.checks.push_back({"d_nonzero_factor", d, d ? "" : "every C_i vanishes"});
    const bool e = !cert.lambda.is_zero();
    report.checks.push_back({"e_nonzero_covector", e, e ? "" : "lambda = 0"});
    return report;
}

Certificate certificate_from_vector(const LinearSystem& sys, const sparse::Vector& v, std::optional<PolynomialODE> ode)
{
    // Scale the lambda part to coprime integers.
    const std::size_t nl = sys.lambda_columns();
    const bool has_lambda = !v.empty() && v.front().col < nl;
    Integer den = 1, num = 0;
    for (const auto& e : v) {
        if (has_lambda && e.col >= nl) break;
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), e.value.get_den_mpz_t());
        mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), e.value.get_num_mpz_t());
    }
    const Rational scale = num == 0 ? Rational(1) : Rational(den) / Rational(num);
    Certificate cert(sys.ctx);
    cert.rank = sys.rank;
    cert.step = sys.step;
    cert.layer = sys.layer;
    cert.ode = std::move(ode);
    cert.q = sys.q;
    cert.factors.assign(sys.words.size(), Polynomial());
    for (const auto& e : v) {
        const Rational val = e.value * scale;
        if (const auto* l = std::get_if<LambdaVar>(&sys.columns[e.col])) {
            cert.lambda.set(l->word, val);
        } else {
            const auto& f = std::get<FactorVar>(sys.columns[e.col]);
            cert.factors[f.i].add_term(f.monomial, val);
        }
    }
    cert.report = verify(cert);
    return cert;
}

Certificate certify_factor(unsigned rank, const Polynomial& q, unsigned m, const SearchOptions& options,
                           std::optional<PolynomialODE> ode)
{
    check_factor_input(rank, q, m, m + q.degree());
    const std::uint64_t bound = step_bound(rank, m, q.degree());
    const std::uint64_t last = std::min(bound, options.step_cap);
    for (std::uint64_t s = m + q.degree(); s <= last; ++s) {
        const LinearSystem sys = build_system(rank, q, m, static_cast<unsigned>(s), options.solve.backend);
        const auto basis = solve_kernel(sys, options.solve);
        if (options.on_step) options.on_step(static_cast<unsigned>(s), sys.rows.size(), sys.columns.size(), basis.size());
        const auto pick = select_vector(sys, basis);
        if (!pick) continue;
        Certificate cert = certificate_from_vector(sys, basis[*pick], ode);
        if (!cert.report.passed()) throw std::logic_error("kernel vector failed verification at step " + std::to_string(s));
        return cert;
    }
    if (last < bound) {
        throw ResourceError("no certificate up to the step cap " + std::to_string(options.step_cap) +
                            " (a priori bound " + std::to_string(bound) + ")");
    }
    throw std::logic_error("no certificate below the a priori step bound");
}

Certificate find_certificate(const PolynomialODE& ode, const SearchOptions& options)
{
    if (ode.rank < 2) throw DomainError("rank-1 ODEs carry no certificate");
    const PolynomialODE moved = options.initial_point ? integral::translate_ode(ode, *options.initial_point) : ode;
    const auto qv = integral::orthogonalize(moved, options.orthogonal);
    const auto phi = integral::phi_family(moved.rank, qv);
    const Polynomial q = integral::first_integral(phi);
    const unsigned m = std::max(2u, 1 + q.max_variable_degree());
    return certify_factor(moved.rank, q, m, options, moved);
}

Certificate concat_certificate(const Covector& lam_a, const LieElement& x_a, const Covector& lam_b,
                               const LieElement& x_b, const SearchOptions& options)
{
    const AlgebraContext& ctx = lam_a.context();
    if (&lam_b.context() != &ctx) throw ContextMismatch("concatenated covectors live in different groups");
    for (const LieElement* x : {&x_a, &x_b}) {
        if (x->is_zero() || x->max_degree() != 1) throw DomainError("concatenation needs nonzero horizontal vectors");
    }
    const Polynomial pa = abn::abnormal_polynomial(x_a, lam_a);
    const Polynomial pb = abn::abnormal_polynomial(x_b, lam_b);
    if (pa.is_zero() || pb.is_zero()) throw DomainError("concatenation needs nonzero abnormal polynomials");
    if (pa.constant_term() != 0 || pb.constant_term() != 0) {
        throw DomainError("abnormal polynomials of curves through the identity vanish at 0");
    }
    return certify_factor(ctx.rank(), pa * pb, ctx.step(), options);
}

nlohmann::json report_to_json(const Report& report)
{
    nlohmann::json j = nlohmann::json::object();
    for (const auto& c : report.checks) j[c.name] = c.passed;
    return j;
}

nlohmann::json certificate_to_json(const Certificate& cert)
{
    nlohmann::json lam = nlohmann::json::object();
    const auto& basis = cert.lambda.context().basis();
    for (const auto& [w, v] : cert.lambda.components()) lam[basis.to_string(w)] = to_string(v);
    nlohmann::json factors = nlohmann::json::array();
    for (const auto& f : cert.factors) factors.push_back(poly::to_string(f, cert.rank));
    return {{"rank", cert.rank},
            {"step", cert.step},
            {"layer_m", cert.layer},
            {"ode", cert.ode ? integral::ode_to_json(*cert.ode) : nlohmann::json(nullptr)},
            {"Q", poly::to_string(cert.q, cert.rank)},
            {"lambda", lam},
            {"factors", factors},
            {"report", report_to_json(cert.report)}};
}

Certificate certificate_from_json(const nlohmann::json& j)
{
    try {
        const unsigned rank = j.at("rank").get<unsigned>();
        const unsigned step = j.at("step").get<unsigned>();
        const unsigned layer = j.at("layer_m").get<unsigned>();
        if (rank < 2 || layer < 2 || layer > step) throw ParseError("certificate needs rank >= 2 and 2 <= layer_m <= step");
        Certificate cert(lie::context_for(rank, step, layer));
        cert.rank = rank;
        cert.step = step;
        cert.layer = layer;
        if (j.contains("ode") && !j.at("ode").is_null()) cert.ode = integral::ode_from_json(j.at("ode"));
        cert.q = poly::parse_polynomial(j.at("Q").get<std::string>(), rank);
        const auto& basis = cert.lambda.context().basis();
        for (const auto& [word, value] : j.at("lambda").items()) {
            auto idx = basis.parse(word);
            if (!idx) throw ParseError("'" + word + "' is not a Hall word of the certificate context");
            cert.lambda.set(*idx, parse_rational(value.get<std::string>()));
        }
        for (const auto& f : j.at("factors")) cert.factors.push_back(poly::parse_polynomial(f.get<std::string>(), rank));
        cert.report = verify(cert);
        return cert;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed certificate JSON: ") + e.what());
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    }
}

}  // namespace ablift::solver
