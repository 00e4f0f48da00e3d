#include "ablift/bound.hpp"
#include "ablift/errors.hpp"
#include "ablift/hall.hpp"
#include "ablift/integral.hpp"
#include "ablift/numeric.hpp"
#include "ablift/solver.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace ablift;
using hall::Index;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kFailed = 1, kInput = 2, kResource = 3 };

struct OdeInput {
    std::string inline_ode;
    std::string path;
    std::string initial_point;
    std::string orthogonal;
};

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, sep)) out.push_back(item);
    return out;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<Rational> parse_point(const std::string& text)
{
    std::vector<Rational> out;
    for (const auto& item : split(text, ',')) out.push_back(parse_rational(item));
    return out;
}

// ODE plus the search options implied by --initial-point and --orthogonal.
integral::PolynomialODE load_ode(const OdeInput& in, solver::SearchOptions& opts)
{
    if (in.inline_ode.empty() == in.path.empty()) throw ParseError("give exactly one of --ode and --input");
    integral::PolynomialODE ode;
    std::vector<Rational> point;
    if (!in.path.empty()) {
        const std::string text = read_file(in.path);
        const auto first = text.find_first_not_of(" \t\r\n");
        if (first != std::string::npos && text[first] == '{') {
            json j;
            try {
                j = json::parse(text);
            } catch (const json::exception& e) {
                throw ParseError(e.what());
            }
            ode = integral::ode_from_json(j, &point);
        } else {
            ode = integral::parse_ode(text);
        }
    } else {
        ode = integral::parse_ode(in.inline_ode);
    }
    if (!in.initial_point.empty()) point = parse_point(in.initial_point);
    if (!point.empty()) {
        if (point.size() != ode.rank) throw ParseError("initial point needs one coordinate per component");
        opts.initial_point = point;
    }
    if (!in.orthogonal.empty()) {
        std::vector<poly::Polynomial> qv;
        for (const auto& item : split(in.orthogonal, ';')) qv.push_back(poly::parse_polynomial(item, ode.rank));
        opts.orthogonal = qv;
    }
    return ode;
}

void add_ode_options(CLI::App* cmd, OdeInput& in)
{
    cmd->add_option("--ode", in.inline_ode, "components separated by ';', e.g. \"-x1 - x2; x1 - x2\"");
    cmd->add_option("--input", in.path, "ODE file: JSON {rank, components, initial_point?} or plain text");
    cmd->add_option("--initial-point", in.initial_point, "comma separated rationals; moved to the origin");
    cmd->add_option("--orthogonal", in.orthogonal, "override Q_1; ...; Q_r");
}

void print(const json& j, bool as_json, const std::string& text)
{
    if (as_json) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << text;
    }
}

std::string report_text(const solver::Report& report)
{
    std::string out;
    for (const auto& c : report.checks) {
        out += "  " + c.name + ": " + (c.passed ? "pass" : "FAIL");
        if (!c.detail.empty()) out += " (" + c.detail + ")";
        out += "\n";
    }
    return out;
}

std::string certificate_text(const solver::Certificate& cert)
{
    std::ostringstream out;
    out << "rank " << cert.rank << ", step " << cert.step << ", layer m = " << cert.layer << "\n";
    if (cert.ode) {
        out << "ode:\n";
        for (unsigned i = 0; i < cert.ode->rank; ++i) {
            out << "  x" << i + 1 << "' = " << poly::to_string(cert.ode->components[i], cert.rank) << "\n";
        }
    }
    out << "Q = " << poly::to_string(cert.q, cert.rank) << "\n";
    const auto& basis = cert.lambda.context().basis();
    out << "lambda (" << cert.lambda.components().size() << " nonzero):\n";
    for (const auto& [w, v] : cert.lambda.components()) {
        out << "  " << basis.to_string(w) << " = " << to_string(v) << "\n";
    }
    const Index begin = basis.degree_begin(cert.layer);
    for (std::size_t i = 0; i < cert.factors.size(); ++i) {
        out << "C_" << i + 1 << " [" << basis.to_string(begin + static_cast<Index>(i))
            << "] = " << poly::to_string(cert.factors[i], cert.rank) << "\n";
    }
    out << "checks:\n" << report_text(cert.report);
    out << (cert.report.passed() ? "verified\n" : "NOT verified\n");
    return out.str();
}

int cmd_hall(unsigned rank, unsigned degree, std::size_t cap, bool as_json)
{
    const hall::HallBasis b = hall::enumerate_hall_words(rank, degree, cap);
    json j = json::array();
    std::string text;
    for (Index w = 0; w < b.size(); ++w) {
        const std::string word = b.to_string(w);
        std::string ad;
        if (!b[w].is_generator()) ad = hall::format_ad_factorization(b, hall::ad_factorization(b, w));
        j.push_back({{"word", word}, {"degree", b.degree(w)}, {"ad", ad}});
        text += word;
        if (!ad.empty()) text += " = " + ad;
        text += "\n";
    }
    print(j, as_json, text);
    return kOk;
}

int cmd_bound(unsigned rank, unsigned degree, unsigned layer, unsigned q, std::uint64_t cap, bool as_json)
{
    solver::BoundOptions opts;
    opts.cap = cap;
    if (layer == 0) layer = degree + 2;
    if (q == 0) q = degree + 1;
    const std::uint64_t s = solver::step_bound(rank, layer, q, opts);
    const json j = {{"rank", rank}, {"layer_m", layer}, {"q", q}, {"step", s}};
    print(j, as_json, std::to_string(s) + "\n");
    return kOk;
}

int cmd_integral(const OdeInput& in, bool as_json)
{
    solver::SearchOptions opts;
    const auto ode = load_ode(in, opts);
    const auto moved = opts.initial_point ? integral::translate_ode(ode, *opts.initial_point) : ode;
    const auto qv = integral::orthogonalize(moved, opts.orthogonal);
    const auto phi = integral::phi_family(moved.rank, qv);
    const auto q = integral::first_integral(phi);
    const unsigned r = moved.rank;
    const auto& basis = poly::variable_basis(r, std::max(1u, phi.checked_degree));
    json jphi = json::object();
    std::string text = "orthogonal:\n";
    for (unsigned i = 0; i < r; ++i) text += "  Q_" + std::to_string(i + 1) + " = " + poly::to_string(qv[i], r) + "\n";
    text += "derivatives:\n";
    for (const auto& [w, value] : phi.values) {
        if (value.is_zero()) continue;
        const std::string p = poly::to_string(value, r);
        jphi[basis.to_string(w)] = p;
        text += "  X_" + basis.to_string(w) + " Q = " + p + "\n";
    }
    const unsigned m = std::max(2u, 1 + q.max_variable_degree());
    text += "Q = " + poly::to_string(q, r) + "\nlayer m = " + std::to_string(m) + "\n";
    json jq = json::array();
    for (const auto& p : qv) jq.push_back(poly::to_string(p, r));
    const json j = {{"ode", integral::ode_to_json(moved)}, {"orthogonal", jq}, {"phi", jphi},
                    {"Q", poly::to_string(q, r)}, {"layer_m", m}};
    print(j, as_json, text);
    return kOk;
}

struct NumericConfig {
    std::string window;  // "T,h"
    std::string start;  // horizontal start, default origin
};

int cmd_solve(const OdeInput& in, solver::SearchOptions opts, const NumericConfig& numeric, const std::string& output,
              bool progress, bool as_json)
{
    const auto ode = load_ode(in, opts);
    if (progress) {
        opts.on_step = [](unsigned s, std::size_t rows, std::size_t cols, std::size_t kernel) {
            std::cerr << "step " << s << ": " << rows << " equations, " << cols << " unknowns, kernel " << kernel
                      << std::endl;
        };
    }
    const solver::Certificate cert = solver::find_certificate(ode, opts);
    json j = solver::certificate_to_json(cert);
    std::string text = certificate_text(cert);
    if (!numeric.window.empty()) {
        const auto parts = split(numeric.window, ',');
        if (parts.size() != 2) throw ParseError("--numeric-check expects T,h");
        std::vector<double> start;
        for (const auto& x : split(numeric.start, ',')) start.push_back(std::stod(x));
        const auto t = numeric::numeric_check(*cert.ode, cert.q, std::stod(parts[0]), std::stod(parts[1]), start);
        j["numeric"] = {{"max_residual", t.max_residual}, {"steps", t.steps}, {"finite", t.finite}, {"advisory", true}};
        char buf[128];
        std::snprintf(buf, sizeof buf, "numeric residual (advisory): %.3e over %zu steps%s\n", t.max_residual,
                      t.steps, t.finite ? "" : ", trajectory left the floating point range");
        text += buf;
    }
    if (!output.empty()) {
        std::ofstream out(output);
        if (!out) throw ParseError("cannot write " + output);
        out << solver::certificate_to_json(cert).dump(2) << "\n";
    }
    print(j, as_json, text);
    return cert.report.passed() ? kOk : kFailed;
}

int cmd_verify(const std::string& path, bool as_json)
{
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw ParseError(e.what());
    }
    const solver::Certificate cert = solver::certificate_from_json(j);
    json out = solver::report_to_json(cert.report);
    out["verified"] = cert.report.passed();
    print(out, as_json, report_text(cert.report) + (cert.report.passed() ? "verified\n" : "NOT verified\n"));
    return cert.report.passed() ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Abnormal lifts of polynomial ODE trajectories in free Carnot groups"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "machine readable output")->configurable(false);

    unsigned rank = 0, degree = 0, layer = 0, q = 0;
    std::uint64_t cap = solver::BoundOptions{}.cap;
    std::size_t basis_cap = hall::HallBasis::kDefaultCap;

    auto* hall_cmd = app.add_subcommand("hall", "list Hall words with their ad-factorizations");
    hall_cmd->add_option("rank,--rank", rank)->required()->check(CLI::Range(1u, 64u));
    hall_cmd->add_option("max_degree,--max-degree", degree)->required()->check(CLI::Range(1u, 64u));
    hall_cmd->add_option("--basis-cap", basis_cap, "largest basis listed")->check(CLI::PositiveNumber);

    auto* bound_cmd = app.add_subcommand("bound", "a priori step bound for rank r and ODE degree d");
    bound_cmd->add_option("rank,--rank", rank)->required();
    bound_cmd->add_option("degree,--degree,--max-degree", degree)->required();
    bound_cmd->add_option("--layer", layer, "layer m (default d + 2)");
    bound_cmd->add_option("--factor-degree", q, "degree of Q (default d + 1)");
    bound_cmd->add_option("--series-cap", cap, "largest step scanned");

    OdeInput ode_in;
    auto* integral_cmd = app.add_subcommand("integral", "first integral Q and its derivative table");
    add_ode_options(integral_cmd, ode_in);

    solver::SearchOptions search;
    bool no_elim = false, progress = false;
    NumericConfig numeric;
    std::string output;
    auto* solve_cmd = app.add_subcommand("solve", "search for a certificate step by step");
    add_ode_options(solve_cmd, ode_in);
    solve_cmd->add_option("--step-cap", search.step_cap, "largest step tried")->check(CLI::PositiveNumber);
    solve_cmd->add_flag("--no-elim", no_elim, "solve the unreduced system");
    solve_cmd->add_option("--numeric-check", numeric.window, "T,h: advisory RK4 drift of Q");
    solve_cmd->add_option("--numeric-start", numeric.start, "horizontal start for --numeric-check");
    solve_cmd->add_option("--output,-o", output, "also write the certificate JSON here");
    solve_cmd->add_flag("--progress", progress, "report every step tried on stderr");

    std::string cert_path;
    auto* verify_cmd = app.add_subcommand("verify", "re-check a certificate file");
    verify_cmd->add_option("certificate", cert_path)->required();

    for (auto* cmd : {hall_cmd, bound_cmd, integral_cmd, solve_cmd, verify_cmd}) {
        cmd->add_flag("--json", as_json, "machine readable output");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInput;
    }

    try {
        if (*hall_cmd) return cmd_hall(rank, degree, basis_cap, as_json);
        if (*bound_cmd) return cmd_bound(rank, degree, layer, q, cap, as_json);
        if (*integral_cmd) return cmd_integral(ode_in, as_json);
        if (*solve_cmd) {
            search.solve.eliminate_lambda = !no_elim;
            return cmd_solve(ode_in, search, numeric, output, progress, as_json);
        }
        if (*verify_cmd) return cmd_verify(cert_path, as_json);
    } catch (const ResourceError& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return kResource;
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInput;
    } catch (const DomainError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInput;
    } catch (const ContextMismatch& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInput;
    } catch (const InexactError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailed;
    }
    return kFailed;
}
