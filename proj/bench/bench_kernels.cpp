#include "ablift/integral.hpp"
#include "ablift/solver.hpp"

#include <benchmark/benchmark.h>

using namespace ablift;

namespace {

struct Case {
    const char* ode;
    std::vector<Rational> point;
    unsigned step;
};

// 0: spiral, 1: earring, 2: translated Lorenz.
const Case& case_at(int i)
{
    static const std::vector<Case> cases{
        {"-x1 - x2; x1 - x2", {}, 11},
        {"x1^2 - x2^2; 2*x1*x2", {}, 13},
        {"10*x2 - 10*x1; 28*x1 - x2 - x1*x3; x1*x2 - 8/3*x3", {Rational(-1), Rational(0), Rational(0)}, 11}};
    return cases.at(static_cast<std::size_t>(i));
}

struct Input {
    unsigned rank, layer;
    poly::Polynomial q;
};

Input input_at(int i)
{
    const Case& c = case_at(i);
    auto ode = integral::parse_ode(c.ode);
    if (!c.point.empty()) ode = integral::translate_ode(ode, c.point);
    const auto q = integral::first_integral(integral::phi_family(ode.rank, integral::orthogonalize(ode)));
    return {ode.rank, std::max(2u, 1 + q.max_variable_degree()), q};
}

const solver::LinearSystem& system_at(int i)
{
    static std::map<int, solver::LinearSystem> memo;
    auto it = memo.find(i);
    if (it == memo.end()) {
        const Input in = input_at(i);
        it = memo.emplace(i, solver::build_system(in.rank, in.q, in.layer, case_at(i).step)).first;
    }
    return it->second;
}

void BM_BuildSystem(benchmark::State& state, sparse::Backend backend)
{
    const Input in = input_at(static_cast<int>(state.range(0)));
    const unsigned step = case_at(static_cast<int>(state.range(0))).step;
    for (auto _ : state) {
        auto sys = solver::build_system(in.rank, in.q, in.layer, step, backend);
        benchmark::DoNotOptimize(sys.matrix.rows.data());
    }
}

void BM_Kernel(benchmark::State& state, sparse::Backend backend)
{
    const auto reduced = solver::reduce(system_at(static_cast<int>(state.range(0))));
    state.counters["rows"] = static_cast<double>(reduced.matrix.rows.size());
    state.counters["nnz"] = static_cast<double>(reduced.matrix.nonzeros());
    for (auto _ : state) {
        auto k = sparse::kernel(reduced.matrix, backend);
        benchmark::DoNotOptimize(k.basis.data());
    }
}

}  // namespace

BENCHMARK_CAPTURE(BM_BuildSystem, serial, sparse::Backend::serial)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_BuildSystem, parallel, sparse::Backend::parallel)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Kernel, serial, sparse::Backend::serial)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Kernel, parallel, sparse::Backend::parallel)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
