// Serial reference vs OpenMP kernels on the largest benchmark meshes.
#include <benchmark/benchmark.h>
#include <omp.h>

#include "plateforge/analysis.hpp"

using namespace plateforge;

namespace {

struct Problem {
    PolyMesh mesh;
    MaterialModel mat;
    std::vector<BoundaryCondition> bcs;
};

const Problem& circle_problem() {
    static const Problem p = [] {
        Problem q;
        q.mesh = generate_voronoi_mesh(DomainSpec::circle({0, 0}, 1), 1024, DensityField{}, 100, 42);
        q.mat.E = 10.92e6;
        q.mat.nu = 0.3;
        q.mat.t = 0.1;
        q.bcs = {{Selector::circle({0, 0}, 1, 1e-7), {Dof::W, Dof::BetaX, Dof::BetaY}}};
        return q;
    }();
    return p;
}

void BM_AssembleSerial(benchmark::State& st) {
    const Problem& p = circle_problem();
    for (auto _ : st) benchmark::DoNotOptimize(assemble_global_serial(p.mesh, p.mat, {UniformPressure{1.0}}, p.bcs));
}

void BM_AssembleParallel(benchmark::State& st) {
    const Problem& p = circle_problem();
    AssemblyOptions o;
    o.threads = static_cast<int>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(assemble_global(p.mesh, p.mat, {UniformPressure{1.0}}, p.bcs, o));
}

void BM_NormsSerial(benchmark::State& st) {
    const Problem& p = circle_problem();
    const FieldResult sol = solve(assemble_global(p.mesh, p.mat, {UniformPressure{1.0}}, p.bcs));
    const ExactSolution ex = clamped_circular_solution(1.0, p.mat.E, p.mat.nu, p.mat.t, p.mat.k);
    for (auto _ : st) benchmark::DoNotOptimize(error_norms_serial(sol, ex, p.mesh, p.mat));
}

void BM_NormsParallel(benchmark::State& st) {
    const Problem& p = circle_problem();
    const FieldResult sol = solve(assemble_global(p.mesh, p.mat, {UniformPressure{1.0}}, p.bcs));
    const ExactSolution ex = clamped_circular_solution(1.0, p.mat.E, p.mat.nu, p.mat.t, p.mat.k);
    NormOptions o;
    o.threads = static_cast<int>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(error_norms(sol, ex, p.mesh, p.mat, o));
}

void BM_Solve(benchmark::State& st) {
    const Problem& p = circle_problem();
    const GlobalSystem sys = assemble_global(p.mesh, p.mat, {UniformPressure{1.0}}, p.bcs);
    for (auto _ : st) benchmark::DoNotOptimize(solve(sys));
}

void thread_args(benchmark::internal::Benchmark* b) {
    for (int t = 2; t <= omp_get_max_threads(); t *= 2) b->Arg(t);
    b->Arg(0);
}

}  // namespace

BENCHMARK(BM_AssembleSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AssembleParallel)->Apply(thread_args)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NormsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NormsParallel)->Apply(thread_args)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Solve)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
