// Serial vs OpenMP versions of the two parallel kernels: column candidate
// search and sweep evaluation. Both produce identical results.
#include <benchmark/benchmark.h>

#include "imcpack/baselines.hpp"
#include "imcpack/costmodel.hpp"

using namespace imcpack;

namespace {

Workload bench_workload(const char* name) {
    return load_workload(std::string(IMCPACK_BENCH_DATA_DIR) + "/workloads/" + name + ".json");
}

const char* const kWorkloads[] = {"resnet8", "ds_cnn", "mobilenet_v1_025", "autoencoder"};

void columns(benchmark::State& state, ExecPolicy policy) {
    const auto w = bench_workload(kWorkloads[state.range(0)]);
    auto arch = bundled_architecture("dimc22").arch;
    arch.Dh = static_cast<std::uint64_t>(state.range(1));
    arch.Dm = 4096;
    const auto tiles = generate_tile_pool(w, arch);
    const auto sts = generate_supertiles(tiles, arch);
    ColumnOptions opt;
    opt.policy = policy;
    for (auto _ : state) benchmark::DoNotOptimize(generate_columns(tiles, sts, arch, opt));
    state.SetLabel(w.name);
}

void sweep_points(benchmark::State& state, ExecPolicy policy) {
    const auto w = bench_workload(kWorkloads[state.range(0)]);
    const auto cfg = bundled_architecture("dimc22");
    SweepSpec spec;
    spec.dh_values = {1, 2, 4};
    spec.dm_values = {8, 32, 64, 128};
    spec.policy = policy;
    spec.pack.columns.policy = policy;
    for (auto _ : state) benchmark::DoNotOptimize(sweep(w, cfg.arch, cfg.cost, spec));
    state.SetLabel(w.name);
}

void BM_ColumnsSerial(benchmark::State& s) { columns(s, ExecPolicy::serial); }
void BM_ColumnsParallel(benchmark::State& s) { columns(s, ExecPolicy::parallel); }
void BM_SweepSerial(benchmark::State& s) { sweep_points(s, ExecPolicy::serial); }
void BM_SweepParallel(benchmark::State& s) { sweep_points(s, ExecPolicy::parallel); }

void column_args(benchmark::internal::Benchmark* b) {
    for (int w = 0; w < 4; ++w)
        for (int dh : {1, 4}) b->Args({w, dh});
}

}  // namespace

BENCHMARK(BM_ColumnsSerial)->Apply(column_args)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ColumnsParallel)->Apply(column_args)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepSerial)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
