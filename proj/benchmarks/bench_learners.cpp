#include <random>

#include <benchmark/benchmark.h>

#include "ellipsotron/data.hpp"
#include "ellipsotron/learners.hpp"

using namespace ellipsotron;

namespace {

std::vector<Sample> make_stream(int n, int dim, int num_classes, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unit(0.1, 1.0);
    std::vector<Sample> stream;
    stream.reserve(n);
    for (int i = 0; i < n; ++i) {
        Sample s;
        s.id = std::to_string(i);
        s.features.resize(dim);
        for (double& v : s.features) v = gauss(rng);
        s.label = static_cast<int>(rng() % num_classes);
        PrecisionDiag q;
        q.entries.resize(dim);
        for (double& v : q.entries) v = unit(rng);
        s.precision = std::move(q);
        stream.push_back(std::move(s));
    }
    return stream;
}

void BM_ellipsotron_step(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    const int m = 20;
    auto stream = make_stream(256, dim, m, 1);
    WeightMatrix w = WeightMatrix::zeros(m, dim);
    std::size_t i = 0;
    for (auto _ : state) {
        const Sample& s = stream[i++ % stream.size()];
        auto r = ellipsotron_step(w, s.features, s.label, *s.precision, 1.0);
        benchmark::DoNotOptimize(r.weights);
        w = std::move(r.weights);
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ellipsotron_step)->Arg(100)->Arg(1000);

void BM_lean_step(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    const int m = 20;
    auto stream = make_stream(256, dim, m, 2);
    WeightMatrix w = WeightMatrix::zeros(m, dim);
    std::size_t i = 0;
    for (auto _ : state) {
        const Sample& s = stream[i++ % stream.size()];
        auto r = lean_pa_step(w, s.features, s.label, 1.0);
        benchmark::DoNotOptimize(r.weights);
        w = std::move(r.weights);
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_lean_step)->Arg(100)->Arg(1000);

void BM_run_online(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    auto stream = make_stream(n, 100, 20, 3);
    const WeightMatrix w0 = WeightMatrix::zeros(20, 100);
    for (auto _ : state) {
        auto r = run_online({LearnerKind::ellipsotron, 1.0, 1e-10}, stream, w0);
        benchmark::DoNotOptimize(r.weights);
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_run_online)->Arg(200)->Arg(1000);

void BM_generate_synthetic(benchmark::State& state) {
    SynthConfig cfg;
    cfg.samples_per_class = static_cast<int>(state.range(0));
    for (auto _ : state) {
        Dataset ds = generate_synthetic(cfg);
        benchmark::DoNotOptimize(ds.samples);
    }
}
BENCHMARK(BM_generate_synthetic)->Arg(10)->Arg(40);

}  // namespace

BENCHMARK_MAIN();
