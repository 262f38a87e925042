#include <benchmark/benchmark.h>

#include <omp.h>

#include "hornset/engine.hpp"
#include "hornset/syntax.hpp"

namespace {

// The successor-pair program plus the pair predicate of p and q.
const hornset::HornProgram& program() {
    static const hornset::HornProgram prog = [] {
        auto r = hornset::parse_program(R"(
constructors 0/0, s/1, :/2.
congruence :.1 ~ :.2.
p(s(s(X)):s(Y)) <- p(s(X):Y).
p(X:0).
q(s(X):s(X)) <- q(X:X).
q(0:X).
)");
        return hornset::intersect(*r.program, "p", "q").program;
    }();
    return prog;
}

void BM_ExtensionSerial(benchmark::State& state) {
    const auto depth = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(hornset::enumerate_extension_serial(program(), "q", depth));
}

void BM_ExtensionParallel(benchmark::State& state) {
    const auto depth = static_cast<std::size_t>(state.range(0));
    state.counters["threads"] = omp_get_max_threads();
    for (auto _ : state) benchmark::DoNotOptimize(hornset::enumerate_extension(program(), "q", depth));
}

void BM_ModelParallel(benchmark::State& state) {
    const auto depth = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(hornset::enumerate_model(program(), depth));
}

}  // namespace

BENCHMARK(BM_ExtensionSerial)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExtensionParallel)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ModelParallel)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
