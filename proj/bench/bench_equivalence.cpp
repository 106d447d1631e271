// Truth-table equivalence: row-by-row reference vs the bit-sliced kernel,
// serial and OpenMP.
#include <benchmark/benchmark.h>

#include <string>

#include "logex/semantics.hpp"
#include "logex/syntax.hpp"

using namespace logex;

namespace {

// A chain of n atoms in two equivalent shapes: (p1 -> p2) /\ ... vs its DNF-ish rewrite.
std::pair<Formula, Formula> chain(int n) {
  std::string a, b;
  for (int i = 1; i < n; ++i) {
    std::string x = "x" + std::to_string(i), y = "x" + std::to_string(i + 1);
    a += (a.empty() ? "" : " /\\ ") + std::string("(") + x + " -> " + y + ")";
    b += (b.empty() ? "" : " /\\ ") + std::string("(~") + x + " \\/ " + y + ")";
  }
  return {parse(a), parse(b)};
}

void BM_Reference(benchmark::State& state) {
  auto [a, b] = chain(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::equivalent(a, b));
}

void BM_KernelSerial(benchmark::State& state) {
  auto [a, b] = chain(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernel::equivalent(a, b, false));
}

void BM_KernelParallel(benchmark::State& state) {
  auto [a, b] = chain(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernel::equivalent(a, b, true));
}

}  // namespace

BENCHMARK(BM_Reference)->DenseRange(8, 16, 4)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_KernelSerial)->DenseRange(8, 20, 4)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_KernelParallel)->DenseRange(8, 20, 4)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
