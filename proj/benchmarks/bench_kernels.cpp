#include <benchmark/benchmark.h>

#include <random>

#include "hyperell/analytic.hpp"
#include "hyperell/charsum.hpp"
#include "hyperell/enumerate.hpp"
#include "hyperell/lfunc.hpp"
#include "hyperell/moments.hpp"

using namespace hyperell;

// character-symbol throughput: the hot kernel of every ensemble sweep
static void BM_JacobiSymbol_F3(benchmark::State& state) {
    auto f = Field::get(3);
    const int dP = int(state.range(0));
    const auto& primes = primes_of_degree(f, dP);
    std::vector<Poly> ds;
    std::mt19937_64 gen(7);
    while (ds.size() < 64) {
        Poly D = Poly::monic_from_index(f, 11, gen() % count_Mn(f, 11));
        if (is_squarefree(D)) ds.push_back(D);
    }
    size_t i = 0, j = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(jacobi_symbol(ds[i], primes[j]));
        if (++j == primes.size()) j = 0;
        if (++i == ds.size()) i = 0;
    }
}
BENCHMARK(BM_JacobiSymbol_F3)->Arg(4)->Arg(7)->Arg(10);

static void BM_JacobiSymbol_F5(benchmark::State& state) {
    auto f = Field::get(5);
    const int dP = int(state.range(0));
    const auto& primes = primes_of_degree(f, dP);
    std::vector<Poly> ds;
    std::mt19937_64 gen(7);
    while (ds.size() < 64) {
        Poly D = Poly::monic_from_index(f, 8, gen() % count_Mn(f, 8));
        if (is_squarefree(D)) ds.push_back(D);
    }
    size_t i = 0, j = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(jacobi_symbol(ds[i], primes[j]));
        if (++j == primes.size()) j = 0;
        if (++i == ds.size()) i = 0;
    }
}
BENCHMARK(BM_JacobiSymbol_F5)->Arg(4)->Arg(7);

// full L-polynomial construction (prime sweep + Newton recurrence)
static void BM_BuildLPoly(benchmark::State& state) {
    auto f = Field::get(3);
    const int n = int(state.range(0));
    PrimeSweep sweep(f, n - 1);
    std::vector<Poly> ds;
    std::mt19937_64 gen(13);
    while (ds.size() < 32) {
        Poly D = Poly::monic_from_index(f, n, gen() % count_Mn(f, n));
        if (is_squarefree(D)) ds.push_back(D);
    }
    size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_lpoly(sweep, ds[i], true));
        if (++i == ds.size()) i = 0;
    }
}
BENCHMARK(BM_BuildLPoly)->Arg(7)->Arg(9)->Arg(11);

static void BM_BofL(benchmark::State& state) {
    auto f = Field::get(3);
    ShiftConfig cfg{{1, 1}, {0.4, 1.1}, {0.0, 0.0}};
    std::vector<Poly> ls;
    for (uint64_t i = 0; i < count_Mn(f, 4); ++i) ls.push_back(Poly::monic_from_index(f, 4, i));
    size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(b_of_l(ls[i], cfg));
        if (++i == ls.size()) i = 0;
    }
}
BENCHMARK(BM_BofL);

static void BM_ResidueMainTerm(benchmark::State& state) {
    const int g = 200;
    ShiftConfig cfg{{1, 1}, {0.5 / g, 1.0 / g}, {0.0, 0.0}};
    std::vector<double> e;
    for (int i = 0; i <= 40; ++i) e.push_back(std::pow(0.4, i));
    for (auto _ : state) benchmark::DoNotOptimize(residue_main_term(cfg, g, e));
}
BENCHMARK(BM_ResidueMainTerm);

BENCHMARK_MAIN();
