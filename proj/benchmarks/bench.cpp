#include <benchmark/benchmark.h>

#include <random>

#include "liejet/linearize.hpp"
#include "liejet/sl2.hpp"
#include "liejet/symplectic.hpp"

using namespace liejet;
using Q = Rational;

namespace {

// strip the constant and linear parts so identity-linear-part maps stay valid
Jet<Q> higher_part(const Jet<Q>& f) { return f - f.truncated(1); }

Jet<Q> random_jet(std::mt19937& rng, int nvars, int order, int terms) {
    Jet<Q> f(nvars, order);
    for (int t = 0; t < terms; ++t) {
        Mono m(nvars, 0);
        int budget = static_cast<int>(rng() % (order + 1));
        for (int i = 0; i < nvars && budget > 0; ++i) {
            int e = static_cast<int>(rng() % (budget + 1));
            m[i] = e;
            budget -= e;
        }
        Q c(static_cast<long>(rng() % 19) - 9, static_cast<long>(rng() % 7) + 1);
        c.canonicalize();
        f.add_term(m, c);
    }
    return f;
}

void bm_jet_multiply(benchmark::State& state) {
    std::mt19937 rng(7);
    int n = static_cast<int>(state.range(0));
    int N = static_cast<int>(state.range(1));
    Jet<Q> a = random_jet(rng, n, N, 40);
    Jet<Q> b = random_jet(rng, n, N, 40);
    for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(bm_jet_multiply)->Args({3, 6})->Args({4, 5})->Args({6, 4});

void bm_compose(benchmark::State& state) {
    std::mt19937 rng(11);
    int n = 3, N = static_cast<int>(state.range(0));
    PolyMap<Q> m = PolyMap<Q>::identity(n, N);
    std::vector<Jet<Q>> comps;
    for (int i = 0; i < n; ++i) {
        Jet<Q> c = m.component(i) + higher_part(random_jet(rng, n, N, 10));
        comps.push_back(c);
    }
    PolyMap<Q> p(comps);
    Jet<Q> f = random_jet(rng, n, N, 30);
    for (auto _ : state) benchmark::DoNotOptimize(f.compose(p.components()));
}
BENCHMARK(bm_compose)->Arg(4)->Arg(6);

void bm_linearize_sl2(benchmark::State& state) {
    int N = static_cast<int>(state.range(0));
    std::mt19937 rng(3);
    auto rep = sl2_base_representation<Q>(N);
    PolyMap<Q> m = PolyMap<Q>::identity(3, N);
    std::vector<Jet<Q>> comps;
    for (int i = 0; i < 3; ++i) comps.push_back(m.component(i) + higher_part(random_jet(rng, 3, N, 6)));
    auto moved = pushforward_rep(rep, PolyMap<Q>(comps));
    for (auto _ : state) benchmark::DoNotOptimize(linearize_rep(moved));
}
BENCHMARK(bm_linearize_sl2)->Arg(3)->Arg(4)->Arg(5);

void bm_darboux(benchmark::State& state) {
    int N = static_cast<int>(state.range(0));
    std::mt19937 rng(5);
    FormJet<Q> w0 = standard_symplectic_form<Q>(2, N);
    PolyMap<Q> m = PolyMap<Q>::identity(4, N);
    std::vector<Jet<Q>> comps;
    for (int i = 0; i < 4; ++i) comps.push_back(m.component(i) + higher_part(random_jet(rng, 4, N, 4)));
    FormJet<Q> w = pullback(w0, PolyMap<Q>(comps));
    for (auto _ : state) benchmark::DoNotOptimize(darboux(w));
}
BENCHMARK(bm_darboux)->Arg(3)->Arg(4);

} // namespace

BENCHMARK_MAIN();
