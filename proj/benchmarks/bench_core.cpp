#include <benchmark/benchmark.h>

#include <random>

#include "orbitope/invariants.hpp"
#include "orbitope/lifts.hpp"
#include "orbitope/relaxations.hpp"

using namespace orbitope;

namespace {

CubeFunction random_fn(int n, std::mt19937_64& rng, int terms) {
  CubeFunction f(n);
  for (int t = 0; t < terms; ++t)
    f = f + CubeFunction::monomial(SubsetMask(static_cast<std::uint32_t>(rng()) & ((1u << n) - 1), n),
                                   make_rational(static_cast<int>(rng() % 9) - 4));
  return f;
}

void BM_FunctionMultiply(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(7);
  CubeFunction f = random_fn(n, rng, 24), g = random_fn(n, rng, 24);
  for (auto _ : state) {
    auto h = multiply(f, g);
    benchmark::DoNotOptimize(h);
  }
}
BENCHMARK(BM_FunctionMultiply)->Arg(8)->Arg(12)->Arg(16);

void BM_MomentMatrix(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto L = parity_separating_functional(n);
  for (auto _ : state) {
    auto mm = moment_matrix(L, 2);
    benchmark::DoNotOptimize(mm);
  }
}
BENCHMARK(BM_MomentMatrix)->Arg(8)->Arg(12);

void BM_ExactPsdCheck(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto L = parity_separating_functional(n);
  auto mm = moment_matrix(L, 2);
  for (auto _ : state) {
    auto verdict = psd_check_exact(mm.M);
    benchmark::DoNotOptimize(verdict);
  }
}
BENCHMARK(BM_ExactPsdCheck)->Arg(8)->Arg(10);

void BM_SolveElliptope(benchmark::State& state) {
  SdpProblem p = lift_maximization_problem(square_lift_fixture(),
                                           {make_rational(1), make_rational(0)});
  for (auto _ : state) {
    auto sol = solve(p);
    benchmark::DoNotOptimize(sol);
  }
}
BENCHMARK(BM_SolveElliptope);

void BM_IrreducibilityGrade(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto v = irreducibility_check(n / 2, GroupSpec::g_cube(n), n, Domain::Cube, 1);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_IrreducibilityGrade)->Arg(4)->Arg(6);

void BM_SosSearchSquareFacet(benchmark::State& state) {
  CubeSubspace V{2, {CubeFunction::constant(2, make_rational(1)),
                     CubeFunction::monomial(SubsetMask::from_indices({1}, 2)),
                     CubeFunction::monomial(SubsetMask::from_indices({2}, 2))}};
  CubeFunction target = CubeFunction::constant(2, make_rational(1)) -
                        CubeFunction::monomial(SubsetMask::from_indices({1}, 2));
  auto X = SignVector::all(2);
  for (auto _ : state) {
    auto out = sos_certificate_search(target, V, X);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_SosSearchSquareFacet);

}  // namespace

BENCHMARK_MAIN();
