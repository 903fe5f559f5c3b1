#include <benchmark/benchmark.h>

#include "qdesign/atlas.hpp"
#include "qdesign/design.hpp"
#include "qdesign/field.hpp"
#include "qdesign/random.hpp"
#include "qdesign/subspace.hpp"

using namespace qdesign;

static void BM_ExtensionMul(benchmark::State& state) {
  const ExtensionField f(GaloisField(2, 1), static_cast<int>(state.range(0)));
  Row x = f.primitive(), acc = f.one();
  for (auto _ : state) {
    acc = f.mul(acc, x);
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_ExtensionMul)->Arg(7)->Arg(14)->Arg(20);

static void BM_GrassmannianSweep(benchmark::State& state) {
  const VectorSpace V(2, static_cast<int>(state.range(0)));
  const Grassmannian g(V, 3);
  for (auto _ : state) {
    std::uint64_t n = 0;
    g.for_each([&](std::uint64_t, const Subspace& s) { n += s.rows[0]; });
    benchmark::DoNotOptimize(n);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}
BENCHMARK(BM_GrassmannianSweep)->Arg(6)->Arg(8);

static void BM_TryLabel(benchmark::State& state) {
  const OrbitAtlas atlas(FieldTower::build(2, 1, 7, 2));
  const Grassmannian g(atlas.tower().space(), 3);
  Rng rng(5);
  std::vector<Subspace> sample;
  for (int i = 0; i < 1024; ++i) sample.push_back(g.unrank(rng() % g.size()));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(atlas.try_label(sample[i++ & 1023]));
}
BENCHMARK(BM_TryLabel);

static void BM_VerifySmallGdd(benchmark::State& state) {
  const DesignInstance d = build_gdd(2, 3, 3, 2, parse_selection("2,3=1"));
  for (auto _ : state) benchmark::DoNotOptimize(verify_gdd(d).pass);
}
BENCHMARK(BM_VerifySmallGdd)->Unit(benchmark::kMillisecond);

static void BM_VerifySampled(benchmark::State& state) {
  const DesignInstance d = build_gdd(2, 7, 3, 2, parse_selection("2,1=1"));
  VerifyOptions o;
  o.sampled = true;
  o.samples = 100;
  for (auto _ : state) benchmark::DoNotOptimize(verify_gdd(d, o).pass);
}
BENCHMARK(BM_VerifySampled)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
