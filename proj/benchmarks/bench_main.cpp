#include <random>

#include <benchmark/benchmark.h>

#include "hbl/datum_io.hpp"
#include "hbl/engine.hpp"
#include "hbl/explore.hpp"
#include "hbl/subspace.hpp"

namespace {

hbl::BLDatum fixture(const char* name) {
  return hbl::load_datum(std::string(HBL_FIXTURE_DIR) + "/" + name).datum.value();
}

hbl::RatMatrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& g) {
  std::uniform_int_distribution<long> num(-9, 9), den(1, 5);
  hbl::RatMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      hbl::Rat q(num(g), den(g));
      q.canonicalize();
      m(i, j) = q;
    }
  return m;
}

void BM_Rref(benchmark::State& state) {
  std::mt19937_64 g(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  hbl::RatMatrix m = random_matrix(n, n, g);
  for (auto _ : state) benchmark::DoNotOptimize(hbl::rref(m));
}
BENCHMARK(BM_Rref)->Arg(4)->Arg(8)->Arg(16);

void BM_Scan(benchmark::State& state) {
  hbl::BLDatum d = fixture("lw4.json");
  std::vector<hbl::RatMatrix> maps;
  for (const auto& f : d.factors) maps.push_back(f.map);
  const auto p = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(hbl::scan_view(maps, d.n, p, 1));
}
BENCHMARK(BM_Scan)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_Decide(benchmark::State& state, const char* name) {
  hbl::BLDatum d = fixture(name);
  for (auto _ : state) benchmark::DoNotOptimize(hbl::decide(d));
}
BENCHMARK_CAPTURE(BM_Decide, young, "young.json")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Decide, lw4, "lw4.json")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Decide, lw3_infeasible, "lw3_infeasible.json")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Decide, gut_young, "gut_young.json")->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
