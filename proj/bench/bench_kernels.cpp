#include <benchmark/benchmark.h>

#include "subhol/examples.hpp"
#include "subhol/holonomy.hpp"

using namespace subhol;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::parallel : Execution::serial; }

void BM_Curvature(benchmark::State& state) {
  const ContactGeometry geo(to_structure(build_example2(2)));
  for (auto _ : state) benchmark::DoNotOptimize(schouten_curvature(geo, mode(state)));
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}

void BM_TransportBatch(benchmark::State& state) {
  const ContactGeometry geo(to_structure(build_example2(2)));
  const NumericContact nc(geo);
  const NumericConnection conn(geo.extended_connection(geo.tau()));
  const Vector x = Vector::Zero(Eigen::Index(geo.n()));
  std::vector<Path> paths;
  for (std::uint64_t i = 0; i < 64; ++i) paths.push_back(random_frame_path(nc, x, 0.2, true, stream_seed(5, i)));
  for (auto _ : state) benchmark::DoNotOptimize(transport_batch(nc, conn, paths, 1e-10, mode(state)));
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}

void BM_AmbroseSinger(benchmark::State& state) {
  const ContactGeometry geo(to_structure(build_example1(3)));
  const NumericContact nc(geo);
  const Vector x = Vector::Zero(Eigen::Index(geo.n()));
  SamplingOptions opt;
  opt.execution = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(ambrose_singer_algebra(geo, nc, x, HolonomyMode::adapted, opt));
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}

}  // namespace

BENCHMARK(BM_Curvature)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TransportBatch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AmbroseSinger)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
