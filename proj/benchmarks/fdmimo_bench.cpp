#include <benchmark/benchmark.h>

#include <fdmimo/fdmimo.hpp>

using namespace fdmimo;

namespace {

SampleMatrix noise(Eigen::Index ch, Eigen::Index T, std::uint64_t seed) {
  Rng rng(seed);
  SampleMatrix s(ch, T);
  for (Eigen::Index i = 0; i < ch; ++i) {
    for (Eigen::Index t = 0; t < T; ++t) s(i, t) = rng.normal();
  }
  return s;
}

void BM_DftSymbol(benchmark::State& state) {
  const SampleMatrix block = noise(17, state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(dft_symbol(block));
  state.SetItemsProcessed(state.iterations() * block.size());
}
BENCHMARK(BM_DftSymbol)->Arg(1000)->Arg(1024)->Arg(33000)->Arg(100000);

void BM_Filtfilt(benchmark::State& state) {
  const SampleMatrix x = noise(1, state.range(0), 2);
  std::vector<double> y(static_cast<std::size_t>(x.cols()));
  const ButterworthBandpass bp(BandpassSpec{}, 1000.0);
  for (auto _ : state) {
    bp.filtfilt({x.data(), static_cast<std::size_t>(x.cols())}, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * x.cols());
}
BENCHMARK(BM_Filtfilt)->Arg(10000)->Arg(1000000);

void BM_StareFrame(benchmark::State& state) {
  const Eigen::Index N = 17, P = state.range(0), M = 8;
  Rng rng(3);
  FrequencyFrame f;
  f.X = rng.complex_normal(P, M);
  f.Y = rng.complex_normal(N, P) * f.X + 0.3 * rng.complex_normal(N, M);
  const ComplexMatrix Hp = rng.complex_normal(N, P);
  StareConfig cfg;
  cfg.residual_tol = 0.0;
  const SpatialOperator op(montage_1020_17().graph, cfg.mu, cfg.rho);
  for (auto _ : state) benchmark::DoNotOptimize(stare_frame(f, Hp, op, cfg));
}
BENCHMARK(BM_StareFrame)->Arg(16)->Arg(64)->Arg(256);

void BM_EstimateSequence(benchmark::State& state) {
  SyntheticChannelSpec s;
  s.receivers = 17;
  s.sources = 32;
  s.frames = 8;
  for (Eigen::Index b = 0; b <= 30; ++b) s.bins.push_back(b);
  const auto g = montage_1020_17().graph;
  const auto d = gen_frames(gen_channel(s, g), 8, 10.0, 4);
  SequenceOptions o;
  o.method = static_cast<Method>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(estimate_sequence(d.frames, &g, o));
  state.SetLabel(std::string(to_string(o.method)));
}
BENCHMARK(BM_EstimateSequence)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
