#include <benchmark/benchmark.h>

#include <vector>

#include "morphkit/assign.hpp"
#include "morphkit/attack.hpp"
#include "morphkit/dictionary.hpp"
#include "morphkit/fixture.hpp"
#include "morphkit/flow_estimation.hpp"
#include "morphkit/metrics.hpp"
#include "morphkit/oracle.hpp"
#include "morphkit/rng.hpp"
#include "morphkit/synth.hpp"

using namespace morphkit;

namespace {

Image texture(int size, std::uint64_t seed) {
  IdentitySpec spec;
  spec.identity_seed = seed;
  spec.width = size;
  spec.height = size;
  spec.landmark = {size * 2 / 3, size / 2};
  return generate_identity(spec);
}

FlowField noise_field(int size, std::uint64_t seed, double scale) {
  CounterRng rng(seed);
  std::vector<double> h(static_cast<std::size_t>(size) * size), v(h.size());
  for (double& x : h) x = scale * rng.normal();
  for (double& x : v) x = scale * rng.normal();
  return FlowField(size, size, h, v);
}

void BM_Morph(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  const Image img = texture(size, 1);
  const FlowField f = noise_field(size, 2, 1.5);
  for (auto _ : state) benchmark::DoNotOptimize(morph(img, f));
  state.SetItemsProcessed(state.iterations() * size * size);
}
BENCHMARK(BM_Morph)->Arg(32)->Arg(64)->Arg(128);

void BM_EstimateFlow(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  const Image a = texture(size, 3);
  DeformationSpec spec;
  spec.center = {size * 2 / 3, size / 2};
  const Image b = morph(a, deformation_field(size, size, spec, 2.0));
  FlowEstimatorConfig cfg;
  cfg.convergence_epsilon = 1e-12;  // always run the full iteration count
  for (auto _ : state) benchmark::DoNotOptimize(estimate_flow(a, b, cfg));
}
BENCHMARK(BM_EstimateFlow)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_LearnBases(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  std::vector<TrainingPair> pairs;
  for (int i = 0; i < m; ++i) pairs.push_back({texture(32, 100 + i), noise_field(32, 200 + i, 1.0)});
  const TrainingMatrix t = assemble_matrix(pairs, RoiMask::inset(32, 32, 2));
  for (auto _ : state) benchmark::DoNotOptimize(learn_bases(t, 16));
}
BENCHMARK(BM_LearnBases)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_AssignProprietaryFlow(benchmark::State& state) {
  std::vector<TrainingPair> pairs;
  for (int i = 0; i < 64; ++i) pairs.push_back({texture(32, 300 + i), noise_field(32, 400 + i, 1.0)});
  const JointDictionary d = learn_bases(assemble_matrix(pairs, RoiMask::inset(32, 32, 2)), 16).dictionary;
  const Image y = texture(32, 999);
  const IntensitySpec spec{IntensityMode::L2Target, 100.0};
  for (auto _ : state) benchmark::DoNotOptimize(assign_proprietary_flow(y, d, spec));
}
BENCHMARK(BM_AssignProprietaryFlow);

void BM_Ssim(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  const Image a = texture(size, 5), b = texture(size, 6);
  const auto window = state.range(1) ? SsimWindow::Gaussian11 : SsimWindow::Uniform8;
  for (auto _ : state) benchmark::DoNotOptimize(ssim(a, b, window));
}
BENCHMARK(BM_Ssim)->Args({32, 0})->Args({32, 1})->Args({128, 0})->Args({128, 1});

void BM_Roc(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  CounterRng rng(7);
  ScoreSet s;
  for (std::size_t i = 0; i < n; ++i) s.genuine.push_back(1.0 + rng.normal());
  for (std::size_t i = 0; i < 4 * n; ++i) s.impostor.push_back(rng.normal());
  for (auto _ : state) benchmark::DoNotOptimize(roc(s));
  state.SetItemsProcessed(state.iterations() * 5 * n);
}
BENCHMARK(BM_Roc)->Arg(1000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_ToyClassify(benchmark::State& state) {
  const Fixture fx = make_fixture(FixtureSpec{});
  const ToyFrModel m = train_toy(fx.train);
  const Image& probe = fx.targets.front().image;
  for (auto _ : state) benchmark::DoNotOptimize(m.classify(probe));
}
BENCHMARK(BM_ToyClassify);

}  // namespace

BENCHMARK_MAIN();
