#include <benchmark/benchmark.h>

#include "echowall/detector.hpp"
#include "echowall/sampling.hpp"
#include "echowall/simulator.hpp"

using namespace echowall;
using Q = Rational;

namespace {

template <class S>
RandomScene<S> bench_scene(int n_walls) {
  Rng rng = rng_for(11, static_cast<std::uint64_t>(n_walls));
  RandomSceneOptions opt;
  opt.n_walls = n_walls;
  return random_scene<S>(rng, opt);
}

}  // namespace

template <class S>
static void BM_SimulateDetectEvaluate(benchmark::State& state) {
  RandomScene<S> rs = bench_scene<S>(static_cast<int>(state.range(0)));
  Rng rng = rng_for(12, 0);
  PoseSampler sampler;
  Pose<S> pose = sample_pose<S>(rng, sampler, 3);
  std::vector<Vec<S>> mics = rs.config.mics_at(pose);
  for (auto _ : state) {
    EchoRecord<S> rec = simulate_echoes(rs.scene, rs.config, pose);
    DetectResult<S> det = detect(squared_distances(rec), mics, rs.scene.speaker_position);
    EvaluationReport<S> rep = evaluate(det.walls, rs.scene, rs.config, pose);
    benchmark::DoNotOptimize(rep.is_bad_position);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK_TEMPLATE(BM_SimulateDetectEvaluate, Rational)->Arg(3)->Arg(4)->Arg(5);
BENCHMARK_TEMPLATE(BM_SimulateDetectEvaluate, double)->Arg(3)->Arg(4)->Arg(5);
