#include <benchmark/benchmark.h>

#include "echowall/cayley_menger.hpp"
#include "echowall/sampling.hpp"

using namespace echowall;
using Q = Rational;

namespace {

template <class S>
struct Fixture {
  std::vector<Vec<S>> mics;
  std::vector<S> matched;
  std::vector<S> mismatched;
};

template <class S>
Fixture<S> make_fixture() {
  Rng rng = rng_for(7, 0);
  Fixture<S> f;
  for (int i = 0; i < 4; ++i) {
    Vec<S> m(3);
    for (int k = 0; k < 3; ++k) {
      if constexpr (scalar_traits<S>::exact)
        m[k] = random_rational(rng, 4, 10);
      else
        m[k] = sample_uniform<double>(rng, -4, 4);
    }
    f.mics.push_back(std::move(m));
  }
  Vec<S> s1(3), s2(3);
  for (int k = 0; k < 3; ++k) {
    if constexpr (scalar_traits<S>::exact) {
      s1[k] = random_rational(rng, 8, 10);
      s2[k] = random_rational(rng, 8, 10);
    } else {
      s1[k] = sample_uniform<double>(rng, -8, 8);
      s2[k] = sample_uniform<double>(rng, -8, 8);
    }
  }
  for (const Vec<S>& m : f.mics) f.matched.push_back((s1 - m).norm2());
  f.mismatched = f.matched;
  f.mismatched[2] = (s2 - f.mics[2]).norm2();
  return f;
}

}  // namespace

static void BM_MatchingDetExactMatched(benchmark::State& state) {
  Fixture<Q> f = make_fixture<Q>();
  MicGram<Q> gram = MicGram<Q>::from_points(f.mics);
  for (auto _ : state) {
    Q v = cm_det(f.matched, gram);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_MatchingDetExactMatched);

static void BM_MatchingDetExactMismatched(benchmark::State& state) {
  Fixture<Q> f = make_fixture<Q>();
  MicGram<Q> gram = MicGram<Q>::from_points(f.mics);
  for (auto _ : state) {
    Q v = cm_det(f.mismatched, gram);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_MatchingDetExactMismatched);

static void BM_MatchingResidualFloat(benchmark::State& state) {
  Fixture<double> f = make_fixture<double>();
  MicGram<double> gram = MicGram<double>::from_points(f.mics);
  for (auto _ : state) {
    double v = cm_residual(f.mismatched, gram);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_MatchingResidualFloat);
