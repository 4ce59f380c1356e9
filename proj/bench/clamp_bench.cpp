// Serial early-exit scan versus the OpenMP full scan on a six-limb SE(3)
// segment. "far" places the sensed state off the path so both kernels visit
// every sample; "near" lets the serial kernel stop early.

#include <benchmark/benchmark.h>

#include "sphereclamp/metric_core.hpp"
#include "sphereclamp/multi_ee.hpp"

namespace {

using namespace sphereclamp;

struct Fixture {
  MultiPose start;
  MultiPose finish;
  MultiPose near;
  MultiPose far;
  StackedMetric metric;
};

Fixture make_fixture() {
  std::vector<std::string> ids;
  std::vector<Pose> s, f, far;
  for (int i = 0; i < 6; ++i) {
    ids.push_back("limb" + std::to_string(i));
    const Eigen::Vector3d base(100.0 * i, 0.0, 0.0);
    s.emplace_back(base, Rotation::identity());
    f.emplace_back(base + Eigen::Vector3d(200.0, 100.0, -50.0), Rotation::rot_z(1.2));
    far.emplace_back(base + Eigen::Vector3d(0.0, 0.0, 500.0), Rotation::identity());
  }
  MultiPose start(ids, s);
  MultiPose finish(ids, f);
  MultiPose near = stacked_interp(0.3, start, finish);
  return {start, finish, near, MultiPose(ids, far),
          StackedMetric(MultiMetricParams::uniform(6, Se3MetricParams{20.0, 0.3}))};
}

const Fixture& fixture() {
  static const Fixture fx = make_fixture();
  return fx;
}

template <ScanPolicy kPolicy>
void BM_Clamp(benchmark::State& state, bool far) {
  const Fixture& fx = fixture();
  const int samples = static_cast<int>(state.range(0));
  const MultiPose& sensed = far ? fx.far : fx.near;
  for (auto _ : state) {
    auto out = hypersphere_clamp(sensed, fx.start, fx.finish, StackedInterp{}, fx.metric, samples,
                                 kPolicy);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * samples);
}

void BM_SerialFar(benchmark::State& s) { BM_Clamp<ScanPolicy::kSerial>(s, true); }
void BM_ParallelFar(benchmark::State& s) { BM_Clamp<ScanPolicy::kParallel>(s, true); }
void BM_SerialNear(benchmark::State& s) { BM_Clamp<ScanPolicy::kSerial>(s, false); }
void BM_ParallelNear(benchmark::State& s) { BM_Clamp<ScanPolicy::kParallel>(s, false); }

BENCHMARK(BM_SerialFar)->Arg(1'000)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ParallelFar)->Arg(1'000)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SerialNear)->Arg(1'000)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ParallelNear)->Arg(1'000)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
