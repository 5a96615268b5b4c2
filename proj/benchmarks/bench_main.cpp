#include <map>
#include <random>

#include <benchmark/benchmark.h>

#include "linedraw/camera.hpp"
#include "linedraw/curvature.hpp"
#include "linedraw/dataset.hpp"
#include "linedraw/eval.hpp"
#include "linedraw/filter.hpp"
#include "linedraw/map_stack.hpp"
#include "linedraw/optimize.hpp"
#include "linedraw/primitives.hpp"
#include "linedraw/ranker.hpp"

namespace {

using namespace linedraw;
namespace prim = linedraw::primitives;

const TriangleMesh& torus_mesh() {
    static const TriangleMesh mesh = prim::remove_faces(
        prim::torus(1.0, 0.6, 128, 64), [](const Vec3& c) { return std::abs(c.z()) < 0.15 && c.x() > 0.0; });
    return mesh;
}

const MapStack& torus_maps(int size) {
    static std::map<int, MapStack> cache;
    auto it = cache.find(size);
    if (it == cache.end())
        it = cache.emplace(size, build_map_stack(torus_mesh(), default_camera(torus_mesh(), 30.0, 30.0, 2.5, size, size)))
                 .first;
    return it->second;
}

void bm_curvature(benchmark::State& state) {
    const TriangleMesh mesh = prim::icosphere(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(compute_curvature(mesh));
    state.counters["vertices"] = static_cast<double>(mesh.vertices.size());
}
BENCHMARK(bm_curvature)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void bm_map_stack(benchmark::State& state) {
    const int size = static_cast<int>(state.range(0));
    const Camera camera = default_camera(torus_mesh(), 30.0, 30.0, 2.5, size, size);
    for (auto _ : state) benchmark::DoNotOptimize(build_map_stack(torus_mesh(), camera));
}
BENCHMARK(bm_map_stack)->Arg(256)->Arg(768)->Unit(benchmark::kMillisecond);

void bm_compose(benchmark::State& state) {
    const MapStack& maps = torus_maps(static_cast<int>(state.range(0)));
    const ThresholdSet t{0.1, 0.3, 0.25, 0.15, true};
    for (auto _ : state) benchmark::DoNotOptimize(compose(maps, t));
}
BENCHMARK(bm_compose)->Arg(256)->Arg(768)->Unit(benchmark::kMicrosecond);

void bm_grad_thresholds(benchmark::State& state) {
    const MapStack& maps = torus_maps(static_cast<int>(state.range(0)));
    const ThresholdSet t{0.1, 0.3, 0.25, 0.15, true};
    ScalarImage upstream(maps.width, maps.height);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (double& v : upstream.pixels()) v = u(rng);
    for (auto _ : state) benchmark::DoNotOptimize(grad_thresholds(maps, t, upstream, std::nullopt));
}
BENCHMARK(bm_grad_thresholds)->Arg(256)->Arg(768)->Unit(benchmark::kMicrosecond);

void bm_optimize_fast(benchmark::State& state) {
    const MapStack& maps = torus_maps(256);
    const ReferenceScorer scorer(compose(maps, ThresholdSet{0.1, 0.3, 0.25, 0.15, false}));
    for (auto _ : state) benchmark::DoNotOptimize(optimize_thresholds(maps, scorer, std::nullopt, OptimizeConfig::fast()));
}
BENCHMARK(bm_optimize_fast)->Unit(benchmark::kMillisecond);

void bm_chamfer(benchmark::State& state) {
    const MapStack& maps = torus_maps(static_cast<int>(state.range(0)));
    const BinaryDrawing a = binarize(compose(maps, ThresholdSet{0.1, 0.3, 0.25, 0.15, true}));
    const BinaryDrawing b = binarize(compose(maps, ThresholdSet{0.5, 0.5, 0.5, 0.5, false}));
    for (auto _ : state) benchmark::DoNotOptimize(chamfer(a, b));
}
BENCHMARK(bm_chamfer)->Arg(256)->Arg(768)->Unit(benchmark::kMicrosecond);

void bm_select_distinct(benchmark::State& state) {
    const CandidateSet set = generate_candidates(torus_maps(128));
    for (auto _ : state) benchmark::DoNotOptimize(select_distinct(set.drawings, 8));
    state.counters["candidates"] = static_cast<double>(set.drawings.size());
}
BENCHMARK(bm_select_distinct)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
