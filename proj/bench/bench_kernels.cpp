// Parallel kernels against their serial references.

#include <map>

#include <benchmark/benchmark.h>

#include "hdr/density.hpp"
#include "hdr/grid.hpp"
#include "hdr/kernels.hpp"
#include "hdr/reference.hpp"
#include "hdr/sampling.hpp"

using namespace hdr;

namespace {

const GridPtr& sphere_grid() {
    static const GridPtr g = build_grid(GridSpec{ManifoldKind::sphere2(), 20000, {}, 1});
    return g;
}

const PointCloud& sample(std::size_t n) {
    static std::map<std::size_t, PointCloud> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, AnalyticMixture::two_vmf_benchmark().sample(n, 7)).first;
    return it->second;
}

kernels::Mask cap_mask() {
    const auto& g = *sphere_grid();
    kernels::Mask m(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) m[i] = g.nodes()[i][2] > 0.3 ? 1 : 0;
    return m;
}

void BM_hausdorff(benchmark::State& st) {
    const PointCloud& a = sample(static_cast<std::size_t>(st.range(0)));
    const PointCloud b = sample_uniform(ManifoldKind::sphere2(), a.size(), 3);
    for (auto _ : st) benchmark::DoNotOptimize(kernels::directed_hausdorff(a, b));
}
void BM_hausdorff_ref(benchmark::State& st) {
    const PointCloud& a = sample(static_cast<std::size_t>(st.range(0)));
    const PointCloud b = sample_uniform(ManifoldKind::sphere2(), a.size(), 3);
    for (auto _ : st) benchmark::DoNotOptimize(reference::directed_hausdorff(a, b));
}

void BM_dilate(benchmark::State& st) {
    const auto m = cap_mask();
    for (auto _ : st) benchmark::DoNotOptimize(kernels::dilate(*sphere_grid(), m, 0.1));
}
void BM_dilate_ref(benchmark::State& st) {
    const auto m = cap_mask();
    for (auto _ : st) benchmark::DoNotOptimize(reference::dilate(*sphere_grid(), m, 0.1));
}

void BM_erode(benchmark::State& st) {
    const auto m = cap_mask();
    for (auto _ : st) benchmark::DoNotOptimize(kernels::erode(*sphere_grid(), m, 0.1));
}
void BM_erode_ref(benchmark::State& st) {
    const auto m = cap_mask();
    for (auto _ : st) benchmark::DoNotOptimize(reference::erode(*sphere_grid(), m, 0.1));
}

void BM_isolated(benchmark::State& st) {
    const PointCloud& s = sample(static_cast<std::size_t>(st.range(0)));
    const PointCloud o = sample_uniform(ManifoldKind::sphere2(), s.size(), 5);
    for (auto _ : st) benchmark::DoNotOptimize(kernels::isolated_from(s, o, 0.05));
}
void BM_isolated_ref(benchmark::State& st) {
    const PointCloud& s = sample(static_cast<std::size_t>(st.range(0)));
    const PointCloud o = sample_uniform(ManifoldKind::sphere2(), s.size(), 5);
    for (auto _ : st) benchmark::DoNotOptimize(reference::isolated_from(s, o, 0.05));
}

void BM_kde(benchmark::State& st) {
    const PointCloud& s = sample(static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(kernels::kde(s, KernelConfig::vmf(20), sphere_grid()->nodes()));
}
void BM_kde_ref(benchmark::State& st) {
    const PointCloud& s = sample(static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(reference::kde(s, KernelConfig::vmf(20), sphere_grid()->nodes()));
}

void BM_loo(benchmark::State& st) {
    const PointCloud& s = sample(static_cast<std::size_t>(st.range(0)));
    const auto grid = log_spaced();
    for (auto _ : st) benchmark::DoNotOptimize(kernels::loo_log_likelihood(s, KernelKind::VonMisesFisherS2, grid));
}
void BM_loo_ref(benchmark::State& st) {
    const PointCloud& s = sample(static_cast<std::size_t>(st.range(0)));
    const auto grid = log_spaced();
    for (auto _ : st) benchmark::DoNotOptimize(reference::loo_log_likelihood(s, KernelKind::VonMisesFisherS2, grid));
}

}  // namespace

BENCHMARK(BM_hausdorff)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_hausdorff_ref)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_dilate)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_dilate_ref)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_erode)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_erode_ref)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_isolated)->Arg(1600)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_isolated_ref)->Arg(1600)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_kde)->Arg(1600)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_kde_ref)->Arg(1600)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_loo)->Arg(1600)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_loo_ref)->Arg(1600)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
