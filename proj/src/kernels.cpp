#include "hdr/kernels.hpp"

#include <algorithm>
#include <cmath>

#include <omp.h>

#include "hdr/error.hpp"

namespace hdr::kernels {

namespace {

using Index = std::ptrdiff_t;

Index ssize(std::size_t n) { return static_cast<Index>(n); }

PointCloud select(const PointCloud& points, const Mask& mask, bool value) {
    PointCloud out(points.kind());
    for (std::size_t i = 0; i < points.size(); ++i) {
        if ((mask[i] != 0) == value) out.push_back_raw(points[i]);
    }
    return out;
}

// Drop terms below exp(-kTruncation) of the row maximum.
constexpr double kTruncation = 40.0;

}  // namespace

std::vector<double> nearest_distances(const PointCloud& queries, const NeighborIndex& targets) {
    std::vector<double> out(queries.size());
#pragma omp parallel for schedule(dynamic, 256)
    for (Index i = 0; i < ssize(queries.size()); ++i) out[i] = targets.nearest(queries[i]).distance;
    return out;
}

double directed_hausdorff(const PointCloud& a, const PointCloud& b) {
    if (b.empty()) throw DomainError("directed Hausdorff distance to an empty set");
    const NeighborIndex index(b);
    double worst = 0.0;
#pragma omp parallel for schedule(dynamic, 256) reduction(max : worst)
    for (Index i = 0; i < ssize(a.size()); ++i) worst = std::max(worst, index.nearest(a[i]).distance);
    return worst;
}

Mask dilate(const Grid& grid, const Mask& mask, double r) {
    const PointCloud& nodes = grid.nodes();
    const NeighborIndex members(select(nodes, mask, true));
    Mask out(nodes.size(), 0);
    if (members.size() == 0) return out;
#pragma omp parallel for schedule(dynamic, 256)
    for (Index g = 0; g < ssize(nodes.size()); ++g) out[g] = members.any_within(nodes[g], r) ? 1 : 0;
    return out;
}

Mask erode(const Grid& grid, const Mask& mask, double r) {
    const PointCloud& nodes = grid.nodes();
    const NeighborIndex& index = grid.index();
    Mask out(nodes.size(), 0);
#pragma omp parallel for schedule(dynamic, 256)
    for (Index g = 0; g < ssize(nodes.size()); ++g) {
        if (!mask[g]) continue;
        bool inside = true;
        index.for_each_within(nodes[g], r, [&](std::size_t h, double) {
            if (!mask[h]) inside = false;
        });
        out[g] = inside ? 1 : 0;
    }
    return out;
}

Mask ball_union(const Grid& grid, const PointCloud& centers, double r) {
    const PointCloud& nodes = grid.nodes();
    Mask out(nodes.size(), 0);
    if (centers.empty()) return out;
    const NeighborIndex index(centers);
#pragma omp parallel for schedule(dynamic, 256)
    for (Index g = 0; g < ssize(nodes.size()); ++g) out[g] = index.any_within(nodes[g], r) ? 1 : 0;
    return out;
}

Mask isolated_from(const PointCloud& candidates, const PointCloud& excluded, double r) {
    Mask out(candidates.size(), 1);
    if (excluded.empty()) return out;
    const NeighborIndex index(excluded);
#pragma omp parallel for schedule(dynamic, 64)
    for (Index i = 0; i < ssize(candidates.size()); ++i) out[i] = index.any_within(candidates[i], r) ? 0 : 1;
    return out;
}

std::vector<double> kde(const PointCloud& sample, const KernelConfig& config, const PointCloud& queries) {
    if (sample.empty()) throw DomainError("kernel density estimate of an empty sample");
    const double c = config.precision();
    const double norm = std::exp(kernel_log_norm(config.kind, c, sample.kind().dim()));
    const double scale = norm / static_cast<double>(sample.size());
    std::vector<double> out(queries.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (Index q = 0; q < ssize(queries.size()); ++q) {
        double s = 0.0;
        const auto x = queries[q];
        for (std::size_t i = 0; i < sample.size(); ++i) s += std::exp(c * kernel_exponent(config.kind, x, sample[i]));
        out[q] = scale * s;
    }
    return out;
}

std::vector<double> loo_log_likelihood(const PointCloud& sample, KernelKind kind, std::span<const double> precisions) {
    const std::size_t n = sample.size();
    const std::size_t k = precisions.size();
    if (n < 2) throw DomainError("leave-one-out likelihood needs at least two points");
    const int dim = sample.kind().dim();
    std::vector<double> log_norm(k);
    for (std::size_t j = 0; j < k; ++j) log_norm[j] = kernel_log_norm(kind, precisions[j], dim);
    const double log_rest = std::log(static_cast<double>(n - 1));

    std::vector<double> total(k, 0.0);
#pragma omp parallel
    {
        std::vector<double> row(n);
        std::vector<double> local(k, 0.0);
#pragma omp for schedule(dynamic, 16)
        for (Index i = 0; i < ssize(n); ++i) {
            double top = -HUGE_VAL;
            for (std::size_t j = 0; j < n; ++j) {
                row[j] = kernel_exponent(kind, sample[i], sample[j]);
                if (j != static_cast<std::size_t>(i)) top = std::max(top, row[j]);
            }
            for (std::size_t m = 0; m < k; ++m) {
                const double c = precisions[m];
                const double floor = top - kTruncation / c;
                double s = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    if (j == static_cast<std::size_t>(i) || row[j] < floor) continue;
                    s += std::exp(c * (row[j] - top));
                }
                local[m] += c * top + std::log(s) + log_norm[m] - log_rest;
            }
        }
#pragma omp critical
        for (std::size_t m = 0; m < k; ++m) total[m] += local[m];
    }
    return total;
}

}  // namespace hdr::kernels
