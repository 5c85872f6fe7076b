#pragma once

// OpenMP-parallel kernels behind the morphology, density and estimator
// modules. Each has a serial brute-force twin in reference.hpp that the tests
// compare against.

#include <cstdint>
#include <span>
#include <vector>

#include "hdr/grid.hpp"
#include "hdr/kernel.hpp"
#include "hdr/manifold.hpp"
#include "hdr/neighbor_index.hpp"

namespace hdr::kernels {

using Mask = std::vector<std::uint8_t>;

/// Distance from every query to its nearest indexed point.
std::vector<double> nearest_distances(const PointCloud& queries, const NeighborIndex& targets);

/// sup_{a in A} d(a, B); B must be non-empty.
double directed_hausdorff(const PointCloud& a, const PointCloud& b);

/// Node g set iff some set node lies within r.
Mask dilate(const Grid& grid, const Mask& mask, double r);

/// Node g set iff every node within r is set.
Mask erode(const Grid& grid, const Mask& mask, double r);

/// Node g set iff it lies within r of some center.
Mask ball_union(const Grid& grid, const PointCloud& centers, double r);

/// flags[i] = 1 iff no point of `excluded` lies within r of candidates[i].
Mask isolated_from(const PointCloud& candidates, const PointCloud& excluded, double r);

/// (1/n) sum_i K(x, X_i) for every query.
std::vector<double> kde(const PointCloud& sample, const KernelConfig& config, const PointCloud& queries);

/// Leave-one-out log-likelihood sum_i log f_{n,-i}(X_i) for each precision.
/// Terms more than e^-40 below a row's largest term are dropped.
std::vector<double> loo_log_likelihood(const PointCloud& sample, KernelKind kind, std::span<const double> precisions);

}  // namespace hdr::kernels
