#pragma once

// Serial, index-free versions of the kernels in kernels.hpp. Quadratic and
// slow; kept as the comparison baseline for tests and benchmarks.

#include <span>
#include <vector>

#include "hdr/kernels.hpp"

namespace hdr::reference {

using kernels::Mask;

std::vector<double> nearest_distances(const PointCloud& queries, const PointCloud& targets);
double directed_hausdorff(const PointCloud& a, const PointCloud& b);
Mask dilate(const Grid& grid, const Mask& mask, double r);
Mask erode(const Grid& grid, const Mask& mask, double r);
Mask ball_union(const Grid& grid, const PointCloud& centers, double r);
Mask isolated_from(const PointCloud& candidates, const PointCloud& excluded, double r);
std::vector<double> kde(const PointCloud& sample, const KernelConfig& config, const PointCloud& queries);
std::vector<double> loo_log_likelihood(const PointCloud& sample, KernelKind kind, std::span<const double> precisions);

}  // namespace hdr::reference
