#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "hdr/manifold.hpp"
#include "hdr/neighbor_index.hpp"

namespace hdr {

struct BoundingBox {
    std::vector<double> lo;
    std::vector<double> hi;
};

struct GridSpec {
    ManifoldKind kind;
    std::size_t resolution = 0;  ///< target node count
    std::optional<BoundingBox> box;  ///< required for Euclidean grids
    std::uint64_t probe_seed = 0x9d15;  ///< seed of the dispersion probes
};

/// Quasi-uniform node set with quadrature weights and a post hoc dispersion
/// estimate. Immutable once built; share through `std::shared_ptr<const Grid>`.
class Grid {
public:
    Grid(ManifoldKind kind, PointCloud nodes, std::vector<double> weights, std::optional<BoundingBox> box);

    const ManifoldKind& kind() const { return nodes_.kind(); }
    const PointCloud& nodes() const { return nodes_; }
    std::size_t size() const { return nodes_.size(); }
    const std::vector<double>& weights() const { return weights_; }
    const NeighborIndex& index() const { return index_; }
    const std::optional<BoundingBox>& box() const { return box_; }

    /// Max distance from a manifold point to its nearest node (random-probe estimate).
    double dispersion() const { return dispersion_; }
    void set_dispersion(double d) { dispersion_ = d; }

    /// Link radius for treating two nodes as grid neighbours.
    double neighbor_radius() const { return 2.0 * dispersion_; }

private:
    PointCloud nodes_;
    std::vector<double> weights_;
    std::optional<BoundingBox> box_;
    NeighborIndex index_;
    double dispersion_ = 0.0;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Fibonacci lattice on S^2, equiangular product grid on tori, regular grid
/// over the bounding box for R^d. Dispersion is estimated from 10*resolution
/// uniform probes.
GridPtr build_grid(const GridSpec& spec);

/// Fibonacci lattice node positions only.
PointCloud fibonacci_sphere(std::size_t n);

/// Estimate of the dispersion of `nodes` from `probes` uniform random points.
double estimate_dispersion(const Grid& grid, std::size_t probes, std::uint64_t seed);

}  // namespace hdr
