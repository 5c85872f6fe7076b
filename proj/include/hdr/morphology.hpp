#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "hdr/grid.hpp"
#include "hdr/kernels.hpp"
#include "hdr/manifold.hpp"

namespace hdr {

/// Union of closed geodesic balls of a common radius. Membership is exact.
/// No centers means the empty set.
struct BallUnionSet {
    BallUnionSet(ManifoldKind kind, double radius);
    BallUnionSet(PointCloud centers, double radius);

    PointCloud centers;
    double radius;

    const ManifoldKind& kind() const { return centers.kind(); }
    bool empty() const { return centers.empty(); }
    bool contains(std::span<const double> x) const;
};

nlohmann::json to_json(const BallUnionSet& s);

/// Boolean mask over the nodes of a shared grid.
class GridSet {
public:
    GridSet(GridPtr grid, kernels::Mask mask);

    static GridSet empty(GridPtr grid);
    static GridSet full(GridPtr grid);
    /// Nodes inside a ball union.
    static GridSet discretize(GridPtr grid, const BallUnionSet& set);

    const GridPtr& grid() const { return grid_; }
    const kernels::Mask& mask() const { return mask_; }
    bool contains(std::size_t node) const { return mask_[node] != 0; }
    std::size_t count() const;
    bool is_empty() const { return count() == 0; }

    GridSet complement() const;
    PointCloud members() const;
    bool subset_of(const GridSet& other) const;
    /// Nodes in exactly one of the two sets.
    std::size_t symmetric_difference(const GridSet& other) const;

    friend bool operator==(const GridSet& a, const GridSet& b) { return a.grid_ == b.grid_ && a.mask_ == b.mask_; }

private:
    GridPtr grid_;
    kernels::Mask mask_;
};

GridSet dilate(const GridSet& s, double r);
GridSet erode(const GridSet& s, double r);
/// Erosion followed by dilation.
GridSet opening(const GridSet& s, double r);

double hausdorff_distance(const PointCloud& a, const PointCloud& b);
double hausdorff_distance(const GridSet& a, const GridSet& b);

/// Smallest pairwise distance between the two sets.
double set_distance(const PointCloud& a, const PointCloud& b);

/// Size of a greedily built eps-separated subset (pairwise distances > eps).
std::size_t packing_number(const PointCloud& points, double eps);

/// Largest distance from a region node to the nearest sample point or
/// non-region node. Infinite when both are absent.
double maximal_spacing(const GridSet& region, const PointCloud& sample);

struct Components {
    std::size_t count = 0;
    std::vector<std::size_t> labels;  ///< numbered by first appearance
};

/// Components of the graph on `points` joining pairs with distance <= link.
Components link_components(const PointCloud& points, double link);

/// Components of a grid set, linking member nodes within the grid's neighbour
/// radius. Labels are aligned with `members()`.
Components grid_components(const GridSet& s);

}  // namespace hdr
