#include "hdr/morphology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hdr/error.hpp"

namespace hdr {

BallUnionSet::BallUnionSet(ManifoldKind kind, double r) : centers(kind), radius(r) {
    if (!(r > 0.0)) throw DomainError("ball radius must be > 0");
}

BallUnionSet::BallUnionSet(PointCloud c, double r) : centers(std::move(c)), radius(r) {
    if (!(r > 0.0)) throw DomainError("ball radius must be > 0");
}

bool BallUnionSet::contains(std::span<const double> x) const {
    for (std::size_t i = 0; i < centers.size(); ++i) {
        if (distance(kind(), x, centers[i]) <= radius) return true;
    }
    return false;
}

nlohmann::json to_json(const BallUnionSet& s) {
    nlohmann::json centers = nlohmann::json::array();
    for (std::size_t i = 0; i < s.centers.size(); ++i) {
        const auto c = s.centers[i];
        centers.push_back(std::vector<double>(c.begin(), c.end()));
    }
    return {{"manifold", s.kind().name()}, {"dim", s.kind().dim()}, {"radius", s.radius}, {"centers", centers}};
}

GridSet::GridSet(GridPtr grid, kernels::Mask mask) : grid_(std::move(grid)), mask_(std::move(mask)) {
    if (!grid_) throw DomainError("grid set without a grid");
    if (mask_.size() != grid_->size()) throw DomainError("mask length must equal the grid node count");
}

GridSet GridSet::empty(GridPtr grid) {
    const std::size_t n = grid->size();
    return GridSet(std::move(grid), kernels::Mask(n, 0));
}

GridSet GridSet::full(GridPtr grid) {
    const std::size_t n = grid->size();
    return GridSet(std::move(grid), kernels::Mask(n, 1));
}

GridSet GridSet::discretize(GridPtr grid, const BallUnionSet& set) {
    if (!(grid->kind() == set.kind())) throw DomainError("ball union and grid live on different manifolds");
    kernels::Mask m = kernels::ball_union(*grid, set.centers, set.radius);
    return GridSet(std::move(grid), std::move(m));
}

std::size_t GridSet::count() const {
    return static_cast<std::size_t>(std::count_if(mask_.begin(), mask_.end(), [](auto v) { return v != 0; }));
}

GridSet GridSet::complement() const {
    kernels::Mask m(mask_.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = mask_[i] ? 0 : 1;
    return GridSet(grid_, std::move(m));
}

PointCloud GridSet::members() const {
    PointCloud out(grid_->kind());
    for (std::size_t i = 0; i < mask_.size(); ++i) {
        if (mask_[i]) out.push_back_raw(grid_->nodes()[i]);
    }
    return out;
}

namespace {

void same_grid(const GridSet& a, const GridSet& b) {
    if (a.grid() != b.grid()) throw DomainError("grid sets on different grids");
}

void check_radius(double r) {
    if (!(r > 0.0)) throw DomainError("morphology radius must be > 0");
}

void check_pair(const PointCloud& a, const PointCloud& b) {
    if (a.empty() || b.empty()) throw DomainError("distance between sets needs two non-empty sets");
    if (!(a.kind() == b.kind())) throw DomainError("point sets live on different manifolds");
}

std::size_t find(std::vector<std::size_t>& parent, std::size_t i) {
    while (parent[i] != i) {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    return i;
}

}  // namespace

bool GridSet::subset_of(const GridSet& other) const {
    same_grid(*this, other);
    for (std::size_t i = 0; i < mask_.size(); ++i) {
        if (mask_[i] && !other.mask_[i]) return false;
    }
    return true;
}

std::size_t GridSet::symmetric_difference(const GridSet& other) const {
    same_grid(*this, other);
    std::size_t n = 0;
    for (std::size_t i = 0; i < mask_.size(); ++i) n += (mask_[i] != 0) != (other.mask_[i] != 0);
    return n;
}

GridSet dilate(const GridSet& s, double r) {
    check_radius(r);
    return GridSet(s.grid(), kernels::dilate(*s.grid(), s.mask(), r));
}

GridSet erode(const GridSet& s, double r) {
    check_radius(r);
    return GridSet(s.grid(), kernels::erode(*s.grid(), s.mask(), r));
}

GridSet opening(const GridSet& s, double r) { return dilate(erode(s, r), r); }

double hausdorff_distance(const PointCloud& a, const PointCloud& b) {
    check_pair(a, b);
    return std::max(kernels::directed_hausdorff(a, b), kernels::directed_hausdorff(b, a));
}

double hausdorff_distance(const GridSet& a, const GridSet& b) {
    same_grid(a, b);
    return hausdorff_distance(a.members(), b.members());
}

double set_distance(const PointCloud& a, const PointCloud& b) {
    check_pair(a, b);
    const NeighborIndex index(b);
    const std::vector<double> d = kernels::nearest_distances(a, index);
    return *std::min_element(d.begin(), d.end());
}

std::size_t packing_number(const PointCloud& points, double eps) {
    if (!(eps > 0.0)) throw DomainError("packing radius must be > 0");
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool separated = true;
        for (std::size_t k : kept) {
            if (distance(points.kind(), points[i], points[k]) <= eps) {
                separated = false;
                break;
            }
        }
        if (separated) kept.push_back(i);
    }
    return kept.size();
}

double maximal_spacing(const GridSet& region, const PointCloud& sample) {
    if (region.is_empty()) throw DomainError("maximal spacing of an empty region");
    if (!sample.empty() && !(sample.kind() == region.grid()->kind())) {
        throw DomainError("sample and region live on different manifolds");
    }
    const PointCloud inside = region.members();
    PointCloud obstacles = region.complement().members();
    for (std::size_t i = 0; i < sample.size(); ++i) obstacles.push_back_raw(sample[i]);
    if (obstacles.empty()) return std::numeric_limits<double>::infinity();
    const NeighborIndex index(obstacles);
    const std::vector<double> d = kernels::nearest_distances(inside, index);
    return *std::max_element(d.begin(), d.end());
}

Components link_components(const PointCloud& points, double link) {
    const std::size_t n = points.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    if (n > 0) {
        const NeighborIndex index(points);
        for (std::size_t i = 0; i < n; ++i) {
            index.for_each_within(points[i], link, [&](std::size_t j, double) {
                if (j <= i) return;
                const std::size_t a = find(parent, i), b = find(parent, j);
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            });
        }
    }
    Components out;
    out.labels.assign(n, 0);
    std::vector<std::size_t> label_of_root(n, std::numeric_limits<std::size_t>::max());
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t& l = label_of_root[find(parent, i)];
        if (l == std::numeric_limits<std::size_t>::max()) l = out.count++;
        out.labels[i] = l;
    }
    return out;
}

Components grid_components(const GridSet& s) { return link_components(s.members(), s.grid()->neighbor_radius()); }

}  // namespace hdr
