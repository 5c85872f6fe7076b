#include "hdr/grid.hpp"

#include <algorithm>
#include <cmath>

#include "hdr/error.hpp"
#include "hdr/kernels.hpp"
#include "hdr/sampling.hpp"

namespace hdr {

Grid::Grid(ManifoldKind kind, PointCloud nodes, std::vector<double> weights, std::optional<BoundingBox> box)
    : nodes_(std::move(nodes)), weights_(std::move(weights)), box_(std::move(box)), index_(nodes_) {
    if (!(nodes_.kind() == kind)) throw DomainError("grid nodes live on a different manifold");
    if (weights_.size() != nodes_.size()) throw DomainError("one quadrature weight per node required");
}

PointCloud fibonacci_sphere(std::size_t n) {
    PointCloud out(ManifoldKind::sphere2());
    out.reserve(n);
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < n; ++i) {
        const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n);
        const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * static_cast<double>(i);
        const double x[3] = {s * std::cos(phi), s * std::sin(phi), z};
        out.push_back_raw(x);
    }
    return out;
}

namespace {

// Per-axis counts whose product is close to the target, never below it by more
// than a factor of two.
std::size_t per_axis(std::size_t resolution, int d) {
    auto m = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(resolution), 1.0 / d)));
    m = std::max<std::size_t>(m, 1);
    while (2.0 * std::pow(static_cast<double>(m), d) < static_cast<double>(resolution)) ++m;
    return m;
}

void product_grid(std::size_t m, int d, const std::vector<double>& lo, const std::vector<double>& step,
                  bool centered, PointCloud& out) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
    std::vector<double> x(static_cast<std::size_t>(d));
    for (;;) {
        for (int a = 0; a < d; ++a) {
            x[a] = lo[a] + (static_cast<double>(idx[a]) + (centered ? 0.5 : 0.0)) * step[a];
        }
        out.push_back_raw(x);
        int a = 0;
        for (; a < d; ++a) {
            if (++idx[a] < m) break;
            idx[a] = 0;
        }
        if (a == d) break;
    }
}

}  // namespace

GridPtr build_grid(const GridSpec& spec) {
    const ManifoldKind& kind = spec.kind;
    if (spec.resolution < 4) throw ConfigError("grid resolution must be at least 4");
    std::shared_ptr<Grid> grid;

    switch (kind.tag()) {
        case ManifoldKind::Tag::Sphere2: {
            PointCloud nodes = fibonacci_sphere(spec.resolution);
            std::vector<double> w(nodes.size(), 4.0 * kPi / static_cast<double>(nodes.size()));
            grid = std::make_shared<Grid>(kind, std::move(nodes), std::move(w), std::nullopt);
            break;
        }
        case ManifoldKind::Tag::Circle:
        case ManifoldKind::Tag::Torus: {
            const int d = kind.dim();
            const std::size_t m = per_axis(spec.resolution, d);
            PointCloud nodes(kind);
            nodes.reserve(static_cast<std::size_t>(std::pow(static_cast<double>(m), d)));
            const double step = kTwoPi / static_cast<double>(m);
            product_grid(m, d, std::vector<double>(d, 0.0), std::vector<double>(d, step), false, nodes);
            std::vector<double> w(nodes.size(), std::pow(step, d));
            grid = std::make_shared<Grid>(kind, std::move(nodes), std::move(w), std::nullopt);
            break;
        }
        case ManifoldKind::Tag::Euclidean: {
            if (!spec.box) throw ConfigError("a Euclidean grid needs a bounding box");
            const int d = kind.dim();
            const BoundingBox& box = *spec.box;
            if (box.lo.size() != static_cast<std::size_t>(d) || box.hi.size() != static_cast<std::size_t>(d)) {
                throw ConfigError("bounding box dimension does not match the manifold");
            }
            std::vector<double> step(d);
            double cell = 1.0;
            const std::size_t m = per_axis(spec.resolution, d);
            for (int a = 0; a < d; ++a) {
                if (!(box.hi[a] > box.lo[a])) throw ConfigError("bounding box must have positive extent");
                step[a] = (box.hi[a] - box.lo[a]) / static_cast<double>(m);
                cell *= step[a];
            }
            PointCloud nodes(kind);
            product_grid(m, d, box.lo, step, true, nodes);
            std::vector<double> w(nodes.size(), cell);
            grid = std::make_shared<Grid>(kind, std::move(nodes), std::move(w), box);
            break;
        }
    }
    grid->set_dispersion(estimate_dispersion(*grid, 10 * spec.resolution, spec.probe_seed));
    return grid;
}

double estimate_dispersion(const Grid& grid, std::size_t probes, std::uint64_t seed) {
    std::vector<double> lo, hi;
    if (grid.box()) {
        lo = grid.box()->lo;
        hi = grid.box()->hi;
    }
    const PointCloud samples = sample_uniform(grid.kind(), probes, seed, lo, hi);
    const std::vector<double> d = kernels::nearest_distances(samples, grid.index());
    double worst = 0.0;
    for (double v : d) worst = std::max(worst, v);
    return worst;
}

}  // namespace hdr
