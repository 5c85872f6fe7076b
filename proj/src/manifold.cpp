#include "hdr/manifold.hpp"

#include <algorithm>
#include <cmath>

#include "hdr/error.hpp"

namespace hdr {

ManifoldKind ManifoldKind::torus(int d) {
    if (d < 1) throw DomainError("torus dimension must be >= 1");
    return d == 1 ? circle() : ManifoldKind(Tag::Torus, d);
}

ManifoldKind ManifoldKind::euclidean(int d) {
    if (d < 1) throw DomainError("euclidean dimension must be >= 1");
    return ManifoldKind(Tag::Euclidean, d);
}

ManifoldKind ManifoldKind::from_name(const std::string& name, int dim) {
    if (name == "circle") return circle();
    if (name == "sphere2" || name == "sphere") {
        if (dim != 2) throw DomainError("only the two-dimensional sphere is supported");
        return sphere2();
    }
    if (name == "torus") return torus(dim);
    if (name == "euclidean") return euclidean(dim);
    throw DomainError("unknown manifold '" + name + "'");
}

double ManifoldKind::diameter() const {
    switch (tag_) {
        case Tag::Circle:
        case Tag::Sphere2: return kPi;
        case Tag::Torus: return kPi * std::sqrt(static_cast<double>(dim_));
        case Tag::Euclidean: return HUGE_VAL;
    }
    return HUGE_VAL;
}

double ManifoldKind::volume() const {
    switch (tag_) {
        case Tag::Circle:
        case Tag::Torus: return std::pow(kTwoPi, dim_);
        case Tag::Sphere2: return 4.0 * kPi;
        case Tag::Euclidean: return HUGE_VAL;
    }
    return HUGE_VAL;
}

std::string ManifoldKind::name() const {
    switch (tag_) {
        case Tag::Circle: return "circle";
        case Tag::Sphere2: return "sphere2";
        case Tag::Torus: return "torus";
        case Tag::Euclidean: return "euclidean";
    }
    return "?";
}

double wrap_angle(double a) {
    double w = std::fmod(a, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    // fmod of a tiny negative number can round up to exactly 2π
    if (w >= kTwoPi) w = 0.0;
    return w;
}

double wrap_difference(double a) {
    double w = std::remainder(a, kTwoPi);
    return std::abs(w);
}

double distance(const ManifoldKind& kind, std::span<const double> x, std::span<const double> y) {
    switch (kind.tag()) {
        case ManifoldKind::Tag::Sphere2: {
            // atan2 form keeps precision for nearby and nearly antipodal points
            const double dot = x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
            const double cx = x[1] * y[2] - x[2] * y[1];
            const double cy = x[2] * y[0] - x[0] * y[2];
            const double cz = x[0] * y[1] - x[1] * y[0];
            return std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), std::clamp(dot, -1.0, 1.0));
        }
        case ManifoldKind::Tag::Circle:
            return wrap_difference(x[0] - y[0]);
        case ManifoldKind::Tag::Torus: {
            double s = 0.0;
            for (std::size_t k = 0; k < x.size(); ++k) {
                const double d = wrap_difference(x[k] - y[k]);
                s += d * d;
            }
            return std::sqrt(s);
        }
        case ManifoldKind::Tag::Euclidean: {
            double s = 0.0;
            for (std::size_t k = 0; k < x.size(); ++k) {
                const double d = x[k] - y[k];
                s += d * d;
            }
            return std::sqrt(s);
        }
    }
    return 0.0;
}

void canonicalize(const ManifoldKind& kind, std::span<double> coords) {
    if (coords.size() != kind.coord_size()) {
        throw DomainError("expected " + std::to_string(kind.coord_size()) + " coordinates for " +
                          kind.name() + ", got " + std::to_string(coords.size()));
    }
    for (double c : coords) {
        if (!std::isfinite(c)) throw DomainError("non-finite coordinate");
    }
    if (kind.is_angular()) {
        for (double& c : coords) c = wrap_angle(c);
    } else if (kind.tag() == ManifoldKind::Tag::Sphere2) {
        const double norm = std::sqrt(coords[0] * coords[0] + coords[1] * coords[1] + coords[2] * coords[2]);
        if (std::abs(norm - 1.0) > ManifoldPoint::kUnitTolerance) {
            throw DomainError("sphere point is not a unit vector (norm " + std::to_string(norm) + ")");
        }
        for (double& c : coords) c /= norm;
    }
}

ManifoldPoint::ManifoldPoint(ManifoldKind kind, std::vector<double> coords)
    : kind_(kind), coords_(std::move(coords)) {
    canonicalize(kind_, coords_);
}

ManifoldPoint ManifoldPoint::on_sphere(double x, double y, double z) {
    const double norm = std::sqrt(x * x + y * y + z * z);
    if (!(norm > 0.0) || !std::isfinite(norm)) throw DomainError("cannot normalize a zero vector");
    return ManifoldPoint(ManifoldKind::sphere2(), {x / norm, y / norm, z / norm});
}

double geodesic_distance(const ManifoldPoint& x, const ManifoldPoint& y) {
    if (!(x.kind() == y.kind())) throw DomainError("points live on different manifolds");
    return distance(x.kind(), x.coords(), y.coords());
}

PointCloud::PointCloud(ManifoldKind kind, std::vector<double> flat) : kind_(kind), coords_(std::move(flat)) {
    if (coords_.size() % stride() != 0) throw DomainError("flat coordinate buffer has a partial point");
    for (std::size_t i = 0; i < size(); ++i) {
        canonicalize(kind_, std::span<double>(coords_.data() + i * stride(), stride()));
    }
}

ManifoldPoint PointCloud::point(std::size_t i) const {
    auto c = (*this)[i];
    return ManifoldPoint(kind_, std::vector<double>(c.begin(), c.end()));
}

void PointCloud::push_back(const ManifoldPoint& p) {
    if (!(p.kind() == kind_)) throw DomainError("point does not belong to this cloud's manifold");
    coords_.insert(coords_.end(), p.coords().begin(), p.coords().end());
}

void PointCloud::push_back_raw(std::span<const double> c) {
    coords_.insert(coords_.end(), c.begin(), c.end());
}

PointCloud PointCloud::subset(std::span<const std::size_t> indices) const {
    PointCloud out(kind_);
    out.reserve(indices.size());
    for (std::size_t i : indices) out.push_back_raw((*this)[i]);
    return out;
}

}  // namespace hdr
