#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace hdr {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// One of the supported Riemannian manifolds. Circle is the one-dimensional
/// torus; both use the flat product metric on angles.
class ManifoldKind {
public:
    enum class Tag { Circle, Sphere2, Torus, Euclidean };

    static ManifoldKind circle() { return ManifoldKind(Tag::Circle, 1); }
    static ManifoldKind sphere2() { return ManifoldKind(Tag::Sphere2, 2); }
    static ManifoldKind torus(int d);
    static ManifoldKind euclidean(int d);

    /// Parses the names written by `name()`: circle, sphere2, torus, euclidean.
    static ManifoldKind from_name(const std::string& name, int dim);

    Tag tag() const { return tag_; }
    int dim() const { return dim_; }

    /// Length of the coordinate vector (3 for the embedded sphere).
    std::size_t coord_size() const { return tag_ == Tag::Sphere2 ? 3 : static_cast<std::size_t>(dim_); }

    bool is_angular() const { return tag_ == Tag::Circle || tag_ == Tag::Torus; }
    bool is_compact() const { return tag_ != Tag::Euclidean; }

    /// Largest possible geodesic distance; infinite for Euclidean space.
    double diameter() const;

    /// Riemannian volume of the whole manifold; infinite for Euclidean space.
    double volume() const;

    std::string name() const;

    friend bool operator==(const ManifoldKind&, const ManifoldKind&) = default;

private:
    ManifoldKind(Tag tag, int dim) : tag_(tag), dim_(dim) {}

    Tag tag_;
    int dim_;
};

/// Wraps an angle into [0, 2π).
double wrap_angle(double a);

/// Wraps an angular difference into [-π, π].
double wrap_difference(double a);

/// Geodesic distance between raw coordinate vectors of the given manifold.
/// Both inputs must already be canonical (unit vectors / wrapped angles).
double distance(const ManifoldKind& kind, std::span<const double> x, std::span<const double> y);

/// A validated point. Angles are wrapped once at construction; sphere
/// coordinates are checked against the unit-norm tolerance.
class ManifoldPoint {
public:
    static constexpr double kUnitTolerance = 1e-9;

    ManifoldPoint(ManifoldKind kind, std::vector<double> coords);

    const ManifoldKind& kind() const { return kind_; }
    std::span<const double> coords() const { return coords_; }
    double operator[](std::size_t i) const { return coords_[i]; }

    /// Normalizes a non-zero 3-vector onto the sphere.
    static ManifoldPoint on_sphere(double x, double y, double z);

private:
    ManifoldKind kind_;
    std::vector<double> coords_;
};

double geodesic_distance(const ManifoldPoint& x, const ManifoldPoint& y);

/// A contiguous list of points on one manifold (structure of arrays would buy
/// little here: coordinates are read together).
class PointCloud {
public:
    explicit PointCloud(ManifoldKind kind) : kind_(kind) {}
    PointCloud(ManifoldKind kind, std::vector<double> flat);

    const ManifoldKind& kind() const { return kind_; }
    std::size_t size() const { return coords_.size() / kind_.coord_size(); }
    bool empty() const { return coords_.empty(); }
    std::size_t stride() const { return kind_.coord_size(); }

    std::span<const double> operator[](std::size_t i) const {
        return {coords_.data() + i * stride(), stride()};
    }

    ManifoldPoint point(std::size_t i) const;

    void push_back(const ManifoldPoint& p);
    /// Appends coordinates that are already canonical.
    void push_back_raw(std::span<const double> c);
    void reserve(std::size_t n) { coords_.reserve(n * stride()); }

    PointCloud subset(std::span<const std::size_t> indices) const;

    const std::vector<double>& flat() const { return coords_; }

private:
    ManifoldKind kind_;
    std::vector<double> coords_;
};

/// Canonicalizes raw coordinates in place (wraps angles, normalizes sphere
/// vectors that are within tolerance of unit norm). Throws DomainError otherwise.
void canonicalize(const ManifoldKind& kind, std::span<double> coords);

}  // namespace hdr
