#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "hdr/hdr.hpp"
#include "hdr/morphology.hpp"

namespace hdr::io {

/// Minimal RFC 4180 reader: comma separated, double-quoted fields may contain
/// commas and doubled quotes. Blank lines are skipped.
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path);

nlohmann::json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

/// CSV `manifold,dim,c1..ck`, one point per row, 17 significant digits.
void write_sample_csv(const std::filesystem::path& path, const PointCloud& points);

/// Reads a sample CSV as written above, or a JSON array of coordinate arrays
/// (JSON needs `kind`) or an object {manifold, dim, points}.
PointCloud read_sample(const std::filesystem::path& path, const ManifoldKind* kind = nullptr);

/// CSV `node_index,c1..ck,member`.
void write_grid_set_csv(const std::filesystem::path& path, const GridSet& set);

/// CSV `node_index,value`.
void write_density_csv(const std::filesystem::path& path, const std::vector<double>& values);

/// Centers and radius of an estimate written by `to_json(HdrEstimate)`.
BallUnionSet ball_union_from_json(const nlohmann::json& j);

/// Member nodes with at least one non-member grid neighbour. Sphere rows
/// carry the orthographic projection onto the plane of the nearer pole and
/// colatitude/longitude in degrees.
void write_boundary_csv(const std::filesystem::path& path, const GridSet& set);

enum class AngleUnit { Degrees, Radians };
AngleUnit angle_unit_from_name(const std::string& name);

struct OrbitRecord {
    double inclination;  ///< radians, [0, pi]
    double node;         ///< longitude of the ascending node, radians, [0, 2 pi)
};

/// Orbital planes from a CSV with inclination and ascending-node columns
/// (matched case-insensitively: i/inc/inclination, om/node/omega/...).
/// Rows with equal angles after rounding to two decimals in the source unit
/// are kept once.
std::vector<OrbitRecord> read_orbits(const std::filesystem::path& path, AngleUnit unit = AngleUnit::Degrees);

/// Normal vector (sin i sin W, -sin i cos W, cos i) of each orbital plane.
PointCloud orbit_normals(const std::vector<OrbitRecord>& orbits);

PointCloud ingest_comets(const std::filesystem::path& path, AngleUnit unit = AngleUnit::Degrees);

/// Pairs of phases in hours (first two numeric columns, or columns named
/// heart/liver) mapped to the torus by 2 pi h / 24.
PointCloud ingest_phases(const std::filesystem::path& path);

}  // namespace hdr::io
