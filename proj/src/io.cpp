#include "hdr/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "hdr/error.hpp"

namespace hdr::io {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

bool parse_double(const std::string& text, double& out) {
    const std::string t = trim(text);
    if (t.empty()) return false;
    const char* end = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(t.data(), end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    return f;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void coordinate_header(std::ostream& os, std::size_t k) {
    for (std::size_t a = 1; a <= k; ++a) os << ",c" << a;
}

}  // namespace

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw IngestError("cannot open " + path.string());
    std::stringstream ss;
    ss << f.rdbuf();
    const std::string text = ss.str();

    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false, any = false;
    auto end_row = [&] {
        row.push_back(field);
        field.clear();
        const bool blank = row.size() == 1 && trim(row[0]).empty() && !any;
        if (!blank) rows.push_back(std::move(row));
        row.clear();
        any = false;
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            row.push_back(field);
            field.clear();
            any = true;
        } else if (c == '\n') {
            end_row();
        } else if (c != '\r') {
            field += c;
        }
    }
    if (!field.empty() || !row.empty()) end_row();
    return rows;
}

nlohmann::json read_json(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw IngestError("cannot open " + path.string());
    try {
        return nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception& e) {
        throw IngestError(path.string() + ": " + e.what());
    }
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    auto f = open_out(path);
    f << j.dump(2) << '\n';
}

void write_sample_csv(const std::filesystem::path& path, const PointCloud& points) {
    auto f = open_out(path);
    f << "manifold,dim";
    coordinate_header(f, points.stride());
    f << '\n';
    for (std::size_t i = 0; i < points.size(); ++i) {
        f << points.kind().name() << ',' << points.kind().dim();
        for (double v : points[i]) f << ',' << fmt(v);
        f << '\n';
    }
}

PointCloud read_sample(const std::filesystem::path& path, const ManifoldKind* kind) {
    if (lower(path.extension().string()) == ".json") {
        const nlohmann::json j = read_json(path);
        try {
            const nlohmann::json* pts = &j;
            std::optional<ManifoldKind> k;
            if (kind) k = *kind;
            if (j.is_object()) {
                k = ManifoldKind::from_name(j.at("manifold").get<std::string>(), j.value("dim", 2));
                pts = &j.at("points");
            }
            if (!k) throw IngestError("JSON array sample needs an explicit manifold");
            PointCloud out(*k);
            long row = 0;
            for (const auto& p : *pts) {
                try {
                    out.push_back(ManifoldPoint(*k, p.get<std::vector<double>>()));
                } catch (const DomainError& e) {
                    throw IngestError(e.what(), row);
                }
                ++row;
            }
            return out;
        } catch (const nlohmann::json::exception& e) {
            throw IngestError(path.string() + ": " + e.what());
        } catch (const DomainError& e) {
            throw IngestError(path.string() + ": " + e.what());
        }
    }

    const auto rows = read_csv(path);
    if (rows.empty()) throw IngestError(path.string() + ": empty file");
    const auto& header = rows[0];
    if (header.size() < 3 || lower(trim(header[0])) != "manifold" || lower(trim(header[1])) != "dim") {
        throw IngestError(path.string() + ": expected header manifold,dim,c1..ck", 0);
    }
    std::optional<PointCloud> out;
    if (kind) out.emplace(*kind);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        const long line = static_cast<long>(r);
        if (row.size() != header.size()) throw IngestError("wrong number of fields", line);
        double dim = 0;
        if (!parse_double(row[1], dim)) throw IngestError("non-numeric dim", line);
        ManifoldKind k = [&] {
            try {
                return ManifoldKind::from_name(trim(row[0]), static_cast<int>(dim));
            } catch (const std::exception& e) {
                throw IngestError(e.what(), line);
            }
        }();
        if (!out) out.emplace(k);
        if (!(out->kind() == k)) throw IngestError("mixed manifolds in one sample", line);
        std::vector<double> c(row.size() - 2);
        for (std::size_t a = 0; a < c.size(); ++a) {
            if (!parse_double(row[a + 2], c[a])) throw IngestError("non-numeric coordinate", line);
        }
        try {
            out->push_back(ManifoldPoint(k, std::move(c)));
        } catch (const DomainError& e) {
            throw IngestError(e.what(), line);
        }
    }
    if (!out) throw IngestError(path.string() + ": no rows and no manifold given");
    return *out;
}

void write_grid_set_csv(const std::filesystem::path& path, const GridSet& set) {
    auto f = open_out(path);
    const PointCloud& nodes = set.grid()->nodes();
    f << "node_index";
    coordinate_header(f, nodes.stride());
    f << ",member\n";
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        f << i;
        for (double v : nodes[i]) f << ',' << fmt(v);
        f << ',' << (set.contains(i) ? 1 : 0) << '\n';
    }
}

void write_density_csv(const std::filesystem::path& path, const std::vector<double>& values) {
    auto f = open_out(path);
    f << "node_index,value\n";
    for (std::size_t i = 0; i < values.size(); ++i) f << i << ',' << fmt(values[i]) << '\n';
}

BallUnionSet ball_union_from_json(const nlohmann::json& j) {
    try {
        const ManifoldKind kind = ManifoldKind::from_name(j.at("manifold").get<std::string>(), j.value("dim", 2));
        BallUnionSet s(kind, j.at("radius").get<double>());
        for (const auto& c : j.at("centers")) s.centers.push_back(ManifoldPoint(kind, c.get<std::vector<double>>()));
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw IngestError(std::string("bad estimate file: ") + e.what());
    }
}

void write_boundary_csv(const std::filesystem::path& path, const GridSet& set) {
    const Grid& grid = *set.grid();
    const PointCloud& nodes = grid.nodes();
    const bool sphere = grid.kind().tag() == ManifoldKind::Tag::Sphere2;
    auto f = open_out(path);
    f << "node_index";
    coordinate_header(f, nodes.stride());
    if (sphere) f << ",hemisphere,ortho_x,ortho_y,colatitude_deg,longitude_deg";
    f << '\n';
    const double deg = 180.0 / kPi;
    for (std::size_t g = 0; g < nodes.size(); ++g) {
        if (!set.contains(g)) continue;
        bool edge = false;
        grid.index().for_each_within(nodes[g], grid.neighbor_radius(), [&](std::size_t h, double) {
            if (!set.contains(h)) edge = true;
        });
        if (!edge) continue;
        const auto x = nodes[g];
        f << g;
        for (double v : x) f << ',' << fmt(v);
        if (sphere) {
            const bool north = x[2] >= 0.0;
            // view from outside above each pole; the south view is mirrored in y
            f << ',' << (north ? "north" : "south") << ',' << fmt(x[0]) << ',' << fmt(north ? x[1] : -x[1]) << ','
              << fmt(std::acos(std::clamp(x[2], -1.0, 1.0)) * deg) << ',' << fmt(wrap_angle(std::atan2(x[1], x[0])) * deg);
        }
        f << '\n';
    }
}

AngleUnit angle_unit_from_name(const std::string& name) {
    const std::string n = lower(name);
    if (n == "deg" || n == "degree" || n == "degrees") return AngleUnit::Degrees;
    if (n == "rad" || n == "radian" || n == "radians") return AngleUnit::Radians;
    throw ConfigError("angle unit must be deg or rad, got '" + name + "'");
}

std::vector<OrbitRecord> read_orbits(const std::filesystem::path& path, AngleUnit unit) {
    const auto rows = read_csv(path);
    if (rows.empty()) throw IngestError(path.string() + ": empty file");
    const std::set<std::string> inc_names{"i", "inc", "incl", "inclination"};
    const std::set<std::string> node_names{"om", "node", "omega", "asc_node", "ascending_node", "long_asc_node", "raan"};
    long ci = -1, cn = -1;
    for (std::size_t c = 0; c < rows[0].size(); ++c) {
        const std::string h = lower(trim(rows[0][c]));
        if (ci < 0 && inc_names.count(h)) ci = static_cast<long>(c);
        if (cn < 0 && node_names.count(h)) cn = static_cast<long>(c);
    }
    if (ci < 0) throw IngestError(path.string() + ": no inclination column", 0);
    if (cn < 0) throw IngestError(path.string() + ": no ascending-node column", 0);

    const double full_turn = unit == AngleUnit::Degrees ? 360.0 : kTwoPi;
    const double to_rad = unit == AngleUnit::Degrees ? kPi / 180.0 : 1.0;
    std::set<std::pair<long long, long long>> seen;
    std::vector<OrbitRecord> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const long line = static_cast<long>(r);
        const auto& row = rows[r];
        if (row.size() <= static_cast<std::size_t>(std::max(ci, cn))) throw IngestError("missing fields", line);
        double inc = 0, node = 0;
        if (!parse_double(row[ci], inc)) throw IngestError("non-numeric inclination", line);
        if (!parse_double(row[cn], node)) throw IngestError("non-numeric ascending node", line);
        if (inc < 0.0 || inc > full_turn / 2.0) throw IngestError("inclination out of range", line);
        if (node < 0.0 || node > full_turn) throw IngestError("ascending node out of range", line);
        if (!seen.insert({std::llround(inc * 100.0), std::llround(node * 100.0)}).second) continue;
        out.push_back({inc * to_rad, wrap_angle(node * to_rad)});
    }
    return out;
}

PointCloud orbit_normals(const std::vector<OrbitRecord>& orbits) {
    PointCloud out(ManifoldKind::sphere2());
    out.reserve(orbits.size());
    for (const auto& o : orbits) {
        const double si = std::sin(o.inclination);
        out.push_back(ManifoldPoint::on_sphere(si * std::sin(o.node), -si * std::cos(o.node), std::cos(o.inclination)));
    }
    return out;
}

PointCloud ingest_comets(const std::filesystem::path& path, AngleUnit unit) {
    return orbit_normals(read_orbits(path, unit));
}

PointCloud ingest_phases(const std::filesystem::path& path) {
    const auto rows = read_csv(path);
    if (rows.empty()) throw IngestError(path.string() + ": empty file");
    std::size_t first = 0;
    std::vector<std::size_t> cols;
    double probe = 0;
    const bool has_header = !std::all_of(rows[0].begin(), rows[0].end(), [&](const std::string& s) {
        return parse_double(s, probe);
    });
    if (has_header) {
        first = 1;
        long heart = -1, liver = -1;
        for (std::size_t c = 0; c < rows[0].size(); ++c) {
            const std::string h = lower(trim(rows[0][c]));
            if (heart < 0 && h.find("heart") != std::string::npos) heart = static_cast<long>(c);
            if (liver < 0 && h.find("liver") != std::string::npos) liver = static_cast<long>(c);
        }
        if (heart >= 0 && liver >= 0) cols = {static_cast<std::size_t>(heart), static_cast<std::size_t>(liver)};
    }
    if (cols.empty()) {
        // first two columns that parse as numbers in the first data row
        if (rows.size() <= first) throw IngestError(path.string() + ": no data rows");
        for (std::size_t c = 0; c < rows[first].size() && cols.size() < 2; ++c) {
            if (parse_double(rows[first][c], probe)) cols.push_back(c);
        }
        if (cols.size() < 2) throw IngestError("expected two numeric phase columns", static_cast<long>(first));
    }
    PointCloud out(ManifoldKind::torus(2));
    for (std::size_t r = first; r < rows.size(); ++r) {
        const long line = static_cast<long>(r);
        double h[2];
        for (int k = 0; k < 2; ++k) {
            if (cols[k] >= rows[r].size() || !parse_double(rows[r][cols[k]], h[k])) {
                throw IngestError("non-numeric phase", line);
            }
            h[k] = std::fmod(h[k], 24.0);
            if (h[k] < 0.0) h[k] += 24.0;
        }
        out.push_back(ManifoldPoint(out.kind(), {kTwoPi * h[0] / 24.0, kTwoPi * h[1] / 24.0}));
    }
    return out;
}

}  // namespace hdr::io
