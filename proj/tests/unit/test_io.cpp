#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "hdr/error.hpp"
#include "hdr/io.hpp"
#include "hdr/sampling.hpp"

using namespace hdr;

namespace {

std::filesystem::path write_text(const std::string& name, const std::string& text) {
    const auto p = std::filesystem::temp_directory_path() / ("hdr_io_" + name);
    std::ofstream(p) << text;
    return p;
}

double norm(std::span<const double> v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

}  // namespace

TEST_SUITE("io") {

TEST_CASE("orbit normals") {
    const PointCloud a = io::orbit_normals({{kPi / 2, kPi / 2}});
    CHECK(a[0][0] == doctest::Approx(1.0));
    CHECK(std::abs(a[0][1]) < 1e-15);
    CHECK(std::abs(a[0][2]) < 1e-15);
    for (double node : {0.0, 1.0, 4.0}) {
        const PointCloud b = io::orbit_normals({{0.0, node}});
        CHECK(b[0][2] == 1.0);
        CHECK(b[0][0] == 0.0);
        CHECK(std::abs(b[0][1]) == 0.0);
    }
}

TEST_CASE("comet ingestion") {
    const auto p = write_text("comets.csv",
                              "full_name,i,om\n"
                              "\"C/1 A, one\",90,90\n"
                              "C/2,10.001,20.004\n"
                              "C/3,10.002,20.001\n"
                              "C/4,0,123\n"
                              "C/5,180,359.99\n");
    const PointCloud c = io::ingest_comets(p);
    REQUIRE(c.size() == 4);
    CHECK(c[0][0] == doctest::Approx(1.0));
    CHECK(c[2][2] == doctest::Approx(1.0));
    CHECK(c[3][2] == doctest::Approx(-1.0));
    for (std::size_t k = 0; k < c.size(); ++k) CHECK(std::abs(norm(c[k]) - 1.0) <= 1e-12);

    const auto r = write_text("comets_rad.csv", "inclination,node\n1.5707963267948966,1.5707963267948966\n");
    CHECK(io::ingest_comets(r, io::AngleUnit::Radians)[0][0] == doctest::Approx(1.0));
    const auto orbits = io::read_orbits(p);
    CHECK(orbits[0].inclination == doctest::Approx(kPi / 2));
}

TEST_CASE("comet ingestion errors carry the row") {
    const auto missing = write_text("c_missing.csv", "name,i\nx,10\n");
    CHECK_THROWS_AS(io::ingest_comets(missing), IngestError);
    const auto range = write_text("c_range.csv", "i,om\n10,20\n200,20\n");
    try {
        io::ingest_comets(range);
        FAIL("expected an ingestion error");
    } catch (const IngestError& e) {
        CHECK(e.row() == 2);
    }
    const auto text = write_text("c_text.csv", "i,om\n10,abc\n");
    CHECK_THROWS_AS(io::ingest_comets(text), IngestError);
    CHECK_THROWS_AS(io::ingest_comets("/nonexistent/comets.csv"), IngestError);
    CHECK_THROWS_AS(io::angle_unit_from_name("grad"), ConfigError);
}

TEST_CASE("phase ingestion") {
    const auto p = write_text("phases.csv", "gene,heart,liver\nA,0,0\nB,12,12\nC,30,-6\n");
    const PointCloud t = io::ingest_phases(p);
    REQUIRE(t.size() == 3);
    CHECK(t[0][0] == 0.0);
    CHECK(t[0][1] == 0.0);
    CHECK(t[1][0] == doctest::Approx(kPi));
    CHECK(t[1][1] == doctest::Approx(kPi));
    CHECK(t[2][0] == doctest::Approx(kPi / 2));
    CHECK(t[2][1] == doctest::Approx(3 * kPi / 2));

    const auto bare = write_text("phases_bare.csv", "1,2\n3,4\n");
    CHECK(io::ingest_phases(bare).size() == 2);
    const auto bad = write_text("phases_bad.csv", "gene,heart,liver\nA,1,2\nB,x,3\n");
    CHECK_THROWS_AS(io::ingest_phases(bad), IngestError);
}

TEST_CASE("sample files round trip exactly") {
    for (const ManifoldKind& k : {ManifoldKind::sphere2(), ManifoldKind::torus(2), ManifoldKind::circle()}) {
        const PointCloud s = sample_uniform(k, 100, 3);
        const auto p = std::filesystem::temp_directory_path() / "hdr_io_sample.csv";
        io::write_sample_csv(p, s);
        const PointCloud back = io::read_sample(p);
        CHECK(back.kind() == k);
        REQUIRE(back.size() == s.size());
        for (std::size_t i = 0; i < s.flat().size(); ++i) REQUIRE(std::abs(back.flat()[i] - s.flat()[i]) <= 1e-12);
        io::write_sample_csv(p, back);
        const PointCloud again = io::read_sample(p);
        for (std::size_t i = 0; i < s.flat().size(); ++i) REQUIRE(std::abs(again.flat()[i] - s.flat()[i]) <= 1e-12);
    }
    const auto j = write_text("sample.json", R"({"manifold": "torus", "dim": 2, "points": [[0.5, 1.0], [7.0, 2.0]]})");
    const PointCloud t = io::read_sample(j);
    CHECK(t.size() == 2);
    CHECK(t[1][0] == doctest::Approx(7.0 - kTwoPi));
    const auto bad = write_text("sample_bad.csv", "manifold,dim,c1,c2,c3\nsphere2,2,1,1,1\n");
    CHECK_THROWS_AS(io::read_sample(bad), IngestError);
}

TEST_CASE("estimate JSON round trip and boundary export") {
    const PointCloud s = AnalyticMixture::two_vmf_benchmark().sample(200, 1);
    const DensityModel f(KernelEstimate(s, KernelConfig::vmf(25.0)));
    const HdrEstimate e = estimate_hdr_by_probability(s, f, 0.5, 0.2);
    const BallUnionSet back = io::ball_union_from_json(to_json(e));
    CHECK(back.radius == e.radius());
    CHECK(back.centers.flat() == e.set.centers.flat());

    const GridPtr g = build_grid(GridSpec{ManifoldKind::sphere2(), 3000, {}, 1});
    const GridSet set = GridSet::discretize(g, e.set);
    const auto p = std::filesystem::temp_directory_path() / "hdr_io_boundary.csv";
    io::write_boundary_csv(p, set);
    const auto rows = io::read_csv(p);
    REQUIRE(rows.size() > 1);
    CHECK(rows[0][0] == "node_index");
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const std::size_t node = std::stoul(rows[r][0]);
        REQUIRE(set.contains(node));
        bool edge = false;
        g->index().for_each_within(g->nodes()[node], g->neighbor_radius(), [&](std::size_t h, double) {
            edge = edge || !set.contains(h);
        });
        REQUIRE(edge);
    }
}

}
