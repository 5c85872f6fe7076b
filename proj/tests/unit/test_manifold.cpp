#include <doctest.h>

#include <cmath>

#include "hdr/error.hpp"
#include "hdr/manifold.hpp"
#include "hdr/sampling.hpp"

using namespace hdr;

TEST_SUITE("manifold") {

TEST_CASE("distance examples") {
    const auto n = ManifoldPoint::on_sphere(0, 0, 1), s = ManifoldPoint::on_sphere(0, 0, -1);
    CHECK(geodesic_distance(n, s) == doctest::Approx(kPi).epsilon(1e-15));
    CHECK(geodesic_distance(n, n) == 0.0);

    const ManifoldPoint a(ManifoldKind::torus(2), {0.0, 0.0}), b(ManifoldKind::torus(2), {1.5 * kPi, 0.0});
    CHECK(geodesic_distance(a, b) == doctest::Approx(kPi / 2).epsilon(1e-15));

    const ManifoldPoint e(ManifoldKind::euclidean(2), {0.0, 0.0}), f(ManifoldKind::euclidean(2), {3.0, 4.0});
    CHECK(geodesic_distance(e, f) == 5.0);
}

TEST_CASE("nearly identical sphere points keep a positive distance") {
    const auto x = ManifoldPoint::on_sphere(1, 0, 0);
    const auto y = ManifoldPoint::on_sphere(1, 1e-9, 0);
    CHECK(geodesic_distance(x, y) == doctest::Approx(1e-9).epsilon(1e-6));
}

TEST_CASE("manifold mismatch is a domain error") {
    const ManifoldPoint a(ManifoldKind::torus(2), {0.0, 0.0});
    const ManifoldPoint b(ManifoldKind::euclidean(2), {0.0, 0.0});
    CHECK_THROWS_AS(geodesic_distance(a, b), DomainError);
}

TEST_CASE("construction validates and canonicalizes") {
    CHECK_THROWS_AS(ManifoldPoint(ManifoldKind::sphere2(), {1.0, 1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(ManifoldPoint(ManifoldKind::sphere2(), {1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(ManifoldPoint(ManifoldKind::euclidean(1), {NAN}), DomainError);
    CHECK_THROWS_AS(ManifoldKind::torus(0), DomainError);
    CHECK_THROWS_AS(ManifoldKind::euclidean(0), DomainError);

    const ManifoldPoint t(ManifoldKind::torus(2), {-0.5, 7.0});
    CHECK(t[0] == doctest::Approx(kTwoPi - 0.5));
    CHECK(t[1] == doctest::Approx(7.0 - kTwoPi));
    CHECK(ManifoldPoint(ManifoldKind::circle(), {kTwoPi})[0] == 0.0);

    const ManifoldPoint u(ManifoldKind::sphere2(), {1.0 + 5e-10, 0.0, 0.0});
    CHECK(u[0] == 1.0);
}

TEST_CASE("metric axioms on random triples") {
    for (const ManifoldKind& kind : {ManifoldKind::circle(), ManifoldKind::sphere2(), ManifoldKind::torus(2),
                                     ManifoldKind::torus(3), ManifoldKind::euclidean(3)}) {
        CAPTURE(kind.name());
        const std::vector<double> lo(kind.coord_size(), -2.0), hi(kind.coord_size(), 2.0);
        const PointCloud p = sample_uniform(kind, 30000, 11, lo, hi);
        for (std::size_t t = 0; t < 10000; ++t) {
            const auto x = p[3 * t], y = p[3 * t + 1], z = p[3 * t + 2];
            const double dxy = distance(kind, x, y), dyx = distance(kind, y, x);
            REQUIRE(dxy == dyx);
            REQUIRE(distance(kind, x, x) == 0.0);
            REQUIRE(distance(kind, x, z) <= dxy + distance(kind, y, z) + 1e-9);
            REQUIRE(dxy >= 0.0);
            if (kind.is_compact()) REQUIRE(dxy <= kind.diameter() + 1e-12);
        }
    }
}

TEST_CASE("names round trip") {
    for (const ManifoldKind& kind : {ManifoldKind::circle(), ManifoldKind::sphere2(), ManifoldKind::torus(3),
                                     ManifoldKind::euclidean(4)}) {
        CHECK(ManifoldKind::from_name(kind.name(), kind.dim()) == kind);
    }
    CHECK(ManifoldKind::torus(1) == ManifoldKind::circle());
    CHECK_THROWS_AS(ManifoldKind::from_name("hyperbolic", 2), DomainError);
}

TEST_CASE("point cloud subset and kind checks") {
    PointCloud c(ManifoldKind::torus(2));
    c.push_back(ManifoldPoint(ManifoldKind::torus(2), {1.0, 2.0}));
    c.push_back(ManifoldPoint(ManifoldKind::torus(2), {3.0, 4.0}));
    CHECK_THROWS_AS(c.push_back(ManifoldPoint(ManifoldKind::euclidean(2), {0.0, 0.0})), DomainError);
    const std::vector<std::size_t> idx{1};
    const PointCloud s = c.subset(idx);
    REQUIRE(s.size() == 1);
    CHECK(s[0][0] == 3.0);
}

}
