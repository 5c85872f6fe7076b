#include <doctest.h>

#include <cmath>
#include <set>

#include "hdr/error.hpp"
#include "hdr/grid.hpp"
#include "hdr/sampling.hpp"

using namespace hdr;

TEST_SUITE("grid") {

TEST_CASE("circle resolution 4") {
    const GridPtr g = build_grid(GridSpec{ManifoldKind::circle(), 4, {}, 1});
    REQUIRE(g->size() == 4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(g->nodes()[i][0] == doctest::Approx(i * kPi / 2));
    CHECK(g->dispersion() > 0.0);
    CHECK(g->dispersion() <= kPi / 4);
}

TEST_CASE("sphere resolution 1000") {
    const GridPtr g = build_grid(GridSpec{ManifoldKind::sphere2(), 1000, {}, 1});
    CHECK(g->size() == 1000);
    CHECK(g->dispersion() > 0.0);
    // area of a spherical cap of geodesic radius delta covers at least 4 pi / N
    CHECK(2 * kPi * (1 - std::cos(g->dispersion())) >= 4 * kPi / 1000);
    double w = 0;
    for (double x : g->weights()) w += x;
    CHECK(w == doctest::Approx(4 * kPi));
}

TEST_CASE("torus resolution 64 is an 8 x 8 product grid") {
    const GridPtr g = build_grid(GridSpec{ManifoldKind::torus(2), 64, {}, 1});
    REQUIRE(g->size() == 64);
    std::set<double> a0, a1;
    for (std::size_t i = 0; i < g->size(); ++i) {
        a0.insert(g->nodes()[i][0]);
        a1.insert(g->nodes()[i][1]);
    }
    CHECK(a0.size() == 8);
    CHECK(a1.size() == 8);
    // probe estimate is a lower bound of the corner distance of the cell
    CHECK(g->dispersion() <= std::sqrt(2.0) * kPi / 8 + 1e-12);
}

TEST_CASE("node count is at least half the resolution") {
    for (std::size_t r : {5, 8, 17, 100, 1000, 4097}) {
        for (const ManifoldKind& k : {ManifoldKind::circle(), ManifoldKind::sphere2(), ManifoldKind::torus(2),
                                      ManifoldKind::torus(3), ManifoldKind::torus(5)}) {
            CAPTURE(r);
            CAPTURE(k.name());
            const GridPtr g = build_grid(GridSpec{k, r, {}, 1});
            CHECK(2 * g->size() >= r);
            CHECK(g->dispersion() > 0.0);
        }
    }
}

TEST_CASE("dispersion decreases over a doubling sequence") {
    for (const ManifoldKind& k : {ManifoldKind::circle(), ManifoldKind::sphere2(), ManifoldKind::torus(2)}) {
        double prev = HUGE_VAL;
        for (std::size_t r = 64; r <= 8192; r *= 2) {
            const double d = build_grid(GridSpec{k, r, {}, 3})->dispersion();
            CHECK(d < prev);
            prev = d;
        }
    }
}

TEST_CASE("Euclidean grids need a box") {
    CHECK_THROWS_AS(build_grid(GridSpec{ManifoldKind::euclidean(2), 100, {}, 1}), ConfigError);
    const GridPtr g = build_grid(GridSpec{ManifoldKind::euclidean(2), 100, BoundingBox{{0, 0}, {1, 2}}, 1});
    CHECK(g->size() == 100);
    double w = 0;
    for (double x : g->weights()) w += x;
    CHECK(w == doctest::Approx(2.0));
    CHECK(g->dispersion() <= std::hypot(0.05, 0.1) + 1e-12);
}

TEST_CASE("resolution below the minimum is rejected") {
    CHECK_THROWS_AS(build_grid(GridSpec{ManifoldKind::sphere2(), 3, {}, 1}), ConfigError);
}

TEST_CASE("Fibonacci lattice nodes are unit vectors") {
    const PointCloud p = fibonacci_sphere(777);
    for (std::size_t i = 0; i < p.size(); ++i) REQUIRE(std::abs(std::hypot(p[i][0], p[i][1], p[i][2]) - 1) < 1e-12);
}

}
