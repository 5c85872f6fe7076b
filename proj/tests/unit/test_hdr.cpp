#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "hdr/error.hpp"
#include "hdr/hdr.hpp"
#include "hdr/sampling.hpp"
#include "oracles.hpp"

using namespace hdr;

namespace {

PointCloud two(const ManifoldPoint& a, const ManifoldPoint& b) {
    PointCloud p(a.kind());
    p.push_back(a);
    p.push_back(b);
    return p;
}

LabeledSample mixture_sample(std::size_t n, std::uint64_t seed, double kappa, double lambda) {
    const PointCloud s = AnalyticMixture::two_vmf_benchmark().sample(n, seed);
    return split_sample(s, DensityModel(KernelEstimate(s, KernelConfig::vmf(kappa))), lambda);
}

}  // namespace

TEST_SUITE("hdr") {

TEST_CASE("split examples") {
    const PointCloud s = AnalyticMixture::two_vmf_benchmark().sample(400, 1);
    const DensityModel f(AnalyticMixture::two_vmf_benchmark());
    CHECK(split_sample(s, f, 0.0).plus.size() == 400);
    CHECK(split_sample(s, f, 10.0).minus.size() == 400);

    const LabeledSample l = split_sample(s, f, 0.45);
    std::set<std::size_t> plus(l.plus.begin(), l.plus.end());
    CHECK(plus.size() + l.minus.size() == 400);
    for (std::size_t i = 0; i < s.size(); ++i) {
        REQUIRE(plus.count(i) == (f.evaluate(s[i]) >= 0.45 ? 1u : 0u));
    }

    const std::vector<double> tie{0.5, 0.5};
    CHECK(split_sample(two(ManifoldPoint::on_sphere(1, 0, 0), ManifoldPoint::on_sphere(0, 1, 0)), tie, 0.5).plus.size() == 2);
}

TEST_CASE("estimate examples") {
    const ManifoldPoint x = ManifoldPoint::on_sphere(1, 0, 0), y = ManifoldPoint::on_sphere(1, 0.1, 0);
    PointCloud one(ManifoldKind::sphere2());
    one.push_back(x);
    const HdrEstimate e1 = estimate_hdr(split_sample(one, std::vector<double>{1.0}, 0.5), 0.3);
    CHECK(e1.selected == std::vector<std::size_t>{0});
    CHECK(hdr_contains(e1, x.coords()));
    CHECK(hdr_contains(e1, ManifoldPoint::on_sphere(1, 0.3, 0).coords()));
    CHECK_FALSE(hdr_contains(e1, ManifoldPoint::on_sphere(1, 0.4, 0).coords()));

    const HdrEstimate e2 = estimate_hdr(split_sample(two(x, y), std::vector<double>{1.0, 0.1}, 0.5), 0.3);
    CHECK(e2.empty());
    CHECK_FALSE(hdr_contains(e2, x.coords()));
    CHECK(connected_components(e2).count == 0);
    CHECK_THROWS_AS(estimate_hdr(split_sample(one, std::vector<double>{1.0}, 0.5), 0.0), DomainError);
}

TEST_CASE("membership equals a brute-force center scan") {
    const LabeledSample l = mixture_sample(800, 3, 40.0, 0.45);
    const HdrEstimate e = estimate_hdr(l, 0.1);
    REQUIRE_FALSE(e.empty());
    const GridPtr g = build_grid(GridSpec{ManifoldKind::sphere2(), 1000, {}, 1});
    for (std::size_t i = 0; i < g->size(); ++i) {
        bool inside = false;
        for (std::size_t c = 0; c < e.set.centers.size(); ++c) {
            inside = inside || distance(g->kind(), g->nodes()[i], e.set.centers[c]) <= 0.1;
        }
        REQUIRE(hdr_contains(e, g->nodes()[i]) == inside);
    }
    for (std::size_t k = 0; k < e.selected.size(); ++k) {
        CHECK(hdr_contains(e, l.points[e.selected[k]]));
        CHECK(l.fn_values[e.selected[k]] >= e.lambda);
        for (std::size_t m : l.minus) REQUIRE(distance(l.points.kind(), l.points[m], l.points[e.selected[k]]) > 0.1);
    }
}

TEST_CASE("level examples") {
    const std::vector<double> v{1, 2, 3, 4};
    CHECK(estimate_level(v, 0.25) == 2.0);
    const std::vector<double> c{5, 5, 5};
    for (double g : {0.01, 0.5, 0.99}) CHECK(estimate_level(c, g) == 5.0);
    const std::vector<double> w{3, 1, 4, 1, 5, 9, 2, 6};
    CHECK(estimate_level(w, 0.1) == 1.0);
    CHECK_THROWS_AS(estimate_level(v, 0.0), DomainError);
    CHECK_THROWS_AS(estimate_level(v, 1.0), DomainError);
    CHECK_THROWS_AS(estimate_level(std::vector<double>{}, 0.5), DomainError);
}

TEST_CASE("level equals the exhaustive threshold scan") {
    Rng rng(12);
    for (int t = 0; t < 3000; ++t) {
        const std::size_t n = 1 + rng.next() % 12;
        std::vector<double> v(n);
        for (auto& x : v) x = rng.uniform() < 0.3 ? std::floor(rng.uniform(0, 4)) : rng.uniform(0, 4);
        const double gamma = t % 5 == 0 ? static_cast<double>(1 + rng.next() % n) / static_cast<double>(n + 1)
                                        : rng.uniform(0.001, 0.999);
        const double lam = estimate_level(v, gamma);
        CAPTURE(n);
        CAPTURE(gamma);
        REQUIRE(lam == oracle::level_by_scan(v, gamma));
        std::size_t above = 0;
        for (double x : v) above += x >= lam;
        REQUIRE(above >= static_cast<std::size_t>(std::ceil((1 - gamma) * static_cast<double>(n) - 1e-12)));
    }
    // grid of gammas where (1 - gamma) n is close to an integer
    for (std::size_t n = 1; n <= 12; ++n) {
        for (std::size_t k = 1; k < 100; ++k) {
            std::vector<double> v(n);
            for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<double>((i * 7) % n);
            const double gamma = static_cast<double>(k) / 100.0;
            REQUIRE(estimate_level(v, gamma) == oracle::level_by_scan(v, gamma));
        }
    }
}

TEST_CASE("selected centers are nested in lambda") {
    const PointCloud s = AnalyticMixture::two_vmf_benchmark().sample(500, 4);
    const DensityModel f(KernelEstimate(s, KernelConfig::vmf(30.0)));
    const std::vector<double> values = f.evaluate(s);
    std::vector<std::size_t> previous(s.size());
    for (std::size_t i = 0; i < previous.size(); ++i) previous[i] = i;
    for (double lambda = 0.0; lambda < 1.2; lambda += 0.1) {
        const HdrEstimate e = estimate_hdr(split_sample(s, values, lambda), 0.08);
        CHECK(std::includes(previous.begin(), previous.end(), e.selected.begin(), e.selected.end()));
        previous = e.selected;
    }
}

TEST_CASE("scaling the values and level leaves the estimate unchanged") {
    const LabeledSample l = mixture_sample(400, 5, 25.0, 0.3);
    const HdrEstimate e = estimate_hdr(l, 0.1);
    for (double c : {0.001, 0.5, 7.0, 1e6}) {
        std::vector<double> scaled = l.fn_values;
        for (auto& v : scaled) v *= c;
        const LabeledSample ls = split_sample(l.points, scaled, l.lambda * c);
        CHECK(ls.plus == l.plus);
        const HdrEstimate es = estimate_hdr(ls, 0.1);
        CHECK(es.selected == e.selected);
        CHECK(es.set.centers.flat() == e.set.centers.flat());
    }
}

TEST_CASE("estimates are fixed points of the opening") {
    const GridPtr g = build_grid(GridSpec{ManifoldKind::sphere2(), 20000, {}, 1});
    const double disp = g->dispersion();
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const HdrEstimate e = estimate_hdr(mixture_sample(400, 10 + seed, 25.0, 0.45), 0.2);
        REQUIRE_FALSE(e.empty());
        const GridSet set = GridSet::discretize(g, e.set);
        const GridSet o = opening(set, 0.2);
        CHECK(o.subset_of(set));
        // each discrete erosion and dilation may lose about one node spacing
        CHECK(hausdorff_distance(o, set) <= 4 * disp);

        // on the centers-and-probes metric space the identity is exact
        PointCloud space = e.set.centers;
        for (std::size_t i = 0; i < g->size(); ++i) space.push_back_raw(g->nodes()[i]);
        const auto sg = std::make_shared<const Grid>(space.kind(), space, std::vector<double>(space.size(), 1.0), std::nullopt);
        const GridSet on_space = GridSet::discretize(sg, e.set);
        CHECK(opening(on_space, 0.2) == on_space);
    }
}

TEST_CASE("true level") {
    const AnalyticMixture u = AnalyticMixture::uniform(ManifoldKind::sphere2());
    CHECK(true_level(u, 0.3, 100000, 1) == doctest::Approx(1.0 / (4 * kPi)).epsilon(1e-12));
    const AnalyticMixture f = AnalyticMixture::two_vmf_benchmark();
    const double a = true_level(f, 0.5, 1000000, 1), b = true_level(f, 0.5, 1000000, 2);
    CHECK(std::abs(a - b) <= 0.01);
    double prev = 0;
    for (double g : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const double l = true_level(f, g, 100000, 3);
        CHECK(l >= prev);
        prev = l;
    }
    CHECK_THROWS_AS(true_level(f, 0.5, 1000, 1), DomainError);
}

TEST_CASE("components") {
    const double r = 0.1;
    PointCloud c(ManifoldKind::circle());
    c.push_back(ManifoldPoint(ManifoldKind::circle(), {1.0}));
    HdrEstimate e{BallUnionSet(c, r), 0.0, std::nullopt, {0}};
    CHECK(connected_components(e).count == 1);
    e.set.centers.push_back(ManifoldPoint(ManifoldKind::circle(), {1.0 + 3 * r}));
    CHECK(connected_components(e).count == 2);
    e.set.centers.push_back(ManifoldPoint(ManifoldKind::circle(), {1.0 + 1.5 * r}));
    CHECK(connected_components(e).count == 1);

    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const HdrEstimate est = estimate_hdr(mixture_sample(300, 20 + seed, 25.0, 0.3), 0.06);
        CHECK(connected_components(est).labels == oracle::bfs_components(est.set.centers, 0.12));
    }
}

TEST_CASE("small gamma covers the sample") {
    const PointCloud s = AnalyticMixture::two_vmf_benchmark().sample(300, 6);
    const DensityModel f(KernelEstimate(s, KernelConfig::vmf(25.0)));
    const double gamma = 0.002;
    const HdrEstimate e = estimate_hdr_by_probability(s, f, gamma, 1e-3);
    std::size_t covered = 0;
    for (std::size_t i = 0; i < s.size(); ++i) covered += hdr_contains(e, s[i]);
    CHECK(static_cast<double>(covered) >= (1 - gamma) * 300);
    CHECK(e.gamma == gamma);
}

TEST_CASE("plug-in examples") {
    const GridPtr g = build_grid(GridSpec{ManifoldKind::sphere2(), 2000, {}, 1});
    const DensityModel f(AnalyticMixture::two_vmf_benchmark());
    CHECK(plugin_hdr(f, 0.0, g) == GridSet::full(g));
    CHECK(plugin_hdr(f, 5.0, g).is_empty());
}

TEST_CASE("upper tail deviation") {
    const std::vector<double> a{1, 2, 3}, b{1, 2, 3};
    CHECK(upper_tail_deviation(a, b) == 0.0);
    const std::vector<double> c{10, 20};
    CHECK(upper_tail_deviation(a, c) == 1.0);
    Rng rng(3);
    for (int t = 0; t < 100; ++t) {
        std::vector<double> x(1 + rng.next() % 20), y(1 + rng.next() % 20);
        for (auto& v : x) v = std::floor(rng.uniform(0, 6));
        for (auto& v : y) v = std::floor(rng.uniform(0, 6));
        double brute = 0;
        for (double lam = -1; lam <= 7; lam += 0.5) {
            double px = 0, py = 0;
            for (double v : x) px += v >= lam;
            for (double v : y) py += v >= lam;
            brute = std::max(brute, std::abs(px / x.size() - py / y.size()));
        }
        REQUIRE(upper_tail_deviation(x, y) == doctest::Approx(brute).epsilon(1e-15));
    }
}

TEST_CASE("estimate JSON") {
    const HdrEstimate e = estimate_hdr(mixture_sample(200, 7, 25.0, 0.3), 0.1);
    const auto j = to_json(e);
    CHECK(j["manifold"] == "sphere2");
    CHECK(j["radius"] == 0.1);
    CHECK(j["centers"].size() == e.selected.size());
    CHECK(j["component_labels"].size() == e.selected.size());
    CHECK(j["lambda"] == e.lambda);
}

}
