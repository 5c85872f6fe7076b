#include <doctest.h>

#include <cmath>

#include "hdr/density.hpp"
#include "hdr/error.hpp"
#include "hdr/sampling.hpp"

using namespace hdr;

namespace {

std::array<double, 3> mean_vector(const PointCloud& p) {
    std::array<double, 3> m{0, 0, 0};
    for (std::size_t i = 0; i < p.size(); ++i)
        for (int a = 0; a < 3; ++a) m[a] += p[i][a];
    for (double& v : m) v /= static_cast<double>(p.size());
    return m;
}

double resultant_length(const PointCloud& p, std::size_t axis) {
    double c = 0, s = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        c += std::cos(p[i][axis]);
        s += std::sin(p[i][axis]);
    }
    return std::hypot(c, s) / static_cast<double>(p.size());
}

}  // namespace

TEST_SUITE("sampling") {

TEST_CASE("vMF with zero concentration is uniform") {
    const PointCloud p = sample_vmf(ManifoldPoint::on_sphere(0, 0, 1), 0.0, 100000, 1);
    REQUIRE(p.size() == 100000);
    const auto m = mean_vector(p);
    CHECK(std::hypot(m[0], m[1], m[2]) < 0.02);
}

TEST_CASE("vMF concentrates around the mean direction") {
    const auto mu = ManifoldPoint::on_sphere(1, 2, -0.5);
    const PointCloud p = sample_vmf(mu, 10.0, 100000, 2);
    const auto m = mean_vector(p);
    const double norm = std::hypot(m[0], m[1], m[2]);
    const double cosang = (m[0] * mu[0] + m[1] * mu[1] + m[2] * mu[2]) / norm;
    CHECK(std::acos(std::min(1.0, cosang)) < 0.05);
    // E<X, mu> = coth(kappa) - 1/kappa
    const double expected = 1.0 / std::tanh(10.0) - 0.1;
    CHECK(norm == doctest::Approx(expected).epsilon(0.01));
}

TEST_CASE("vMF edge cases") {
    const auto mu = ManifoldPoint::on_sphere(0, 0, 1);
    CHECK(sample_vmf(mu, 5.0, 0, 1).empty());
    CHECK_THROWS_AS(sample_vmf(mu, -1.0, 10, 1), DomainError);
    CHECK_THROWS_AS(sample_vmf(ManifoldPoint(ManifoldKind::torus(2), {0, 0}), 1.0, 10, 1), DomainError);
    const PointCloud big = sample_vmf(mu, 1e6, 1000, 3);
    for (std::size_t i = 0; i < big.size(); ++i) REQUIRE(big[i][2] > 0.999);
}

TEST_CASE("samples are valid points") {
    const PointCloud p = sample_vmf(ManifoldPoint::on_sphere(0, 1, 0), 3.0, 5000, 4);
    for (std::size_t i = 0; i < p.size(); ++i) {
        REQUIRE(std::abs(std::hypot(p[i][0], p[i][1], p[i][2]) - 1.0) <= 1e-12);
    }
    const std::vector<double> mus{6.0, 0.1}, kappas{2.0, 2.0};
    const PointCloud t = sample_von_mises_torus(mus, kappas, 5000, 5);
    for (std::size_t i = 0; i < t.size(); ++i) {
        REQUIRE(t[i][0] >= 0.0);
        REQUIRE(t[i][0] < kTwoPi);
        REQUIRE(t[i][1] >= 0.0);
        REQUIRE(t[i][1] < kTwoPi);
    }
}

TEST_CASE("samplers are bitwise reproducible") {
    const auto mu = ManifoldPoint::on_sphere(0, 0, 1);
    CHECK(sample_vmf(mu, 7.0, 1000, 9).flat() == sample_vmf(mu, 7.0, 1000, 9).flat());
    CHECK(sample_vmf(mu, 7.0, 1000, 9).flat() != sample_vmf(mu, 7.0, 1000, 10).flat());
    const std::vector<double> mus{1.0, 2.0}, kappas{3.0, 0.5};
    CHECK(sample_von_mises_torus(mus, kappas, 1000, 9).flat() == sample_von_mises_torus(mus, kappas, 1000, 9).flat());
    const auto m = AnalyticMixture::two_vmf_benchmark();
    CHECK(m.sample(500, 3).flat() == m.sample(500, 3).flat());
    CHECK(sample_uniform(ManifoldKind::torus(3), 100, 1).flat() == sample_uniform(ManifoldKind::torus(3), 100, 1).flat());
}

TEST_CASE("torus von Mises uniform and concentrated cases") {
    const std::vector<double> mus{1.0, 4.0};
    const std::vector<double> flat{0.0, 0.0};
    const PointCloud u = sample_von_mises_torus(mus, flat, 10000, 6);
    CHECK(resultant_length(u, 0) < 0.05);
    CHECK(resultant_length(u, 1) < 0.05);
    CHECK(sample_von_mises_torus(mus, flat, 0, 6).empty());

    const std::vector<double> sharp{50.0, 50.0};
    const PointCloud c = sample_von_mises_torus(mus, sharp, 10000, 7);
    for (std::size_t axis = 0; axis < 2; ++axis) {
        std::size_t near = 0;
        for (std::size_t i = 0; i < c.size(); ++i) near += std::abs(wrap_difference(c[i][axis] - mus[axis])) <= 0.5;
        CHECK(static_cast<double>(near) >= 0.99 * c.size());
    }
    const std::vector<double> bad{1.0, -1.0};
    CHECK_THROWS_AS(sample_von_mises_torus(mus, bad, 10, 1), DomainError);
    const std::vector<double> short_k{1.0};
    CHECK_THROWS_AS(sample_von_mises_torus(mus, short_k, 10, 1), DomainError);
}

TEST_CASE("von Mises angle matches the first trigonometric moment") {
    // E cos(theta - mu) = I_1(kappa) / I_0(kappa); for kappa = 2 this is 0.697774657964...
    Rng rng(8);
    double c = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) c += std::cos(draw_von_mises_angle(0.3, 2.0, rng) - 0.3);
    CHECK(c / n == doctest::Approx(0.6977746579640081).epsilon(0.01));
}

TEST_CASE("single-component mixture equals the bare sampler") {
    const auto mu = ManifoldPoint::on_sphere(0.3, -0.2, 0.9);
    const AnalyticMixture one(ManifoldKind::sphere2(),
                              {{1.0, VmfComponent{std::vector<double>(mu.coords().begin(), mu.coords().end()), 4.0}}});
    CHECK(one.sample(777, 21).flat() == sample_vmf(mu, 4.0, 777, 21).flat());

    const std::vector<double> mus{1.0, 2.0}, kappas{3.0, 0.5};
    const AnalyticMixture tor(ManifoldKind::torus(2), {{1.0, VonMisesTorusComponent{mus, kappas}}});
    CHECK(tor.sample(300, 5).flat() == sample_von_mises_torus(mus, kappas, 300, 5).flat());
}

TEST_CASE("equal weights give binomial component counts") {
    const auto m = AnalyticMixture::two_vmf_benchmark();
    std::vector<WeightedSampler> parts;
    for (const auto& c : m.components()) {
        const auto v = std::get<VmfComponent>(c.shape);
        parts.push_back({c.weight, [v](Rng& r, PointCloud& out) { draw_vmf(v.mu, v.kappa, r, out); }});
    }
    std::vector<std::size_t> labels;
    const std::size_t n = 100000;
    const PointCloud p = sample_mixture(ManifoldKind::sphere2(), parts, n, 12, &labels);
    REQUIRE(p.size() == n);
    REQUIRE(labels.size() == n);
    const double first = static_cast<double>(std::count(labels.begin(), labels.end(), 0u));
    CHECK(std::abs(first - n / 2.0) <= 3.0 * std::sqrt(n * 0.25));
}

TEST_CASE("mixture weight validation") {
    std::vector<WeightedSampler> parts{{0.5, [](Rng& r, PointCloud& out) { draw_uniform(ManifoldKind::sphere2(), r, out); }},
                                       {0.4, [](Rng& r, PointCloud& out) { draw_uniform(ManifoldKind::sphere2(), r, out); }}};
    CHECK_THROWS_AS(sample_mixture(ManifoldKind::sphere2(), parts, 10, 1), DomainError);
    parts[1].weight = 0.5;
    CHECK_NOTHROW(sample_mixture(ManifoldKind::sphere2(), parts, 10, 1));
    parts[1].weight = -0.5;
    parts[0].weight = 1.5;
    CHECK_THROWS_AS(sample_mixture(ManifoldKind::sphere2(), parts, 10, 1), DomainError);
}

TEST_CASE("Euclidean uniform needs a box") {
    CHECK_THROWS_AS(sample_uniform(ManifoldKind::euclidean(2), 10, 1), ConfigError);
    const std::vector<double> lo{0, 0}, hi{1, 2};
    const PointCloud p = sample_uniform(ManifoldKind::euclidean(2), 1000, 1, lo, hi);
    for (std::size_t i = 0; i < p.size(); ++i) {
        REQUIRE(p[i][0] >= 0.0);
        REQUIRE(p[i][1] < 2.0);
    }
}

TEST_CASE("Gaussian draws") {
    const std::vector<double> mean{1.0, -2.0};
    Rng rng(3);
    PointCloud out(ManifoldKind::euclidean(2));
    for (int i = 0; i < 50000; ++i) draw_gaussian(mean, 0.5, rng, out);
    double m0 = 0, v0 = 0;
    for (std::size_t i = 0; i < out.size(); ++i) m0 += out[i][0];
    m0 /= out.size();
    for (std::size_t i = 0; i < out.size(); ++i) v0 += (out[i][0] - m0) * (out[i][0] - m0);
    v0 /= out.size();
    CHECK(m0 == doctest::Approx(1.0).epsilon(0.01));
    CHECK(v0 == doctest::Approx(0.25).epsilon(0.03));
}

}
