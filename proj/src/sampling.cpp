#include "hdr/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "hdr/error.hpp"

namespace hdr {

namespace {

void check_kappa(double kappa) {
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw DomainError("concentration must be a finite value >= 0");
}

// Orthonormal pair spanning the tangent plane at mu.
void tangent_basis(std::span<const double> mu, double e1[3], double e2[3]) {
    // pick the axis least aligned with mu
    double a[3] = {0.0, 0.0, 0.0};
    const double ax = std::abs(mu[0]), ay = std::abs(mu[1]), az = std::abs(mu[2]);
    if (ax <= ay && ax <= az) a[0] = 1.0;
    else if (ay <= az) a[1] = 1.0;
    else a[2] = 1.0;
    e1[0] = mu[1] * a[2] - mu[2] * a[1];
    e1[1] = mu[2] * a[0] - mu[0] * a[2];
    e1[2] = mu[0] * a[1] - mu[1] * a[0];
    const double n1 = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
    for (int k = 0; k < 3; ++k) e1[k] /= n1;
    e2[0] = mu[1] * e1[2] - mu[2] * e1[1];
    e2[1] = mu[2] * e1[0] - mu[0] * e1[2];
    e2[2] = mu[0] * e1[1] - mu[1] * e1[0];
}

}  // namespace

void draw_vmf(std::span<const double> mu, double kappa, Rng& rng, PointCloud& out) {
    // Tangent-normal decomposition x = w mu + sqrt(1 - w^2) v. On S^2 the
    // radial law of w has an invertible CDF, so no rejection loop is needed.
    const double u = rng.uniform_open0();
    double w;
    if (kappa < 1e-12) {
        w = 2.0 * u - 1.0;
    } else {
        w = 1.0 + std::log(u + (1.0 - u) * std::exp(-2.0 * kappa)) / kappa;
    }
    w = std::clamp(w, -1.0, 1.0);
    const double phi = kTwoPi * rng.uniform();
    double e1[3], e2[3];
    tangent_basis(mu, e1, e2);
    const double s = std::sqrt(std::max(0.0, 1.0 - w * w));
    const double c1 = s * std::cos(phi), c2 = s * std::sin(phi);
    double x[3];
    for (int k = 0; k < 3; ++k) x[k] = w * mu[k] + c1 * e1[k] + c2 * e2[k];
    const double norm = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    for (double& v : x) v /= norm;
    out.push_back_raw(x);
}

double draw_von_mises_angle(double mu, double kappa, Rng& rng) {
    if (kappa < 1e-9) return mu + kTwoPi * rng.uniform();
    // Best & Fisher (1979)
    const double tau = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
    const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * kappa);
    const double r = (1.0 + rho * rho) / (2.0 * rho);
    for (;;) {
        const double u1 = rng.uniform();
        const double u2 = rng.uniform_open0();
        const double u3 = rng.uniform();
        const double z = std::cos(kPi * u1);
        const double f = (1.0 + r * z) / (r + z);
        const double c = kappa * (r - f);
        if (c * (2.0 - c) - u2 > 0.0 || std::log(c / u2) + 1.0 - c >= 0.0) {
            const double theta = std::acos(std::clamp(f, -1.0, 1.0));
            return u3 > 0.5 ? mu + theta : mu - theta;
        }
    }
}

void draw_von_mises_torus(std::span<const double> mus, std::span<const double> kappas, Rng& rng, PointCloud& out) {
    const std::size_t d = mus.size();
    double buf[16];
    std::vector<double> heap;
    double* x = buf;
    if (d > 16) {
        heap.resize(d);
        x = heap.data();
    }
    for (std::size_t k = 0; k < d; ++k) x[k] = wrap_angle(draw_von_mises_angle(mus[k], kappas[k], rng));
    out.push_back_raw(std::span<const double>(x, d));
}

void draw_gaussian(std::span<const double> mean, double sigma, Rng& rng, PointCloud& out) {
    std::vector<double> x(mean.size());
    for (std::size_t k = 0; k < mean.size(); ++k) x[k] = mean[k] + sigma * rng.normal();
    out.push_back_raw(x);
}

void draw_uniform(const ManifoldKind& kind, Rng& rng, PointCloud& out, std::span<const double> box_lo,
                  std::span<const double> box_hi) {
    switch (kind.tag()) {
        case ManifoldKind::Tag::Sphere2: {
            const double z = 2.0 * rng.uniform() - 1.0;
            const double phi = kTwoPi * rng.uniform();
            const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double x[3] = {s * std::cos(phi), s * std::sin(phi), z};
            out.push_back_raw(x);
            return;
        }
        case ManifoldKind::Tag::Circle:
        case ManifoldKind::Tag::Torus: {
            std::vector<double> x(kind.coord_size());
            for (double& v : x) v = kTwoPi * rng.uniform();
            out.push_back_raw(x);
            return;
        }
        case ManifoldKind::Tag::Euclidean: {
            if (box_lo.size() != kind.coord_size() || box_hi.size() != kind.coord_size()) {
                throw ConfigError("uniform sampling in Euclidean space needs a bounding box");
            }
            std::vector<double> x(kind.coord_size());
            for (std::size_t k = 0; k < x.size(); ++k) x[k] = rng.uniform(box_lo[k], box_hi[k]);
            out.push_back_raw(x);
            return;
        }
    }
}

PointCloud sample_vmf(const ManifoldPoint& mu, double kappa, std::size_t n, std::uint64_t seed) {
    if (mu.kind().tag() != ManifoldKind::Tag::Sphere2) throw DomainError("vMF mean must lie on the sphere");
    check_kappa(kappa);
    Rng rng(seed);
    PointCloud out(ManifoldKind::sphere2());
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) draw_vmf(mu.coords(), kappa, rng, out);
    return out;
}

PointCloud sample_von_mises_torus(std::span<const double> mus, std::span<const double> kappas, std::size_t n,
                                  std::uint64_t seed) {
    if (mus.empty() || mus.size() != kappas.size()) throw DomainError("mean and concentration tuples must match");
    for (double k : kappas) check_kappa(k);
    Rng rng(seed);
    PointCloud out(ManifoldKind::torus(static_cast<int>(mus.size())));
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) draw_von_mises_torus(mus, kappas, rng, out);
    return out;
}

PointCloud sample_uniform(const ManifoldKind& kind, std::size_t n, std::uint64_t seed, std::span<const double> box_lo,
                          std::span<const double> box_hi) {
    Rng rng(seed);
    PointCloud out(kind);
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) draw_uniform(kind, rng, out, box_lo, box_hi);
    return out;
}

PointCloud sample_mixture(const ManifoldKind& kind, std::span<const WeightedSampler> components, std::size_t n,
                          std::uint64_t seed, std::vector<std::size_t>* labels) {
    if (components.empty()) throw DomainError("mixture needs at least one component");
    double total = 0.0;
    for (const auto& c : components) {
        if (!(c.weight >= 0.0)) throw DomainError("mixture weights must be non-negative");
        total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-9) throw DomainError("mixture weights must sum to 1");

    std::vector<double> cumulative;
    double acc = 0.0;
    for (const auto& c : components) cumulative.push_back(acc += c.weight);

    Rng choose(mix_seed(seed, 0x6d6978ULL));
    Rng draw(seed);
    PointCloud out(kind);
    out.reserve(n);
    if (labels) labels->clear();
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t k = 0;
        if (components.size() > 1) {
            const double u = choose.uniform() * acc;
            k = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
            k = std::min(k, components.size() - 1);
        }
        components[k].draw(draw, out);
        if (labels) labels->push_back(k);
    }
    return out;
}

}  // namespace hdr
