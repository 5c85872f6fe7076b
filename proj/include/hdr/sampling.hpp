#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hdr/manifold.hpp"
#include "hdr/rng.hpp"

namespace hdr {

// Single draws appended to `out`. These are the building blocks shared by
// the n-sample functions below and by mixture sampling.
void draw_vmf(std::span<const double> mu, double kappa, Rng& rng, PointCloud& out);
void draw_von_mises_torus(std::span<const double> mus, std::span<const double> kappas, Rng& rng, PointCloud& out);
void draw_gaussian(std::span<const double> mean, double sigma, Rng& rng, PointCloud& out);

/// One von Mises angle (Best-Fisher rejection), not wrapped.
double draw_von_mises_angle(double mu, double kappa, Rng& rng);

/// von Mises-Fisher sample on S^2. kappa = 0 is the uniform distribution.
PointCloud sample_vmf(const ManifoldPoint& mu, double kappa, std::size_t n, std::uint64_t seed);

/// Product of independent von Mises laws on T^d (d = mus.size()).
PointCloud sample_von_mises_torus(std::span<const double> mus, std::span<const double> kappas, std::size_t n,
                                  std::uint64_t seed);

/// Uniform sample on a compact manifold, or on a box for Euclidean space.
PointCloud sample_uniform(const ManifoldKind& kind, std::size_t n, std::uint64_t seed,
                          std::span<const double> box_lo = {}, std::span<const double> box_hi = {});
void draw_uniform(const ManifoldKind& kind, Rng& rng, PointCloud& out, std::span<const double> box_lo = {},
                  std::span<const double> box_hi = {});

struct WeightedSampler {
    double weight;
    std::function<void(Rng&, PointCloud&)> draw;
};

/// Categorical component choice on a stream derived from `seed`; component
/// draws consume the stream seeded with `seed` itself, so a one-component
/// mixture reproduces the bare sampler exactly.
PointCloud sample_mixture(const ManifoldKind& kind, std::span<const WeightedSampler> components, std::size_t n,
                          std::uint64_t seed, std::vector<std::size_t>* labels = nullptr);

}  // namespace hdr
