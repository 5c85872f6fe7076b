#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "hdr/density.hpp"
#include "hdr/morphology.hpp"

namespace hdr {

/// Sample with cached density values, split at lambda into the high part
/// (f >= lambda) and the low part (f < lambda).
struct LabeledSample {
    PointCloud points;
    std::vector<double> fn_values;
    double lambda = 0.0;
    std::vector<std::size_t> plus;
    std::vector<std::size_t> minus;
};

LabeledSample split_sample(PointCloud points, std::vector<double> fn_values, double lambda);
LabeledSample split_sample(PointCloud points, const DensityModel& density, double lambda);

struct HdrEstimate {
    BallUnionSet set;
    double lambda = 0.0;
    std::optional<double> gamma;
    std::vector<std::size_t> selected;  ///< indices into the labeled sample

    double radius() const { return set.radius; }
    bool empty() const { return set.empty(); }
};

/// High points with no low point within distance r_n, each inflated to a
/// closed ball of radius r_n.
HdrEstimate estimate_hdr(const LabeledSample& sample, double rn);

bool hdr_contains(const HdrEstimate& est, std::span<const double> x);

/// Largest lambda such that at least a fraction 1 - gamma of the values are
/// >= lambda. Returns an order statistic; gamma in (0, 1).
double estimate_level(std::span<const double> fn_values, double gamma);

/// Level from the sample's own density values, then the estimate at that
/// level. An empty result is returned as is (with a warning on stderr).
HdrEstimate estimate_hdr_by_probability(PointCloud points, const DensityModel& density, double gamma, double rn);

/// Grid nodes whose density value is >= lambda.
GridSet plugin_hdr(const DensityModel& density, double lambda, GridPtr grid);

/// Monte Carlo level lambda_gamma of an analytic density: the same order
/// statistic as `estimate_level` over oracle_n draws (oracle_n >= 1e5).
double true_level(const AnalyticMixture& density, double gamma, std::size_t oracle_n, std::uint64_t seed);

/// Components of the estimate: centers whose balls intersect (d <= 2 r_n)
/// are linked. Labels are aligned with `selected`.
Components connected_components(const HdrEstimate& est);

/// sup over lambda of |P(Y >= lambda) - P_n(Y >= lambda)| between the
/// empirical laws of two samples of a real variable.
double upper_tail_deviation(std::span<const double> sample, std::span<const double> reference);

nlohmann::json to_json(const HdrEstimate& est);

}  // namespace hdr
