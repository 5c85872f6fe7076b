#include "hdr/hdr.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "hdr/error.hpp"
#include "hdr/kernels.hpp"

namespace hdr {

LabeledSample split_sample(PointCloud points, std::vector<double> fn_values, double lambda) {
    if (points.empty()) throw DomainError("cannot split an empty sample");
    if (fn_values.size() != points.size()) throw DomainError("one density value per sample point required");
    LabeledSample s{std::move(points), std::move(fn_values), lambda, {}, {}};
    for (std::size_t i = 0; i < s.fn_values.size(); ++i) (s.fn_values[i] >= lambda ? s.plus : s.minus).push_back(i);
    return s;
}

LabeledSample split_sample(PointCloud points, const DensityModel& density, double lambda) {
    if (!(points.kind() == density.kind())) throw DomainError("sample and density live on different manifolds");
    std::vector<double> values = density.evaluate(points);
    return split_sample(std::move(points), std::move(values), lambda);
}

HdrEstimate estimate_hdr(const LabeledSample& sample, double rn) {
    if (!(rn > 0.0)) throw DomainError("radius r_n must be > 0");
    const PointCloud high = sample.points.subset(sample.plus);
    const PointCloud low = sample.points.subset(sample.minus);
    const kernels::Mask keep = kernels::isolated_from(high, low, rn);

    HdrEstimate est{BallUnionSet(sample.points.kind(), rn), sample.lambda, std::nullopt, {}};
    for (std::size_t k = 0; k < keep.size(); ++k) {
        if (!keep[k]) continue;
        est.selected.push_back(sample.plus[k]);
        est.set.centers.push_back_raw(high[k]);
    }
    return est;
}

bool hdr_contains(const HdrEstimate& est, std::span<const double> x) { return est.set.contains(x); }

double estimate_level(std::span<const double> fn_values, double gamma) {
    const std::size_t n = fn_values.size();
    if (n == 0) throw DomainError("level of an empty sample");
    if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("gamma must lie in (0, 1)");
    // Smallest count c with c/n >= 1 - gamma, evaluated exactly as the
    // definition is; the level is then the c-th largest value.
    const double n_d = static_cast<double>(n);
    const double target = 1.0 - gamma;
    std::size_t c = static_cast<std::size_t>(std::ceil(target * n_d));
    c = std::clamp<std::size_t>(c, 1, n);
    while (c > 1 && static_cast<double>(c - 1) / n_d >= target) --c;
    while (c < n && !(static_cast<double>(c) / n_d >= target)) ++c;

    std::vector<double> v(fn_values.begin(), fn_values.end());
    const std::size_t j = n - c;  // zero-based ascending position
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(j), v.end());
    return v[j];
}

HdrEstimate estimate_hdr_by_probability(PointCloud points, const DensityModel& density, double gamma, double rn) {
    std::vector<double> values = density.evaluate(points);
    const double lambda = estimate_level(values, gamma);
    HdrEstimate est = estimate_hdr(split_sample(std::move(points), std::move(values), lambda), rn);
    est.gamma = gamma;
    if (est.empty()) {
        std::cerr << "warning: estimate at gamma=" << gamma << " (lambda=" << lambda << ", r_n=" << rn
                  << ") is empty\n";
    }
    return est;
}

GridSet plugin_hdr(const DensityModel& density, double lambda, GridPtr grid) {
    if (!(grid->kind() == density.kind())) throw DomainError("density and grid live on different manifolds");
    const std::vector<double> values = density.evaluate(grid->nodes());
    kernels::Mask m(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m[i] = values[i] >= lambda ? 1 : 0;
    return GridSet(std::move(grid), std::move(m));
}

double true_level(const AnalyticMixture& density, double gamma, std::size_t oracle_n, std::uint64_t seed) {
    if (oracle_n < 100000) throw DomainError("oracle sample size must be at least 1e5");
    const PointCloud sample = density.sample(oracle_n, seed);
    const std::vector<double> values = DensityModel(density).evaluate(sample);
    return estimate_level(values, gamma);
}

Components connected_components(const HdrEstimate& est) {
    return link_components(est.set.centers, 2.0 * est.radius());
}

double upper_tail_deviation(std::span<const double> sample, std::span<const double> reference) {
    if (sample.empty() || reference.empty()) throw DomainError("tail deviation needs two non-empty samples");
    std::vector<double> a(sample.begin(), sample.end()), b(reference.begin(), reference.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    // Both tail functions are constant between consecutive pooled values, so
    // a merge over the pooled values is exhaustive.
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double worst = 0.0;
    while (i < a.size() || j < b.size()) {
        const double x = j == b.size() || (i < a.size() && a[i] < b[j]) ? a[i] : b[j];
        const double ta = static_cast<double>(a.size() - i) / na;
        const double tb = static_cast<double>(b.size() - j) / nb;
        worst = std::max(worst, std::abs(ta - tb));
        while (i < a.size() && a[i] == x) ++i;
        while (j < b.size() && b[j] == x) ++j;
    }
    return worst;
}

nlohmann::json to_json(const HdrEstimate& est) {
    nlohmann::json j = to_json(est.set);
    j["lambda"] = est.lambda;
    if (est.gamma) j["gamma"] = *est.gamma;
    j["selected"] = est.selected;
    const Components c = connected_components(est);
    j["component_labels"] = c.labels;
    j["components"] = c.count;
    return j;
}

}  // namespace hdr
