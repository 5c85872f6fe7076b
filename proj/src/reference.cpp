#include "hdr/reference.hpp"

#include <algorithm>
#include <cmath>

#include "hdr/error.hpp"

namespace hdr::reference {

std::vector<double> nearest_distances(const PointCloud& queries, const PointCloud& targets) {
    const ManifoldKind& kind = queries.kind();
    std::vector<double> out(queries.size(), HUGE_VAL);
    for (std::size_t i = 0; i < queries.size(); ++i) {
        for (std::size_t j = 0; j < targets.size(); ++j) out[i] = std::min(out[i], distance(kind, queries[i], targets[j]));
    }
    return out;
}

double directed_hausdorff(const PointCloud& a, const PointCloud& b) {
    if (b.empty()) throw DomainError("directed Hausdorff distance to an empty set");
    double worst = 0.0;
    for (double d : nearest_distances(a, b)) worst = std::max(worst, d);
    return worst;
}

Mask dilate(const Grid& grid, const Mask& mask, double r) {
    const PointCloud& nodes = grid.nodes();
    Mask out(nodes.size(), 0);
    for (std::size_t g = 0; g < nodes.size(); ++g) {
        for (std::size_t h = 0; h < nodes.size(); ++h) {
            if (mask[h] && distance(nodes.kind(), nodes[g], nodes[h]) <= r) {
                out[g] = 1;
                break;
            }
        }
    }
    return out;
}

Mask erode(const Grid& grid, const Mask& mask, double r) {
    const PointCloud& nodes = grid.nodes();
    Mask out(nodes.size(), 0);
    for (std::size_t g = 0; g < nodes.size(); ++g) {
        bool inside = true;
        for (std::size_t h = 0; h < nodes.size() && inside; ++h) {
            if (!mask[h] && distance(nodes.kind(), nodes[g], nodes[h]) <= r) inside = false;
        }
        out[g] = inside ? 1 : 0;
    }
    return out;
}

Mask ball_union(const Grid& grid, const PointCloud& centers, double r) {
    const PointCloud& nodes = grid.nodes();
    Mask out(nodes.size(), 0);
    for (std::size_t g = 0; g < nodes.size(); ++g) {
        for (std::size_t c = 0; c < centers.size(); ++c) {
            if (distance(nodes.kind(), nodes[g], centers[c]) <= r) {
                out[g] = 1;
                break;
            }
        }
    }
    return out;
}

Mask isolated_from(const PointCloud& candidates, const PointCloud& excluded, double r) {
    Mask out(candidates.size(), 1);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        for (std::size_t j = 0; j < excluded.size(); ++j) {
            if (distance(candidates.kind(), candidates[i], excluded[j]) <= r) {
                out[i] = 0;
                break;
            }
        }
    }
    return out;
}

std::vector<double> kde(const PointCloud& sample, const KernelConfig& config, const PointCloud& queries) {
    if (sample.empty()) throw DomainError("kernel density estimate of an empty sample");
    const double c = config.precision();
    const double norm = std::exp(kernel_log_norm(config.kind, c, sample.kind().dim()));
    std::vector<double> out(queries.size(), 0.0);
    for (std::size_t q = 0; q < queries.size(); ++q) {
        for (std::size_t i = 0; i < sample.size(); ++i) {
            out[q] += norm * std::exp(c * kernel_exponent(config.kind, queries[q], sample[i]));
        }
        out[q] /= static_cast<double>(sample.size());
    }
    return out;
}

std::vector<double> loo_log_likelihood(const PointCloud& sample, KernelKind kind, std::span<const double> precisions) {
    const std::size_t n = sample.size();
    if (n < 2) throw DomainError("leave-one-out likelihood needs at least two points");
    std::vector<double> total(precisions.size(), 0.0);
    std::vector<double> terms;
    for (std::size_t m = 0; m < precisions.size(); ++m) {
        const double c = precisions[m];
        const double log_norm = kernel_log_norm(kind, c, sample.kind().dim());
        for (std::size_t i = 0; i < n; ++i) {
            terms.clear();
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) terms.push_back(c * kernel_exponent(kind, sample[i], sample[j]));
            }
            const double top = *std::max_element(terms.begin(), terms.end());
            double s = 0.0;
            for (double t : terms) s += std::exp(t - top);
            total[m] += top + std::log(s) + log_norm - std::log(static_cast<double>(n - 1));
        }
    }
    return total;
}

}  // namespace hdr::reference
