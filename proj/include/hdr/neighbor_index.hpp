#pragma once

#include <cstddef>
#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <unordered_map>
#include <vector>

#include "hdr/manifold.hpp"

namespace hdr {

/// Uniform cell hash over a search space in which geodesic distance is a
/// monotone function of a (possibly periodic) Euclidean metric: the embedding
/// chord for S^2, wrapped angles for tori, the coordinates themselves for R^d.
/// Pruning is conservative and every reported distance is the exact
/// `hdr::distance`, so results match a linear scan bit for bit.
class NeighborIndex {
public:
    struct Hit {
        std::size_t index = std::numeric_limits<std::size_t>::max();
        double distance = std::numeric_limits<double>::infinity();
    };

    explicit NeighborIndex(const PointCloud& points);

    std::size_t size() const { return n_; }
    const ManifoldKind& kind() const { return kind_; }

    /// Nearest point; ties resolve to the smallest index. Empty index returns
    /// an infinite distance.
    Hit nearest(std::span<const double> q) const;

    /// True iff some point lies within geodesic distance r (closed ball).
    bool any_within(std::span<const double> q, double r) const;

    /// Indices within the closed ball, in ascending order.
    std::vector<std::size_t> within(std::span<const double> q, double r) const;

    template <class F>
    void for_each_within(std::span<const double> q, double r, F&& f) const {
        visit_ball(q, r, [&](std::size_t i, double d) {
            f(i, d);
            return true;
        });
    }

private:
    std::span<const double> point(std::size_t i) const { return {coords_.data() + i * stride_, stride_}; }

    double to_search(double geodesic) const;
    void cell_of(std::span<const double> q, std::vector<long>& cell) const;
    std::uint64_t key(const std::vector<long>& cell) const;

    // Calls f(i, d) for every point with d <= r until f returns false.
    // Returns false if stopped early.
    template <class F>
    bool visit_ball(std::span<const double> q, double r, F&& f) const;

    Hit brute_nearest(std::span<const double> q) const;

    ManifoldKind kind_;
    std::size_t n_ = 0;
    std::size_t stride_ = 0;
    std::vector<double> coords_;

    bool brute_ = true;
    std::size_t dims_ = 0;          // search-space dimension
    std::vector<double> lo_;        // per axis
    std::vector<double> h_;         // cell size per axis
    std::vector<long> m_;           // cells per axis
    std::vector<bool> periodic_;
    double h_min_ = 0.0;

    std::unordered_map<std::uint64_t, std::uint32_t> bucket_of_;
    std::vector<std::uint32_t> bucket_start_;
    std::vector<std::uint32_t> members_;
};

template <class F>
bool NeighborIndex::visit_ball(std::span<const double> q, double r, F&& f) const {
    if (n_ == 0 || !(r >= 0.0)) return true;
    if (brute_) {
        for (std::size_t i = 0; i < n_; ++i) {
            const double d = distance(kind_, q, point(i));
            if (d <= r && !f(i, d)) return false;
        }
        return true;
    }
    const double reach = to_search(r);
    std::vector<long> base;
    cell_of(q, base);
    std::vector<long> lo(dims_), hi(dims_), off(dims_), cell(dims_);
    for (std::size_t a = 0; a < dims_; ++a) {
        long k = static_cast<long>(reach / h_[a]) + 1;
        if (periodic_[a]) {
            const long down = (m_[a] - 1) / 2;
            lo[a] = -std::min(k, down);
            hi[a] = std::min(k, m_[a] - 1 - down);
        } else {
            lo[a] = -std::min(k, base[a]);
            hi[a] = std::min(k, m_[a] - 1 - base[a]);
        }
        off[a] = lo[a];
    }
    for (;;) {
        double bound = 0.0;
        for (std::size_t a = 0; a < dims_; ++a) {
            const long g = off[a] < 0 ? -off[a] - 1 : off[a] - 1;
            if (g > 0) bound += (g * h_[a]) * (g * h_[a]);
            long c = base[a] + off[a];
            if (periodic_[a]) c = ((c % m_[a]) + m_[a]) % m_[a];
            cell[a] = c;
        }
        if (bound <= reach * reach) {
            auto it = bucket_of_.find(key(cell));
            if (it != bucket_of_.end()) {
                for (std::uint32_t j = bucket_start_[it->second]; j < bucket_start_[it->second + 1]; ++j) {
                    const std::size_t i = members_[j];
                    const double d = distance(kind_, q, point(i));
                    if (d <= r && !f(i, d)) return false;
                }
            }
        }
        std::size_t a = 0;
        for (; a < dims_; ++a) {
            if (++off[a] <= hi[a]) break;
            off[a] = lo[a];
        }
        if (a == dims_) break;
    }
    return true;
}

}  // namespace hdr
