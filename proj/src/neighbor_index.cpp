#include "hdr/neighbor_index.hpp"

#include <algorithm>
#include <cmath>

namespace hdr {

namespace {

constexpr std::size_t kBruteForceSize = 32;
constexpr long kMaxCellsPerAxis = 1L << 20;
// Relative slack on the search radius; pruning must never drop a true neighbor.
constexpr double kSlack = 1e-9;

}  // namespace

NeighborIndex::NeighborIndex(const PointCloud& points)
    : kind_(points.kind()), n_(points.size()), stride_(points.stride()), coords_(points.flat()) {
    if (n_ <= kBruteForceSize) return;
    const double n = static_cast<double>(n_);

    switch (kind_.tag()) {
        case ManifoldKind::Tag::Sphere2: {
            dims_ = 3;
            const double h = std::sqrt(8.0 * kPi / n);
            const long m = std::clamp(static_cast<long>(std::ceil(2.0 / h)), 1L, kMaxCellsPerAxis);
            lo_.assign(3, -1.0);
            h_.assign(3, 2.0 / static_cast<double>(m));
            m_.assign(3, m);
            periodic_.assign(3, false);
            break;
        }
        case ManifoldKind::Tag::Circle:
        case ManifoldKind::Tag::Torus: {
            dims_ = stride_;
            if (dims_ > 6) return;
            const double h = kTwoPi * std::pow(2.0 / n, 1.0 / static_cast<double>(dims_));
            const long m = std::clamp(static_cast<long>(std::floor(kTwoPi / h)), 1L, kMaxCellsPerAxis);
            lo_.assign(dims_, 0.0);
            h_.assign(dims_, kTwoPi / static_cast<double>(m));
            m_.assign(dims_, m);
            periodic_.assign(dims_, true);
            break;
        }
        case ManifoldKind::Tag::Euclidean: {
            dims_ = stride_;
            if (dims_ > 6) return;
            std::vector<double> lo(dims_, HUGE_VAL), hi(dims_, -HUGE_VAL);
            for (std::size_t i = 0; i < n_; ++i) {
                for (std::size_t a = 0; a < dims_; ++a) {
                    lo[a] = std::min(lo[a], coords_[i * stride_ + a]);
                    hi[a] = std::max(hi[a], coords_[i * stride_ + a]);
                }
            }
            double vol = 1.0, max_extent = 0.0;
            for (std::size_t a = 0; a < dims_; ++a) max_extent = std::max(max_extent, hi[a] - lo[a]);
            if (!(max_extent > 0.0)) return;
            for (std::size_t a = 0; a < dims_; ++a) vol *= std::max(hi[a] - lo[a], max_extent * 1e-6);
            const double h = std::pow(vol * 2.0 / n, 1.0 / static_cast<double>(dims_));
            lo_ = lo;
            for (std::size_t a = 0; a < dims_; ++a) {
                const long m = std::clamp(static_cast<long>(std::floor((hi[a] - lo[a]) / h)) + 1, 1L, kMaxCellsPerAxis);
                m_.push_back(m);
                h_.push_back(std::max((hi[a] - lo[a]) / static_cast<double>(m), h * 1e-9));
            }
            periodic_.assign(dims_, false);
            break;
        }
    }
    h_min_ = *std::min_element(h_.begin(), h_.end());

    // Bucket points by cell key (CSR layout).
    std::vector<std::pair<std::uint64_t, std::uint32_t>> keyed(n_);
    std::vector<long> cell;
    for (std::size_t i = 0; i < n_; ++i) {
        cell_of(point(i), cell);
        keyed[i] = {key(cell), static_cast<std::uint32_t>(i)};
    }
    std::sort(keyed.begin(), keyed.end());
    members_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        if (i == 0 || keyed[i].first != keyed[i - 1].first) {
            bucket_of_.emplace(keyed[i].first, static_cast<std::uint32_t>(bucket_start_.size()));
            bucket_start_.push_back(static_cast<std::uint32_t>(i));
        }
        members_[i] = keyed[i].second;
    }
    bucket_start_.push_back(static_cast<std::uint32_t>(n_));
    brute_ = false;
}

double NeighborIndex::to_search(double geodesic) const {
    double s = geodesic;
    if (kind_.tag() == ManifoldKind::Tag::Sphere2) {
        s = geodesic >= kPi ? 2.0 : 2.0 * std::sin(0.5 * geodesic);
    }
    return s * (1.0 + kSlack) + kSlack;
}

void NeighborIndex::cell_of(std::span<const double> q, std::vector<long>& cell) const {
    cell.resize(dims_);
    for (std::size_t a = 0; a < dims_; ++a) {
        long c = static_cast<long>(std::floor((q[a] - lo_[a]) / h_[a]));
        if (periodic_[a]) c = ((c % m_[a]) + m_[a]) % m_[a];
        else c = std::clamp(c, 0L, m_[a] - 1);
        cell[a] = c;
    }
}

std::uint64_t NeighborIndex::key(const std::vector<long>& cell) const {
    std::uint64_t k = 0;
    for (std::size_t a = 0; a < dims_; ++a) k = k * static_cast<std::uint64_t>(m_[a]) + static_cast<std::uint64_t>(cell[a]);
    return k;
}

NeighborIndex::Hit NeighborIndex::brute_nearest(std::span<const double> q) const {
    Hit best;
    for (std::size_t i = 0; i < n_; ++i) {
        const double d = distance(kind_, q, point(i));
        if (d < best.distance) best = {i, d};
    }
    return best;
}

NeighborIndex::Hit NeighborIndex::nearest(std::span<const double> q) const {
    if (n_ == 0) return {};
    if (brute_) return brute_nearest(q);

    std::vector<long> base;
    cell_of(q, base);
    std::vector<long> reach_lo(dims_), reach_hi(dims_), off(dims_), lo(dims_), hi(dims_), cell(dims_);
    long max_ring = 0;
    for (std::size_t a = 0; a < dims_; ++a) {
        if (periodic_[a]) {
            reach_lo[a] = (m_[a] - 1) / 2;
            reach_hi[a] = m_[a] - 1 - reach_lo[a];
        } else {
            reach_lo[a] = base[a];
            reach_hi[a] = m_[a] - 1 - base[a];
        }
        max_ring = std::max({max_ring, reach_lo[a], reach_hi[a]});
    }

    Hit best;
    std::size_t visited = 0;
    const std::size_t budget = 4 * bucket_start_.size() + 64;
    for (long k = 0; k <= max_ring; ++k) {
        // Any point in ring k is at least (k - 1) cells away along some axis.
        if (best.distance < HUGE_VAL && static_cast<double>(k - 1) * h_min_ > to_search(best.distance)) break;
        for (std::size_t a = 0; a < dims_; ++a) {
            lo[a] = -std::min(k, reach_lo[a]);
            hi[a] = std::min(k, reach_hi[a]);
            off[a] = lo[a];
        }
        for (;;) {
            long cheb = 0;
            for (std::size_t a = 0; a < dims_; ++a) cheb = std::max(cheb, off[a] < 0 ? -off[a] : off[a]);
            if (cheb == k) {
                if (++visited > budget) return brute_nearest(q);
                for (std::size_t a = 0; a < dims_; ++a) {
                    long c = base[a] + off[a];
                    if (periodic_[a]) c = ((c % m_[a]) + m_[a]) % m_[a];
                    cell[a] = c;
                }
                auto it = bucket_of_.find(key(cell));
                if (it != bucket_of_.end()) {
                    for (std::uint32_t j = bucket_start_[it->second]; j < bucket_start_[it->second + 1]; ++j) {
                        const std::size_t i = members_[j];
                        const double d = distance(kind_, q, point(i));
                        if (d < best.distance || (d == best.distance && i < best.index)) best = {i, d};
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
    }
    return best;
}

bool NeighborIndex::any_within(std::span<const double> q, double r) const {
    return !visit_ball(q, r, [](std::size_t, double) { return false; });
}

std::vector<std::size_t> NeighborIndex::within(std::span<const double> q, double r) const {
    std::vector<std::size_t> out;
    visit_ball(q, r, [&](std::size_t i, double) {
        out.push_back(i);
        return true;
    });
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace hdr
