#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "optrec/geometry.hpp"
#include "optrec/points.hpp"

namespace optrec {

/// Nearest-node queries in an arbitrary NormSpec. Brute force for small node
/// sets; larger sets use a uniform bucket grid over the node bounding box
/// with conservative ring pruning (valid for every weighted l_p norm since
/// ||v|| >= min_w * ||v||_inf >= min_w * max_j |v_j|).
class NearestQuery {
public:
    NearestQuery(const PointSet& nodes, NormSpec norm)
        : nodes_(&nodes), norm_(std::move(norm)) {
        if (nodes.size() >= 64 && nodes.dim() >= 1 && nodes.dim() <= 4) build_grid();
    }

    std::size_t size() const { return nodes_->size(); }
    const NormSpec& norm() const { return norm_; }

    double min_distance(std::span<const double> x) const { return query(x).second; }
    std::size_t nearest_index(std::span<const double> x) const { return query(x).first; }

    /// (index of nearest node, distance); ties broken by lowest index.
    std::pair<std::size_t, double> query(std::span<const double> x) const {
        if (!grid_built_) return brute(x);
        return grid_query(x);
    }

private:
    std::pair<std::size_t, double> brute(std::span<const double> x) const {
        std::size_t best = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < nodes_->size(); ++i) {
            double d = distance(x, nodes_->point(i), norm_);
            if (d < bd) {
                bd = d;
                best = i;
            }
        }
        return {best, bd};
    }

    void build_grid() {
        const std::size_t d = nodes_->dim();
        const std::size_t n = nodes_->size();
        glo_.assign(d, std::numeric_limits<double>::infinity());
        ghi_.assign(d, -std::numeric_limits<double>::infinity());
        for (std::size_t i = 0; i < n; ++i) {
            auto p = nodes_->point(i);
            for (std::size_t j = 0; j < d; ++j) {
                glo_[j] = std::min(glo_[j], p[j]);
                ghi_[j] = std::max(ghi_[j], p[j]);
            }
        }
        const std::size_t per_axis = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::floor(
                   std::pow(static_cast<double>(n), 1.0 / static_cast<double>(d)))));
        res_.assign(d, per_axis);
        cell_.assign(d, 1.0);
        min_cell_ = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < d; ++j) {
            double span = ghi_[j] - glo_[j];
            if (!(span > 0.0)) {
                res_[j] = 1;
                cell_[j] = 1.0;
            } else {
                cell_[j] = span / static_cast<double>(res_[j]);
            }
            min_cell_ = std::min(min_cell_, cell_[j]);
        }
        std::size_t total = 1;
        for (std::size_t j = 0; j < d; ++j) total *= res_[j];
        buckets_.assign(total, {});
        for (std::size_t i = 0; i < n; ++i) buckets_[flat_cell(nodes_->point(i))].push_back(i);
        grid_built_ = true;
    }

    std::size_t clamp_coord(double x, std::size_t j) const {
        double t = (x - glo_[j]) / cell_[j];
        long c = static_cast<long>(std::floor(t));
        c = std::clamp(c, 0L, static_cast<long>(res_[j]) - 1L);
        return static_cast<std::size_t>(c);
    }

    std::size_t flat_cell(std::span<const double> x) const {
        std::size_t idx = 0;
        for (std::size_t j = 0; j < nodes_->dim(); ++j)
            idx = idx * res_[j] + clamp_coord(x[j], j);
        return idx;
    }

    std::pair<std::size_t, double> grid_query(std::span<const double> x) const {
        const std::size_t d = nodes_->dim();
        std::vector<long> c(d), lo(d), hi(d), idx(d);
        for (std::size_t j = 0; j < d; ++j) c[j] = static_cast<long>(clamp_coord(x[j], j));
        std::size_t best = 0;
        double bd = std::numeric_limits<double>::infinity();
        const double stop_scale = norm_.min_weight() * min_cell_;
        std::size_t max_ring = 0;
        for (std::size_t j = 0; j < d; ++j) max_ring = std::max(max_ring, res_[j]);
        for (std::size_t ring = 0; ring <= max_ring; ++ring) {
            for (std::size_t j = 0; j < d; ++j) {
                lo[j] = std::max(0L, c[j] - static_cast<long>(ring));
                hi[j] = std::min(static_cast<long>(res_[j]) - 1, c[j] + static_cast<long>(ring));
                idx[j] = lo[j];
            }
            // odometer over the ring box; keep only cells at Chebyshev
            // cell-distance exactly `ring`
            for (;;) {
                long cheby = 0;
                for (std::size_t j = 0; j < d; ++j) cheby = std::max(cheby, std::labs(idx[j] - c[j]));
                if (static_cast<std::size_t>(cheby) == ring) {
                    std::size_t flat = 0;
                    for (std::size_t j = 0; j < d; ++j)
                        flat = flat * res_[j] + static_cast<std::size_t>(idx[j]);
                    for (std::size_t i : buckets_[flat]) {
                        double dist_i = distance(x, nodes_->point(i), norm_);
                        if (dist_i < bd || (dist_i == bd && i < best)) {
                            bd = dist_i;
                            best = i;
                        }
                    }
                }
                std::size_t j = 0;
                for (; j < d; ++j) {
                    if (++idx[j] <= hi[j]) break;
                    idx[j] = lo[j];
                }
                if (j == d) break;
            }
            // cells at Chebyshev cell-distance >= ring+1 contain only points
            // at norm distance >= ring * min cell * min weight
            if (bd <= stop_scale * static_cast<double>(ring)) break;
        }
        if (!(bd < std::numeric_limits<double>::infinity())) return brute(x);
        return {best, bd};
    }

    const PointSet* nodes_;
    NormSpec norm_;
    bool grid_built_ = false;
    double min_cell_ = 1.0;
    std::vector<double> glo_, ghi_, cell_;
    std::vector<std::size_t> res_;
    std::vector<std::vector<std::size_t>> buckets_;
};

} // namespace optrec
