#include "mpifs/metric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace mpifs {
namespace {

constexpr std::size_t kBruteForcePairLimit = std::size_t{4096} * 4096;

double dist_impl(const Point& a, const Point& b, PointMetric metric) {
    if (metric == PointMetric::euclidean) return (a - b).norm();
    double m = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Uniform-bucket index over a point set, CSR layout, ~1 point per cell.
class BucketIndex {
public:
    BucketIndex(std::span<const Point> pts, PointMetric metric) : pts_(pts), metric_(metric) {
        d_ = static_cast<int>(pts.front().size());
        lo_ = pts.front();
        hi_ = pts.front();
        for (const Point& p : pts)
            for (int i = 0; i < d_; ++i) {
                lo_[i] = std::min(lo_[i], p[i]);
                hi_[i] = std::max(hi_[i], p[i]);
            }
        double prod = 1.0;
        int live_axes = 0;
        for (int i = 0; i < d_; ++i) {
            const double span = hi_[i] - lo_[i];
            if (span > 0.0) {
                prod *= span;
                ++live_axes;
            }
        }
        cells_.assign(d_, 1);
        if (live_axes > 0) {
            const double cell_side =
                std::pow(prod / static_cast<double>(pts.size()), 1.0 / live_axes);
            for (int i = 0; i < d_; ++i) {
                const double span = hi_[i] - lo_[i];
                if (span > 0.0 && cell_side > 0.0)
                    cells_[i] = std::max<std::int64_t>(
                        1, std::min<std::int64_t>(1 << 12, static_cast<std::int64_t>(span / cell_side) + 1));
            }
        }
        step_.assign(d_, 0.0);
        for (int i = 0; i < d_; ++i)
            step_[i] = cells_[i] > 0 ? (hi_[i] - lo_[i]) / static_cast<double>(cells_[i]) : 0.0;
        stride_.assign(d_, 1);
        for (int i = d_ - 2; i >= 0; --i) stride_[i] = stride_[i + 1] * cells_[i + 1];
        const std::int64_t total = stride_[0] * cells_[0];
        offsets_.assign(total + 1, 0);
        for (const Point& p : pts) ++offsets_[flat_cell(p) + 1];
        for (std::int64_t c = 0; c < total; ++c) offsets_[c + 1] += offsets_[c];
        order_.resize(pts.size());
        std::vector<std::int64_t> cursor(offsets_.begin(), offsets_.end() - 1);
        for (std::size_t i = 0; i < pts.size(); ++i)
            order_[cursor[flat_cell(pts[i])]++] = static_cast<std::uint32_t>(i);
    }

    // exact distance from q to the nearest indexed point
    double nearest(const Point& q) const {
        std::vector<std::int64_t> center(d_);
        for (int i = 0; i < d_; ++i) center[i] = axis_cell(q[i], i);
        double best = std::numeric_limits<double>::infinity();
        for (std::int64_t radius = 0;; ++radius) {
            scan_shell(q, center, radius, best);
            // Everything beyond the scanned index box differs from q on some
            // axis by at least the distance to that box face.
            double outside = std::numeric_limits<double>::infinity();
            bool box_covers_all = true;
            for (int i = 0; i < d_; ++i) {
                const std::int64_t lo_cell = center[i] - radius;
                const std::int64_t hi_cell = center[i] + radius;
                if (lo_cell > 0) {
                    box_covers_all = false;
                    outside = std::min(outside,
                                       std::max(0.0, q[i] - (lo_[i] + static_cast<double>(lo_cell) * step_[i])));
                }
                if (hi_cell < cells_[i] - 1) {
                    box_covers_all = false;
                    outside = std::min(outside,
                                       std::max(0.0, (lo_[i] + static_cast<double>(hi_cell + 1) * step_[i]) - q[i]));
                }
            }
            if (box_covers_all || outside >= best) return best;
        }
    }

private:
    std::int64_t axis_cell(double coord, int axis) const {
        if (step_[axis] <= 0.0) return 0;
        auto c = static_cast<std::int64_t>((coord - lo_[axis]) / step_[axis]);
        return std::clamp<std::int64_t>(c, 0, cells_[axis] - 1);
    }

    std::int64_t flat_cell(const Point& p) const {
        std::int64_t f = 0;
        for (int i = 0; i < d_; ++i) f += axis_cell(p[i], i) * stride_[i];
        return f;
    }

    void scan_shell(const Point& q, const std::vector<std::int64_t>& center, std::int64_t radius,
                    double& best) const {
        std::vector<std::int64_t> lo(d_), hi(d_), idx(d_);
        for (int i = 0; i < d_; ++i) {
            lo[i] = std::max<std::int64_t>(0, center[i] - radius);
            hi[i] = std::min<std::int64_t>(cells_[i] - 1, center[i] + radius);
            if (lo[i] > hi[i]) return;
            idx[i] = lo[i];
        }
        while (true) {
            std::int64_t cheb = 0;
            for (int i = 0; i < d_; ++i) cheb = std::max(cheb, std::abs(idx[i] - center[i]));
            if (cheb == radius) {
                std::int64_t flat = 0;
                for (int i = 0; i < d_; ++i) flat += idx[i] * stride_[i];
                for (std::int64_t k = offsets_[flat]; k < offsets_[flat + 1]; ++k)
                    best = std::min(best, dist_impl(q, pts_[order_[k]], metric_));
            }
            int axis = d_ - 1;
            while (axis >= 0 && ++idx[axis] > hi[axis]) {
                idx[axis] = lo[axis];
                --axis;
            }
            if (axis < 0) break;
        }
    }

    std::span<const Point> pts_;
    PointMetric metric_;
    int d_ = 0;
    Point lo_, hi_;
    std::vector<std::int64_t> cells_, stride_;
    std::vector<double> step_;
    std::vector<std::int64_t> offsets_;
    std::vector<std::uint32_t> order_;
};

double directed_distance(std::span<const Point> from, std::span<const Point> to,
                         PointMetric metric) {
    double worst = 0.0;
    if (from.size() * to.size() <= kBruteForcePairLimit) {
        for (const Point& a : from) {
            double nearest = std::numeric_limits<double>::infinity();
            for (const Point& b : to) nearest = std::min(nearest, dist_impl(a, b, metric));
            worst = std::max(worst, nearest);
        }
        return worst;
    }
    BucketIndex index(to, metric);
    for (const Point& a : from) worst = std::max(worst, index.nearest(a));
    return worst;
}

// Levels attained by either map, descending. Cuts only change at these
// values, so taking the sup over them is exact, not an approximation.
std::vector<double> attained_levels(const std::vector<PointValue>& a,
                                    const std::vector<PointValue>& b) {
    std::vector<double> levels;
    levels.reserve(a.size() + b.size());
    for (const PointValue& e : a) levels.push_back(e.value);
    for (const PointValue& e : b) levels.push_back(e.value);
    std::sort(levels.begin(), levels.end(), std::greater<>());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    return levels;
}

// Shared sup-over-levels kernel for d_f and d_theta: walk levels downward,
// growing both super-level sets incrementally.
double level_sup_distance(const std::vector<PointValue>& a, const std::vector<PointValue>& b,
                          PointMetric metric) {
    const std::vector<double> levels = attained_levels(a, b);
    auto by_value_desc = [](const PointValue* x, const PointValue* y) {
        return x->value > y->value;
    };
    std::vector<const PointValue*> a_sorted, b_sorted;
    a_sorted.reserve(a.size());
    b_sorted.reserve(b.size());
    for (const PointValue& e : a) a_sorted.push_back(&e);
    for (const PointValue& e : b) b_sorted.push_back(&e);
    std::sort(a_sorted.begin(), a_sorted.end(), by_value_desc);
    std::sort(b_sorted.begin(), b_sorted.end(), by_value_desc);

    std::vector<Point> cut_a, cut_b;
    std::size_t ia = 0, ib = 0;
    double sup = 0.0;
    for (double level : levels) {
        while (ia < a_sorted.size() && a_sorted[ia]->value >= level) cut_a.push_back(a_sorted[ia++]->x);
        while (ib < b_sorted.size() && b_sorted[ib]->value >= level) cut_b.push_back(b_sorted[ib++]->x);
        sup = std::max(sup, hausdorff(cut_a, cut_b, metric));
    }
    return sup;
}

}  // namespace

double point_distance(const Point& a, const Point& b, PointMetric metric) {
    if (a.size() != b.size()) throw DomainError("distance: dimension mismatch");
    return dist_impl(a, b, metric);
}

double hausdorff(std::span<const Point> a, std::span<const Point> b, PointMetric metric) {
    if (a.empty() || b.empty()) throw DomainError("hausdorff: sets must be nonempty");
    if (a.front().size() != b.front().size()) throw DomainError("hausdorff: dimension mismatch");
    return std::max(directed_distance(a, b, metric), directed_distance(b, a, metric));
}

double fuzzy_distance(const FuzzyMap& u, const FuzzyMap& v, PointMetric metric) {
    if (u.empty() || v.empty()) throw InvalidMeasureError("fuzzy_distance: empty fuzzy set");
    return level_sup_distance(u.entries(), v.entries(), metric);
}

double dtheta_distance(const DensityMap& mu, const DensityMap& nu, PointMetric metric) {
    if (mu.empty() || nu.empty()) throw InvalidMeasureError("dtheta_distance: empty measure");
    return level_sup_distance(mu.entries(), nu.entries(), metric);
}

}  // namespace mpifs
