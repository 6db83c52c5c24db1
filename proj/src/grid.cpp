#include "mpifs/grid.hpp"

#include <cmath>

namespace mpifs {

Grid::Grid(Box box, std::vector<int> cells) : box_(std::move(box)), cells_(std::move(cells)) {
    if (static_cast<int>(cells_.size()) != box_.dim())
        throw DomainError("grid: need one cell count per axis");
    for (int n : cells_)
        if (n < 2) throw DomainError("grid: cell counts must be >= 2");
    const int d = box_.dim();
    stride_.assign(d, 1);
    for (int i = d - 2; i >= 0; --i)
        stride_[i] = stride_[i + 1] * (static_cast<std::int64_t>(cells_[i + 1]) + 1);
    node_count_ = stride_[0] * (static_cast<std::int64_t>(cells_[0]) + 1);
    double diag2 = 0.0;
    for (int i = 0; i < d; ++i) {
        const double h = (box_.upper[i] - box_.lower[i]) / cells_[i];
        diag2 += h * h;
    }
    epsilon_ = 0.5 * std::sqrt(diag2);
}

Point Grid::node(std::int64_t flat) const {
    const int d = box_.dim();
    Point p(d);
    for (int i = 0; i < d; ++i) {
        const std::int64_t k = flat / stride_[i];
        flat -= k * stride_[i];
        p[i] = box_.lower[i] + (static_cast<double>(k) * (box_.upper[i] - box_.lower[i])) /
                                   static_cast<double>(cells_[i]);
    }
    return p;
}

std::int64_t Grid::project_index(const Point& x, bool* clamped) const {
    if (x.size() != box_.dim()) throw DomainError("grid: point dimension mismatch");
    std::int64_t flat = 0;
    bool hit_boundary = false;
    for (int i = 0; i < box_.dim(); ++i) {
        double xi = x[i];
        if (xi < box_.lower[i]) {
            xi = box_.lower[i];
            hit_boundary = true;
        } else if (xi > box_.upper[i]) {
            xi = box_.upper[i];
            hit_boundary = true;
        }
        const double t =
            (xi - box_.lower[i]) * static_cast<double>(cells_[i]) / (box_.upper[i] - box_.lower[i]);
        // nearest index, exact half-ties toward the lower index
        std::int64_t k = static_cast<std::int64_t>(std::ceil(t - 0.5));
        if (k < 0) k = 0;
        if (k > cells_[i]) k = cells_[i];
        flat += k * stride_[i];
    }
    if (clamped) *clamped = hit_boundary;
    return flat;
}

bool Grid::is_node(const Point& x) const {
    if (x.size() != box_.dim()) return false;
    return point_equal(project(x), x);
}

PointMap discretize_map(const AffineMap& m, const Grid& g,
                        std::atomic<std::uint64_t>* clamp_count) {
    if (m.arity() != 1) throw DomainError("discretize_map: arity-1 maps only");
    if (m.dim() != g.dim()) throw DomainError("discretize_map: dimension mismatch");
    // Owning copies: the returned map must outlive the caller's locals.
    return [map = m, grid = g, clamp_count](const Point& x) {
        bool clamped = false;
        Point y = grid.project(map.apply(x), &clamped);
        if (clamped && clamp_count) clamp_count->fetch_add(1, std::memory_order_relaxed);
        return y;
    };
}

}  // namespace mpifs
