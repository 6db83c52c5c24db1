#pragma once

#include <atomic>
#include <cstdint>
#include <vector>

#include "mpifs/geometry.hpp"
#include "mpifs/system.hpp"

namespace mpifs {

/// Uniform grid over a box: cells_i cells per axis, nodes at
/// lower_i + k * span_i / cells_i for k = 0..cells_i. The node set is a
/// proper eps-net of the box with eps = half the cell diagonal.
///
/// Projection snaps to the nearest node; exact midpoint ties go to the lower
/// index per axis. Points outside the box are clamped to the boundary first.
class Grid {
public:
    Grid(Box box, std::vector<int> cells);

    const Box& box() const { return box_; }
    const std::vector<int>& cells() const { return cells_; }
    int dim() const { return box_.dim(); }
    std::int64_t node_count() const { return node_count_; }
    double epsilon() const { return epsilon_; }

    /// Node coordinates for a flat row-major index (axis 0 major). Flat order
    /// equals the lexicographic order of node coordinates.
    Point node(std::int64_t flat) const;

    /// Flat index of the nearest node; sets *clamped when the input had to be
    /// clamped into the box.
    std::int64_t project_index(const Point& x, bool* clamped = nullptr) const;

    Point project(const Point& x, bool* clamped = nullptr) const {
        return node(project_index(x, clamped));
    }

    /// Exact: x is bit-identical to one of the nodes.
    bool is_node(const Point& x) const;

private:
    Box box_;
    std::vector<int> cells_;
    std::vector<std::int64_t> stride_;
    std::int64_t node_count_ = 0;
    double epsilon_ = 0.0;
};

/// r-discretization (r o phi)|nodes of an arity-1 map: evaluates phi, clamps
/// into the box, projects to the nearest node. Out-of-box images are counted
/// in *clamp_count when given.
PointMap discretize_map(const AffineMap& m, const Grid& g,
                        std::atomic<std::uint64_t>* clamp_count = nullptr);

}  // namespace mpifs
