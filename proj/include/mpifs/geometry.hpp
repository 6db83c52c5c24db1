#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <vector>

#include "mpifs/error.hpp"

namespace mpifs {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

/// Point in the state space, up to three coordinates, stack-stored.
using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;

/// Concatenated m-tuple of points (arity * dim <= 9).
using TupleVec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 9, 1>;

using PointMap = std::function<Point(const Point&)>;

struct PointValue {
    Point x;
    double value;
};

inline Point point(std::initializer_list<double> coords) {
    Point p(static_cast<Eigen::Index>(coords.size()));
    Eigen::Index i = 0;
    for (double c : coords) p[i++] = c;
    return p;
}

/// Exact lexicographic order on coordinates.
inline bool point_less(const Point& a, const Point& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (b[i] < a[i]) return false;
    }
    return false;
}

inline bool point_equal(const Point& a, const Point& b) {
    if (a.size() != b.size()) return false;
    for (Eigen::Index i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return false;
    return true;
}

/// Round each coordinate to `digits` decimal places. Equal points produced by
/// different arithmetic paths must collapse to one key, so the result is also
/// normalized to carry no negative zeros.
inline double quantize(double v, double scale) {
    double q = std::round(v * scale) / scale;
    return q == 0.0 ? 0.0 : q;
}

inline Point quantize(const Point& p, double scale) {
    Point q(p.size());
    for (Eigen::Index i = 0; i < p.size(); ++i) q[i] = quantize(p[i], scale);
    return q;
}

inline double quantize_scale(int digits) { return std::pow(10.0, digits); }

/// Axis-aligned compact box, the space X of every run.
struct Box {
    Point lower;
    Point upper;

    Box() = default;
    Box(Point lo, Point up) : lower(std::move(lo)), upper(std::move(up)) {
        if (lower.size() != upper.size() || lower.size() < 1 || lower.size() > 3)
            throw DomainError("box: corners must share a dimension between 1 and 3");
        for (Eigen::Index i = 0; i < lower.size(); ++i) {
            if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) || !(lower[i] < upper[i]))
                throw DomainError("box: lower corner must be strictly below upper corner");
        }
    }

    int dim() const { return static_cast<int>(lower.size()); }

    bool contains(const Point& p) const {
        for (Eigen::Index i = 0; i < lower.size(); ++i)
            if (p[i] < lower[i] || p[i] > upper[i]) return false;
        return true;
    }

    Point clamp(const Point& p) const {
        Point q(p.size());
        for (Eigen::Index i = 0; i < p.size(); ++i)
            q[i] = std::min(std::max(p[i], lower[i]), upper[i]);
        return q;
    }

    Point span() const { return upper - lower; }
    Point center() const { return lower + 0.5 * (upper - lower).eval(); }
    double diagonal() const { return (upper - lower).norm(); }
};

}  // namespace mpifs
