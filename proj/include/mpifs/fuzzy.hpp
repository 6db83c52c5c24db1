#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "mpifs/density.hpp"
#include "mpifs/geometry.hpp"

namespace mpifs {

/// Finite-support fuzzy set: memberships in (0, 1], absent points carry 0,
/// and some point has membership exactly 1 (normality). Entries are sorted
/// lexicographically with unique points; zeros are dropped on construction.
class FuzzyMap {
public:
    FuzzyMap() = default;

    /// Throws InvalidMeasureError on empty support, values outside (0, 1]
    /// after zero-dropping, or a missing membership-1 point.
    explicit FuzzyMap(std::vector<PointValue> entries);

    const std::vector<PointValue>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    int dim() const { return entries_.empty() ? 0 : static_cast<int>(entries_.front().x.size()); }

    /// Membership at x; 0 when absent.
    double value_at(const Point& x) const;

    friend bool operator==(const FuzzyMap& a, const FuzzyMap& b);

private:
    std::vector<PointValue> entries_;
};

std::ostream& operator<<(std::ostream& os, const FuzzyMap& u);

/// Increasing homeomorphism [-inf, 0] -> [0, 1] of the exponential family
/// theta(t) = base^t, base > 1. theta(-inf) = 0 and theta(0) = 1 exactly.
class ScaleFunction {
public:
    explicit ScaleFunction(double base = 1.1);

    double base() const { return base_; }
    double operator()(double t) const;
    /// Exact inverse: log(u)/log(base), with inverse(0) = -inf.
    double inverse(double u) const;

private:
    double base_ = 1.1;
    double log_base_ = 0.0;
};

/// Grey-level map d(t) = theta(q + theta^{-1}(t)) for a weight q <= 0.
/// Satisfies d(0) = 0, d nondecreasing, and d(1) = 1 iff q == 0.
struct GreyLevelMap {
    double q = 0.0;
    ScaleFunction theta;

    GreyLevelMap() = default;
    GreyLevelMap(double weight, ScaleFunction scale);

    double operator()(double t) const;
};

/// The measure -> fuzzy-set direction of the bijection: u = theta o lambda.
/// Support is preserved exactly.
FuzzyMap theta_forward(const DensityMap& mu, const ScaleFunction& theta);

/// Inverse direction: lambda = theta^{-1} o u.
DensityMap theta_backward(const FuzzyMap& u, const ScaleFunction& theta);

/// {x : u(x) >= alpha} for alpha in (0, 1]; sorted lexicographically.
std::vector<Point> alpha_cut(const FuzzyMap& u, double alpha);

/// Zadeh extension: T(u)(y) = max{u(x) : x in T^{-1}(y)}.
FuzzyMap zadeh_extension(const FuzzyMap& u, const PointMap& phi, int threads = 1);

/// Fuzzy Hutchinson operator step: pointwise max over j of d_j applied to the
/// Zadeh extension of u under maps[j]. The grey system must be admissible
/// (some d_j(1) == 1), otherwise InvalidSystemError.
FuzzyMap hutchinson_step(const FuzzyMap& u, std::span<const PointMap> maps,
                         std::span<const GreyLevelMap> greys, int threads = 1);

}  // namespace mpifs
