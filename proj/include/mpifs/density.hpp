#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "mpifs/geometry.hpp"

namespace mpifs {

/// Finite-support max-plus density: points carry a mass in [-inf, 0], absent
/// points are -inf, and the maximum stored value is exactly 0. The map stands
/// in for the idempotent measure max_x(lambda(x) + phi(x)).
///
/// Entries are kept lexicographically sorted with unique points; -inf values
/// handed to the constructor are dropped (absence encodes -inf).
class DensityMap {
public:
    DensityMap() = default;

    /// Normalizes raw entries: sorts, merges duplicate points by max, drops
    /// -inf, then validates the invariants. Throws InvalidMeasureError when
    /// the support is empty, a value is positive/NaN, or no value equals 0.
    explicit DensityMap(std::vector<PointValue> entries);

    static DensityMap dirac(const Point& x) { return DensityMap({{x, 0.0}}); }

    const std::vector<PointValue>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    int dim() const { return entries_.empty() ? 0 : static_cast<int>(entries_.front().x.size()); }

    /// Density at x; -inf when x is not a support point.
    double value_at(const Point& x) const;

    friend bool operator==(const DensityMap& a, const DensityMap& b);

private:
    std::vector<PointValue> entries_;
};

std::ostream& operator<<(std::ostream& os, const DensityMap& mu);

/// Affine test functional phi(x) = coeffs . x + offset.
struct AffineFunctional {
    Point coeffs;
    double offset = 0.0;

    AffineFunctional() = default;
    AffineFunctional(Point c, double b);

    double operator()(const Point& x) const;
    /// Lipschitz constant w.r.t. the Euclidean metric.
    double lipschitz() const { return coeffs.norm(); }
};

/// max over the support of lambda(x) + phi(x).
double eval_measure(const DensityMap& mu, const AffineFunctional& phi);

/// Density of the image measure: lambda_phi(y) = max{lambda(x) : phi(x) = y}.
DensityMap pushforward(const DensityMap& mu, const PointMap& phi, int threads = 1);

/// One idempotent Markov operator step,
/// lambda'(y) = max_j max{q_j + lambda(x) : x in maps[j]^{-1}(y)}.
/// Weights must satisfy q_j <= 0 with max_j q_j == 0 exactly.
DensityMap markov_step(const DensityMap& mu, std::span<const double> weights,
                       std::span<const PointMap> maps, int threads = 1);

/// The (finite) support, sorted lexicographically.
std::vector<Point> support(const DensityMap& mu);

}  // namespace mpifs
