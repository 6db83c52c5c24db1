#pragma once

#include <span>
#include <vector>

#include "mpifs/density.hpp"
#include "mpifs/fuzzy.hpp"
#include "mpifs/geometry.hpp"

namespace mpifs {

enum class PointMetric { euclidean, chebyshev };

double point_distance(const Point& a, const Point& b, PointMetric metric);

/// Hausdorff distance between finite nonempty point sets,
/// max of the two directed distances max_a min_b d(a, b).
/// Brute force up to 4096 points per set, uniform-bucket index above.
double hausdorff(std::span<const Point> a, std::span<const Point> b,
                 PointMetric metric = PointMetric::euclidean);

/// d_f(u, v) = sup over alpha of h([u]^alpha, [v]^alpha). On finite supports
/// the sup over (0, 1] is attained on the finite set of memberships appearing
/// in either argument (cuts only change there), so the value is exact.
double fuzzy_distance(const FuzzyMap& u, const FuzzyMap& v,
                      PointMetric metric = PointMetric::euclidean);

/// d_theta(mu, nu) = sup over beta <= 0 of the Hausdorff distance between the
/// super-level sets {lambda >= beta} and {eta >= beta}. Equals
/// fuzzy_distance(Theta(mu), Theta(nu)) for every scale function; computed
/// here without any theta over the attained density values of both arguments.
double dtheta_distance(const DensityMap& mu, const DensityMap& nu,
                       PointMetric metric = PointMetric::euclidean);

}  // namespace mpifs
