#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mpifs/density.hpp"
#include "mpifs/grid.hpp"
#include "mpifs/metric.hpp"
#include "mpifs/system.hpp"

namespace mpifs {

/// How a GIFS sweep folds the densities of a tuple's entries into one value.
enum class CombineRule { min, sum };

struct RunOptions {
    int threads = 1;
    /// Decimal digits for point identity in exact-map (deterministic) runs.
    int quantize_digits = 14;
    std::uint64_t support_cap = std::uint64_t{1} << 24;
    std::uint64_t tuple_cap = std::uint64_t{1} << 32;
    /// Record d_theta between successive iterates (costs one distance per sweep).
    bool record_steps = false;
};

struct IterationTrace {
    std::vector<std::uint64_t> support_sizes;
    std::vector<double> step_distances;  // filled when RunOptions::record_steps
    DensityMap final_density;
    std::uint64_t clamped_points = 0;
};

struct RunPlan {
    double delta = 0.0;
    double alpha = 0.0;
    double diameter = 0.0;
    double epsilon = 0.0;  // grid mesh term; 0 for exact maps
    int iterations = 0;
    std::optional<Grid> grid;  // set by the free-grid overload
};

/// Smallest N with alpha^N * diameter < delta (exact maps, epsilon = 0).
RunPlan plan_iterations(double delta, double alpha, double diameter);

/// Fixed grid: smallest N with eps/(1-alpha) + alpha^N * diameter < delta.
/// Throws InfeasibleResolutionError when eps/(1-alpha) >= delta.
RunPlan plan_iterations(double delta, double alpha, double diameter, const Grid& grid);

/// Free grid: picks the coarsest uniform grid with eps <= (delta/2)(1-alpha),
/// then N from alpha^N * diameter <= delta/2.
RunPlan plan_iterations(double delta, double alpha, double diameter, const Box& box);

/// Exact-map iteration of the Markov operator with quantized point identity.
IterationTrace run_deterministic(const MaxPlusSystem& sys, const DensityMap& seed, int iterations,
                                 const RunOptions& opts = {});

/// Grid-discretized iteration; the seed must sit on grid nodes.
IterationTrace run_discrete(const MaxPlusSystem& sys, const Grid& grid, const DensityMap& seed,
                            int iterations, const RunOptions& opts = {});

/// GIFS sweep: every m-tuple of current support points feeds every map; the
/// tuple's density is folded by `rule` before adding the map weight.
IterationTrace run_gifs(const MaxPlusSystem& sys, const Grid& grid, const DensityMap& seed,
                        int iterations, CombineRule rule, const RunOptions& opts = {});

/// One more operator application matching the run type (grid == nullptr means
/// the exact/quantized dynamics).
DensityMap one_step(const DensityMap& mu, const MaxPlusSystem& sys, const Grid* grid,
                    CombineRule rule = CombineRule::min, const RunOptions& opts = {});

/// Residual d_theta(final, M(final)); 0 certifies an exact fixed point.
double fixed_point_check(const IterationTrace& trace, const MaxPlusSystem& sys, const Grid* grid,
                         CombineRule rule = CombineRule::min, const RunOptions& opts = {});

}  // namespace mpifs
