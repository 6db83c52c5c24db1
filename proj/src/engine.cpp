#include "mpifs/engine.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace mpifs {
namespace {

constexpr std::int64_t kMaxDenseNodes = std::int64_t{1} << 27;

void check_plan_args(double delta, double alpha, double diameter) {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("plan: delta must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("plan: alpha must lie in (0, 1)");
    if (!(diameter >= 0.0) || !std::isfinite(diameter))
        throw DomainError("plan: diameter must be nonnegative");
}

int smallest_n(double alpha, double diameter, double budget, bool strict) {
    double term = diameter;
    for (int n = 1; n <= 100000000; ++n) {
        term *= alpha;
        if (strict ? (term < budget) : (term <= budget)) return n;
    }
    throw DomainError("plan: iteration count does not converge");
}

std::vector<PointMap> quantized_maps(const MaxPlusSystem& sys, int digits) {
    const double scale = quantize_scale(digits);
    std::vector<PointMap> maps;
    maps.reserve(sys.map_count());
    for (const AffineMap& m : sys.maps())
        maps.push_back([map = m, scale](const Point& x) { return quantize(map.apply(x), scale); });
    return maps;
}

std::vector<PointMap> discretized_maps(const MaxPlusSystem& sys, const Grid& grid,
                                       std::atomic<std::uint64_t>* clamps) {
    std::vector<PointMap> maps;
    maps.reserve(sys.map_count());
    for (const AffineMap& m : sys.maps()) maps.push_back(discretize_map(m, grid, clamps));
    return maps;
}

void require_seed_on_grid(const DensityMap& seed, const Grid& grid) {
    for (const PointValue& e : seed.entries())
        if (!grid.is_node(e.x))
            throw DomainError("run: seed has a support point off the grid");
}

// One GIFS sweep into a dense per-node buffer. The buffer merge is a pointwise
// max, so the result does not depend on thread count or enumeration order.
DensityMap gifs_sweep(const DensityMap& mu, const MaxPlusSystem& sys, const Grid& grid,
                      CombineRule rule, const RunOptions& opts,
                      std::atomic<std::uint64_t>* clamps) {
    const int m = sys.arity();
    const int d = sys.dim();
    const std::size_t n = mu.size();
    const std::size_t L = sys.map_count();

    double tuple_work = static_cast<double>(L);
    for (int i = 0; i < m; ++i) tuple_work *= static_cast<double>(n);
    if (tuple_work > static_cast<double>(opts.tuple_cap))
        throw ResourceLimitError("gifs: tuple budget exceeded (" + std::to_string(tuple_work) +
                                 " > cap " + std::to_string(opts.tuple_cap) + ")");
    if (grid.node_count() > kMaxDenseNodes)
        throw ResourceLimitError("gifs: grid too large for dense accumulation");

    const std::vector<PointValue>& entries = mu.entries();
    const int threads = std::max(1, opts.threads);
    std::vector<std::vector<double>> dense(threads);

    auto work = [&](int tid, std::size_t begin, std::size_t end) {
        std::vector<double>& acc = dense[tid];
        acc.assign(static_cast<std::size_t>(grid.node_count()), neg_inf);
        std::vector<std::size_t> idx(m, 0);
        TupleVec tuple(m * d);
        for (std::size_t first = begin; first < end; ++first) {
            // odometer over the remaining m-1 tuple slots
            std::fill(idx.begin(), idx.end(), 0);
            idx[0] = first;
            while (true) {
                double combined = entries[idx[0]].value;
                for (int i = 0; i < m; ++i) {
                    const PointValue& e = entries[idx[i]];
                    tuple.segment(i * d, d) = e.x;
                    if (i > 0)
                        combined = rule == CombineRule::min ? std::min(combined, e.value)
                                                            : combined + e.value;
                }
                for (std::size_t j = 0; j < L; ++j) {
                    bool clamped = false;
                    const Point image = sys.maps()[j].apply_tuple(tuple);
                    const std::int64_t node = grid.project_index(image, &clamped);
                    if (clamped && clamps) clamps->fetch_add(1, std::memory_order_relaxed);
                    const double candidate = sys.weights()[j] + combined;
                    double& slot = acc[static_cast<std::size_t>(node)];
                    if (candidate > slot) slot = candidate;
                }
                int pos = m - 1;
                while (pos >= 1 && ++idx[pos] >= n) {
                    idx[pos] = 0;
                    --pos;
                }
                if (pos < 1) break;
            }
        }
    };

    if (threads == 1 || n < 2) {
        work(0, 0, n);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (n + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const std::size_t b = std::min(n, t * chunk);
            const std::size_t e = std::min(n, b + chunk);
            if (b < e) pool.emplace_back(work, t, b, e);
        }
        for (auto& th : pool) th.join();
    }

    std::vector<double>& merged = dense[0];
    if (merged.empty()) merged.assign(static_cast<std::size_t>(grid.node_count()), neg_inf);
    for (int t = 1; t < threads; ++t) {
        if (dense[t].empty()) continue;
        for (std::size_t i = 0; i < merged.size(); ++i)
            merged[i] = std::max(merged[i], dense[t][i]);
    }

    std::vector<PointValue> out;
    for (std::size_t i = 0; i < merged.size(); ++i)
        if (merged[i] != neg_inf) out.push_back({grid.node(static_cast<std::int64_t>(i)), merged[i]});
    return DensityMap(std::move(out));
}

IterationTrace iterate_markov(const MaxPlusSystem& sys, const DensityMap& seed, int iterations,
                              const std::vector<PointMap>& maps, const RunOptions& opts,
                              const std::atomic<std::uint64_t>* clamps) {
    IterationTrace trace;
    trace.final_density = seed;
    for (int it = 0; it < iterations; ++it) {
        DensityMap next = markov_step(trace.final_density, sys.weights(), maps, opts.threads);
        trace.support_sizes.push_back(next.size());
        if (next.size() > opts.support_cap)
            throw ResourceLimitError("run: support cap exceeded at iteration " +
                                     std::to_string(it + 1) + " (" + std::to_string(next.size()) +
                                     " points)");
        if (opts.record_steps)
            trace.step_distances.push_back(dtheta_distance(trace.final_density, next));
        trace.final_density = std::move(next);
    }
    if (clamps) trace.clamped_points = clamps->load();
    return trace;
}

}  // namespace

RunPlan plan_iterations(double delta, double alpha, double diameter) {
    check_plan_args(delta, alpha, diameter);
    RunPlan plan{delta, alpha, diameter, 0.0, 1, std::nullopt};
    if (diameter > 0.0) plan.iterations = smallest_n(alpha, diameter, delta, /*strict=*/true);
    return plan;
}

RunPlan plan_iterations(double delta, double alpha, double diameter, const Grid& grid) {
    check_plan_args(delta, alpha, diameter);
    const double eps = grid.epsilon();
    const double base = eps / (1.0 - alpha);
    if (base >= delta)
        throw InfeasibleResolutionError(
            "plan: grid mesh " + std::to_string(eps) + " cannot reach resolution " +
            std::to_string(delta) + " (eps/(1-alpha) = " + std::to_string(base) + ")");
    RunPlan plan{delta, alpha, diameter, eps, 1, std::nullopt};
    if (diameter > 0.0) plan.iterations = smallest_n(alpha, diameter, delta - base, /*strict=*/true);
    return plan;
}

RunPlan plan_iterations(double delta, double alpha, double diameter, const Box& box) {
    check_plan_args(delta, alpha, diameter);
    const double eps_target = 0.5 * delta * (1.0 - alpha);
    const int d = box.dim();
    const double per_axis = 2.0 * eps_target / std::sqrt(static_cast<double>(d));
    std::vector<int> cells(d);
    for (int i = 0; i < d; ++i) {
        const double span = box.upper[i] - box.lower[i];
        cells[i] = std::max(2, static_cast<int>(std::ceil(span / per_axis)));
    }
    Grid grid(box, cells);
    RunPlan plan{delta, alpha, diameter, grid.epsilon(), 1, grid};
    if (diameter > 0.0) plan.iterations = smallest_n(alpha, diameter, delta / 2.0, /*strict=*/false);
    // the two halves were budgeted with <=; restore the strict overall bound
    while (grid.epsilon() / (1.0 - alpha) + std::pow(alpha, plan.iterations) * diameter >= delta &&
           plan.iterations < 100000000)
        ++plan.iterations;
    return plan;
}

IterationTrace run_deterministic(const MaxPlusSystem& sys, const DensityMap& seed, int iterations,
                                 const RunOptions& opts) {
    if (sys.arity() != 1) throw DomainError("run_deterministic: arity-1 systems only");
    if (seed.empty()) throw InvalidMeasureError("run_deterministic: empty seed");
    if (iterations < 0) throw DomainError("run_deterministic: negative iteration count");
    return iterate_markov(sys, seed, iterations, quantized_maps(sys, opts.quantize_digits), opts,
                          nullptr);
}

IterationTrace run_discrete(const MaxPlusSystem& sys, const Grid& grid, const DensityMap& seed,
                            int iterations, const RunOptions& opts) {
    if (sys.arity() != 1) throw DomainError("run_discrete: arity-1 systems only");
    if (sys.dim() != grid.dim()) throw DomainError("run_discrete: grid dimension mismatch");
    if (seed.empty()) throw InvalidMeasureError("run_discrete: empty seed");
    if (iterations < 0) throw DomainError("run_discrete: negative iteration count");
    require_seed_on_grid(seed, grid);
    std::atomic<std::uint64_t> clamps{0};
    return iterate_markov(sys, seed, iterations, discretized_maps(sys, grid, &clamps), opts,
                          &clamps);
}

IterationTrace run_gifs(const MaxPlusSystem& sys, const Grid& grid, const DensityMap& seed,
                        int iterations, CombineRule rule, const RunOptions& opts) {
    if (sys.arity() < 2) throw DomainError("run_gifs: arity >= 2 systems only");
    if (sys.dim() != grid.dim()) throw DomainError("run_gifs: grid dimension mismatch");
    if (seed.empty()) throw InvalidMeasureError("run_gifs: empty seed");
    if (iterations < 0) throw DomainError("run_gifs: negative iteration count");
    require_seed_on_grid(seed, grid);
    std::atomic<std::uint64_t> clamps{0};
    IterationTrace trace;
    trace.final_density = seed;
    for (int it = 0; it < iterations; ++it) {
        DensityMap next = gifs_sweep(trace.final_density, sys, grid, rule, opts, &clamps);
        trace.support_sizes.push_back(next.size());
        if (next.size() > opts.support_cap)
            throw ResourceLimitError("run: support cap exceeded at iteration " +
                                     std::to_string(it + 1));
        if (opts.record_steps)
            trace.step_distances.push_back(dtheta_distance(trace.final_density, next));
        trace.final_density = std::move(next);
    }
    trace.clamped_points = clamps.load();
    return trace;
}

DensityMap one_step(const DensityMap& mu, const MaxPlusSystem& sys, const Grid* grid,
                    CombineRule rule, const RunOptions& opts) {
    if (sys.arity() >= 2) {
        if (!grid) throw DomainError("one_step: GIFS dynamics needs a grid");
        return gifs_sweep(mu, sys, *grid, rule, opts, nullptr);
    }
    std::vector<PointMap> maps =
        grid ? discretized_maps(sys, *grid, nullptr) : quantized_maps(sys, opts.quantize_digits);
    return markov_step(mu, sys.weights(), maps, opts.threads);
}

double fixed_point_check(const IterationTrace& trace, const MaxPlusSystem& sys, const Grid* grid,
                         CombineRule rule, const RunOptions& opts) {
    if (trace.final_density.empty())
        throw InvalidMeasureError("fixed_point_check: trace has no final density");
    return dtheta_distance(trace.final_density, one_step(trace.final_density, sys, grid, rule, opts));
}

}  // namespace mpifs
