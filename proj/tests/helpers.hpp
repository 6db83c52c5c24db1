#pragma once

#include <Eigen/Dense>
#include <random>
#include <vector>

#include "mpifs/density.hpp"
#include "mpifs/fuzzy.hpp"
#include "mpifs/system.hpp"

namespace testutil {

using namespace mpifs;

inline Point rand_point(std::mt19937_64& rng, int dim, double lo = 0.0, double hi = 1.0) {
    std::uniform_real_distribution<double> coord(lo, hi);
    Point p(dim);
    for (int i = 0; i < dim; ++i) p[i] = coord(rng);
    return p;
}

/// Random valid density: one entry pinned at 0, the rest in [-10, 0].
inline DensityMap random_density(std::mt19937_64& rng, int dim, int max_support = 30) {
    std::uniform_int_distribution<int> count(1, max_support);
    std::uniform_real_distribution<double> mass(-10.0, 0.0);
    const int n = count(rng);
    std::vector<PointValue> entries;
    entries.reserve(n);
    for (int i = 0; i < n; ++i) entries.push_back({rand_point(rng, dim), i == 0 ? 0.0 : mass(rng)});
    return DensityMap(std::move(entries));
}

/// Random Banach-contractive arity-1 system: L in 1..4 affine maps whose
/// spectral norms are rescaled below max_alpha via an SVD oracle.
inline MaxPlusSystem random_system(std::mt19937_64& rng, int dim, double max_alpha = 0.9,
                                   int max_maps = 4) {
    std::uniform_int_distribution<int> count(1, max_maps);
    std::uniform_real_distribution<double> entry(-1.0, 1.0);
    std::uniform_real_distribution<double> target(0.1, max_alpha);
    std::uniform_real_distribution<double> weight(-3.0, 0.0);
    const int L = count(rng);
    std::vector<AffineMap> maps;
    std::vector<double> weights;
    for (int j = 0; j < L; ++j) {
        Eigen::MatrixXd a(dim, dim);
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c) a(r, c) = entry(rng);
        const double sigma = a.jacobiSvd().singularValues()(0);
        if (sigma > 0.0) a *= target(rng) / sigma;
        Eigen::VectorXd b(dim);
        for (int r = 0; r < dim; ++r) b[r] = 0.5 * entry(rng) + 0.5;
        maps.emplace_back(std::move(a), std::move(b));
        weights.push_back(j == 0 ? 0.0 : weight(rng));
    }
    return MaxPlusSystem(std::move(maps), std::move(weights));
}

inline std::vector<PointMap> exact_maps(const MaxPlusSystem& sys) {
    std::vector<PointMap> maps;
    for (const AffineMap& m : sys.maps())
        maps.push_back([map = m](const Point& x) { return map.apply(x); });
    return maps;
}

/// Independent markov oracle: the weighted max-merge of per-map brute-force
/// pushforwards, computed with nested scans and no sorting.
inline std::vector<PointValue> markov_oracle(const DensityMap& mu, const MaxPlusSystem& sys) {
    std::vector<PointValue> merged;
    for (std::size_t j = 0; j < sys.map_count(); ++j) {
        // brute-force pushforward of mu under map j
        std::vector<PointValue> images;
        for (const PointValue& e : mu.entries()) images.push_back({sys.maps()[j].apply(e.x), e.value});
        std::vector<PointValue> pushed;
        for (const PointValue& im : images) {
            bool seen = false;
            for (const PointValue& p : pushed) seen = seen || point_equal(p.x, im.x);
            if (seen) continue;
            double best = neg_inf;
            for (const PointValue& other : images)
                if (point_equal(other.x, im.x)) best = std::max(best, other.value);
            pushed.push_back({im.x, best});
        }
        // weighted merge into the accumulator
        for (const PointValue& p : pushed) {
            const double candidate = sys.weights()[j] + p.value;
            bool found = false;
            for (PointValue& acc : merged)
                if (point_equal(acc.x, p.x)) {
                    acc.value = std::max(acc.value, candidate);
                    found = true;
                }
            if (!found) merged.push_back({p.x, candidate});
        }
    }
    return merged;
}

}  // namespace testutil
