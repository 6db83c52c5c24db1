#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "mpifs/grid.hpp"
#include "mpifs/metric.hpp"

using namespace mpifs;
using testutil::exact_maps;
using testutil::rand_point;
using testutil::random_density;
using testutil::random_system;

namespace {

double directed_brute(std::span<const Point> from, std::span<const Point> to, PointMetric m) {
    double worst = 0.0;
    for (const Point& a : from) {
        double nearest = std::numeric_limits<double>::infinity();
        for (const Point& b : to) nearest = std::min(nearest, point_distance(a, b, m));
        worst = std::max(worst, nearest);
    }
    return worst;
}

}  // namespace

TEST_CASE("hausdorff basics") {
    std::vector<Point> a = {point({0.0})};
    std::vector<Point> b = {point({1.0})};
    CHECK(hausdorff(a, a) == 0.0);
    CHECK(hausdorff(a, b) == 1.0);
    std::vector<Point> c = {point({0.0}), point({1.0})};
    std::vector<Point> d = {point({0.4})};
    CHECK(hausdorff(c, d) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK_THROWS_AS(hausdorff({}, a), DomainError);
    CHECK_THROWS_AS(hausdorff(a, {}), DomainError);
}

TEST_CASE("hausdorff bucket index matches brute force") {
    std::mt19937_64 rng(101);
    SUBCASE("large sets trigger the index") {
        for (int dim : {1, 2, 3}) {
            std::vector<Point> a, b;
            for (int i = 0; i < 5000; ++i) a.push_back(rand_point(rng, dim));
            for (int i = 0; i < 4500; ++i) b.push_back(rand_point(rng, dim, 0.2, 1.2));
            for (PointMetric m : {PointMetric::euclidean, PointMetric::chebyshev}) {
                const double expect = std::max(directed_brute(a, b, m), directed_brute(b, a, m));
                CHECK(hausdorff(a, b, m) == expect);
            }
        }
    }
    SUBCASE("degenerate sets (single point, collinear)") {
        std::vector<Point> a, b;
        for (int i = 0; i < 5000; ++i) a.push_back(point({0.001 * i, 0.5}));
        b.push_back(point({2.0, 0.25}));
        for (int i = 0; i < 5000; ++i) b.push_back(point({0.5, 0.5}));
        const double expect =
            std::max(directed_brute(a, b, PointMetric::euclidean),
                     directed_brute(b, a, PointMetric::euclidean));
        CHECK(hausdorff(a, b) == expect);
    }
}

TEST_CASE("fuzzy distance") {
    SUBCASE("identical sets are at distance 0") {
        FuzzyMap u({{point({0.0}), 1.0}, {point({1.0}), 0.5}});
        CHECK(fuzzy_distance(u, u) == 0.0);
    }
    SUBCASE("diracs at distance of their base points") {
        FuzzyMap u({{point({0.0}), 1.0}});
        FuzzyMap v({{point({1.0}), 1.0}});
        CHECK(fuzzy_distance(u, v) == 1.0);
    }
    SUBCASE("cut enumeration over attained levels") {
        FuzzyMap u({{point({0.0}), 1.0}, {point({1.0}), 0.5}});
        FuzzyMap v({{point({0.0}), 1.0}});
        // cuts at alpha = 1: {0} vs {0} -> 0; at alpha = 0.5: {0,1} vs {0} -> 1
        CHECK(fuzzy_distance(u, v) == 1.0);
    }
}

TEST_CASE("dtheta distance") {
    SUBCASE("identity and dirac separation") {
        DensityMap mu = DensityMap::dirac(point({0.0}));
        DensityMap nu = DensityMap::dirac(point({1.0}));
        CHECK(dtheta_distance(mu, mu) == 0.0);
        CHECK(dtheta_distance(mu, nu) == 1.0);
    }
    SUBCASE("equals the fuzzy distance of the theta images, any base") {
        std::mt19937_64 rng(211);
        for (int rep = 0; rep < 40; ++rep) {
            DensityMap mu = random_density(rng, 2);
            DensityMap nu = random_density(rng, 2);
            const double direct = dtheta_distance(mu, nu);
            for (double base : {1.1, 2.0, std::exp(1.0)}) {
                ScaleFunction th(base);
                const double via_fuzzy = fuzzy_distance(theta_forward(mu, th), theta_forward(nu, th));
                CHECK(std::abs(direct - via_fuzzy) <= 1e-12);
            }
        }
    }
}

TEST_CASE("metric axioms on random inputs") {
    std::mt19937_64 rng(307);
    // small value pool so that level sets share thresholds across maps
    auto pooled_density = [&rng](int support) {
        std::uniform_int_distribution<int> pick(0, 4);
        const double pool[5] = {0.0, -0.5, -1.0, -2.5, -4.0};
        std::vector<PointValue> entries;
        entries.push_back({rand_point(rng, 2), 0.0});
        for (int i = 1; i < support; ++i) entries.push_back({rand_point(rng, 2), pool[pick(rng)]});
        return DensityMap(std::move(entries));
    };
    for (int rep = 0; rep < 60; ++rep) {
        DensityMap a = pooled_density(8);
        DensityMap b = pooled_density(8);
        DensityMap c = pooled_density(8);
        const double dab = dtheta_distance(a, b);
        const double dba = dtheta_distance(b, a);
        const double dac = dtheta_distance(a, c);
        const double dcb = dtheta_distance(c, b);
        CHECK(dab == dba);                      // symmetry, exact
        CHECK(dab <= dac + dcb + 1e-12);        // triangle
        CHECK(dtheta_distance(a, a) == 0.0);    // identity
        if (!(a == b)) CHECK(dab > 0.0);        // indiscernibles
    }
    for (int rep = 0; rep < 40; ++rep) {
        ScaleFunction th(2.0);
        FuzzyMap a = theta_forward(pooled_density(6), th);
        FuzzyMap b = theta_forward(pooled_density(6), th);
        FuzzyMap c = theta_forward(pooled_density(6), th);
        CHECK(fuzzy_distance(a, b) == fuzzy_distance(b, a));
        CHECK(fuzzy_distance(a, b) <= fuzzy_distance(a, c) + fuzzy_distance(c, b) + 1e-12);
        CHECK(fuzzy_distance(a, a) == 0.0);
    }
}

TEST_CASE("markov operator contracts dtheta by the system factor") {
    std::mt19937_64 rng(401);
    for (int rep = 0; rep < 40; ++rep) {
        MaxPlusSystem sys = random_system(rng, 2);
        double alpha = sys.contraction_factor();
        DensityMap mu1 = random_density(rng, 2);
        DensityMap mu2 = random_density(rng, 2);
        std::vector<PointMap> maps = exact_maps(sys);
        const double before = dtheta_distance(mu1, mu2);
        const double after = dtheta_distance(markov_step(mu1, sys.weights(), maps),
                                             markov_step(mu2, sys.weights(), maps));
        CHECK(after <= alpha * before + 1e-9);
    }
}

TEST_CASE("evaluation is Lipschitz in dtheta") {
    std::mt19937_64 rng(503);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    for (int rep = 0; rep < 40; ++rep) {
        DensityMap mu1 = random_density(rng, 2);
        DensityMap mu2 = random_density(rng, 2);
        AffineFunctional phi(point({coef(rng), coef(rng)}), coef(rng));
        const double gap = std::abs(eval_measure(mu1, phi) - eval_measure(mu2, phi));
        CHECK(gap <= phi.lipschitz() * dtheta_distance(mu1, mu2) + 1e-9);
    }
}

TEST_CASE("pointwise-converging sequence that dtheta keeps apart") {
    // densities lambda_n(x) = -min(x, 1/n) against lambda = 0, both sampled
    // on the 1000-cell grid over [0, 1]
    Grid grid(Box(point({0.0}), point({1.0})), {1000});
    std::vector<PointValue> flat;
    for (std::int64_t k = 0; k <= 1000; ++k) flat.push_back({grid.node(k), 0.0});
    DensityMap mu(std::move(flat));
    AffineFunctional phi(point({1.0}), 0.0);
    const double mu_eval = eval_measure(mu, phi);
    CHECK(mu_eval == 1.0);
    for (int n = 2; n <= 10; ++n) {
        std::vector<PointValue> entries;
        for (std::int64_t k = 0; k <= 1000; ++k) {
            const Point x = grid.node(k);
            entries.push_back({x, -std::min(x[0], 1.0 / n)});
        }
        DensityMap mun(std::move(entries));
        CHECK(dtheta_distance(mun, mu) >= 0.5);
        CHECK(std::abs(eval_measure(mun, phi) - mu_eval) <= 1.0 / n + 1e-12);
    }
}
