#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "mpifs/fuzzy.hpp"
#include "mpifs/system.hpp"

using namespace mpifs;
using testutil::exact_maps;
using testutil::random_density;
using testutil::random_system;

TEST_CASE("fuzzy map invariants") {
    SUBCASE("zeros drop, duplicates merge by max") {
        FuzzyMap u({{point({0.0}), 1.0}, {point({1.0}), 0.0}, {point({2.0}), 0.3}, {point({2.0}), 0.6}});
        CHECK(u.size() == 2);
        CHECK(u.value_at(point({2.0})) == 0.6);
        CHECK(u.value_at(point({1.0})) == 0.0);
    }
    SUBCASE("normality and range are enforced") {
        CHECK_THROWS_AS(FuzzyMap({{point({0.0}), 0.5}}), InvalidMeasureError);
        CHECK_THROWS_AS(FuzzyMap({{point({0.0}), 1.5}}), InvalidMeasureError);
        CHECK_THROWS_AS(FuzzyMap(std::vector<PointValue>{}), InvalidMeasureError);
    }
}

TEST_CASE("scale function") {
    ScaleFunction theta(1.1);
    SUBCASE("endpoints are exact") {
        CHECK(theta(0.0) == 1.0);
        CHECK(theta(neg_inf) == 0.0);
        CHECK(theta.inverse(1.0) == 0.0);
        CHECK(theta.inverse(0.0) == neg_inf);
    }
    SUBCASE("strictly increasing on samples") {
        double prev = 0.0;
        for (double t = -50.0; t <= 0.0; t += 0.5) {
            const double v = theta(t);
            CHECK(v > prev);
            prev = v;
        }
    }
    SUBCASE("round trip within 1e-12 on [-100, 0]") {
        for (double base : {1.1, 2.0, std::exp(1.0)}) {
            ScaleFunction th(base);
            for (double t = -100.0; t <= 0.0; t += 0.37)
                CHECK(std::abs(th.inverse(th(t)) - t) <= 1e-12);
        }
    }
    SUBCASE("base must exceed 1") {
        CHECK_THROWS_AS(ScaleFunction(1.0), DomainError);
        CHECK_THROWS_AS(ScaleFunction(0.5), DomainError);
    }
    SUBCASE("arguments outside the domain are rejected") {
        CHECK_THROWS_AS(theta(0.5), DomainError);
        CHECK_THROWS_AS(theta.inverse(1.5), DomainError);
        CHECK_THROWS_AS(theta.inverse(-0.1), DomainError);
    }
}

TEST_CASE("grey level maps") {
    ScaleFunction theta(1.1);
    SUBCASE("d(0) = 0 and d(1) = 1 iff q = 0") {
        GreyLevelMap identity(0.0, theta);
        GreyLevelMap damped(-1.0, theta);
        CHECK(identity(0.0) == 0.0);
        CHECK(damped(0.0) == 0.0);
        CHECK(identity(1.0) == 1.0);
        CHECK(damped(1.0) < 1.0);
    }
    SUBCASE("nondecreasing on samples") {
        GreyLevelMap d(-2.0, theta);
        double prev = -1.0;
        for (double t = 0.0; t <= 1.0; t += 0.01) {
            const double v = d(t);
            CHECK(v >= prev);
            prev = v;
        }
    }
    SUBCASE("cantor greys: d1(t) = t and d2(t) = t/1.1") {
        GreyLevelMap d1(0.0, theta);
        GreyLevelMap d2(-1.0, theta);
        for (double t = 0.05; t <= 1.0; t += 0.05) {
            CHECK(d1(t) == doctest::Approx(t).epsilon(1e-12));
            CHECK(d2(t) == doctest::Approx(t / 1.1).epsilon(1e-12));
        }
    }
}

TEST_CASE("theta bijection") {
    ScaleFunction theta(1.1);
    SUBCASE("densities map to memberships pointwise") {
        DensityMap mu({{point({0.0}), 0.0}, {point({1.0}), -1.0}});
        FuzzyMap u = theta_forward(mu, theta);
        CHECK(u.value_at(point({0.0})) == 1.0);
        CHECK(u.value_at(point({1.0})) == doctest::Approx(1.0 / 1.1).epsilon(1e-12));
    }
    SUBCASE("backward maps memberships to log-densities") {
        FuzzyMap u({{point({0.0}), 1.0}, {point({1.0}), std::pow(1.1, -2.0)}});
        DensityMap mu = theta_backward(u, theta);
        CHECK(mu.value_at(point({0.0})) == 0.0);
        CHECK(mu.value_at(point({1.0})) == doctest::Approx(-2.0).epsilon(1e-12));
    }
    SUBCASE("round trips are the identity within 1e-12, supports exact") {
        std::mt19937_64 rng(5);
        for (double base : {1.1, 2.0, std::exp(1.0)}) {
            ScaleFunction th(base);
            for (int rep = 0; rep < 30; ++rep) {
                DensityMap mu = random_density(rng, 2);
                FuzzyMap u = theta_forward(mu, th);
                REQUIRE(u.size() == mu.size());
                DensityMap back = theta_backward(u, th);
                REQUIRE(back.size() == mu.size());
                for (std::size_t i = 0; i < mu.size(); ++i) {
                    CHECK(point_equal(back.entries()[i].x, mu.entries()[i].x));
                    CHECK(std::abs(back.entries()[i].value - mu.entries()[i].value) <= 1e-12);
                }
                // and the other direction
                FuzzyMap u2 = theta_forward(back, th);
                for (std::size_t i = 0; i < u.size(); ++i)
                    CHECK(std::abs(u2.entries()[i].value - u.entries()[i].value) <= 1e-12);
            }
        }
    }
}

TEST_CASE("alpha cuts") {
    FuzzyMap u({{point({0.0}), 1.0}, {point({1.0}), 0.5}});
    SUBCASE("boundary inclusion uses >=") {
        CHECK(alpha_cut(u, 1.0).size() == 1);
        CHECK(alpha_cut(u, 0.5).size() == 2);
        CHECK(alpha_cut(u, 0.51).size() == 1);
    }
    SUBCASE("alpha outside (0, 1] is rejected") {
        CHECK_THROWS_AS(alpha_cut(u, 0.0), DomainError);
        CHECK_THROWS_AS(alpha_cut(u, 1.5), DomainError);
        CHECK_THROWS_AS(alpha_cut(u, -0.2), DomainError);
    }
    SUBCASE("cuts nest: alpha <= beta implies cut(beta) subset of cut(alpha)") {
        std::mt19937_64 rng(9);
        for (int rep = 0; rep < 20; ++rep) {
            FuzzyMap v = theta_forward(random_density(rng, 2), ScaleFunction(2.0));
            std::uniform_real_distribution<double> lvl(0.001, 1.0);
            double a = lvl(rng), b = lvl(rng);
            if (a > b) std::swap(a, b);
            auto cut_a = alpha_cut(v, a);
            auto cut_b = alpha_cut(v, b);
            for (const Point& p : cut_b) {
                bool found = false;
                for (const Point& q : cut_a) found = found || point_equal(p, q);
                CHECK(found);
            }
        }
    }
    SUBCASE("sweeping attained levels reconstructs the map") {
        std::mt19937_64 rng(13);
        FuzzyMap v = theta_forward(random_density(rng, 1, 15), ScaleFunction(1.5));
        for (const PointValue& e : v.entries()) {
            // oracle: u(x) = max attained alpha whose cut contains x
            double best = 0.0;
            for (const PointValue& lvl : v.entries()) {
                for (const Point& p : alpha_cut(v, lvl.value))
                    if (point_equal(p, e.x)) best = std::max(best, lvl.value);
            }
            CHECK(best == e.value);
        }
    }
}

TEST_CASE("zadeh extension") {
    FuzzyMap u({{point({0.0}), 1.0}, {point({1.0}), 0.5}});
    SUBCASE("identity keeps the fuzzy set") {
        CHECK(zadeh_extension(u, [](const Point& x) { return x; }) == u);
    }
    SUBCASE("constant map gives a crisp singleton") {
        FuzzyMap out = zadeh_extension(u, [](const Point& x) {
            Point c(x.size());
            c[0] = 3.0;
            return c;
        });
        CHECK(out.size() == 1);
        CHECK(out.value_at(point({3.0})) == 1.0);
    }
    SUBCASE("conjugates the max-plus pushforward through theta") {
        std::mt19937_64 rng(17);
        ScaleFunction theta(1.1);
        for (int rep = 0; rep < 30; ++rep) {
            DensityMap mu = random_density(rng, 2);
            MaxPlusSystem sys = random_system(rng, 2, 0.9, 1);
            PointMap phi = exact_maps(sys)[0];
            FuzzyMap lhs = theta_forward(pushforward(mu, phi), theta);
            FuzzyMap rhs = zadeh_extension(theta_forward(mu, theta), phi);
            REQUIRE(lhs.size() == rhs.size());
            for (std::size_t i = 0; i < lhs.size(); ++i) {
                CHECK(point_equal(lhs.entries()[i].x, rhs.entries()[i].x));
                CHECK(std::abs(lhs.entries()[i].value - rhs.entries()[i].value) <= 1e-12);
            }
        }
    }
}

TEST_CASE("hutchinson step") {
    ScaleFunction theta(1.1);
    SUBCASE("single identity grey map reduces to the zadeh extension") {
        FuzzyMap u({{point({0.0}), 1.0}, {point({1.0}), 0.5}});
        std::vector<PointMap> maps = {[](const Point& x) { return point({0.5 * x[0]}); }};
        std::vector<GreyLevelMap> greys = {GreyLevelMap(0.0, theta)};
        FuzzyMap out = hutchinson_step(u, maps, greys);
        FuzzyMap expect = zadeh_extension(u, maps[0]);
        REQUIRE(out.size() == expect.size());
        for (std::size_t i = 0; i < out.size(); ++i)
            CHECK(out.entries()[i].value == doctest::Approx(expect.entries()[i].value).epsilon(1e-12));
    }
    SUBCASE("cantor image of a crisp seed") {
        FuzzyMap u({{point({0.5}), 1.0}});
        std::vector<PointMap> maps = {
            [](const Point& x) { return point({x[0] / 3.0}); },
            [](const Point& x) { return point({(x[0] + 2.0) / 3.0}); },
        };
        std::vector<GreyLevelMap> greys = {GreyLevelMap(0.0, theta), GreyLevelMap(-1.0, theta)};
        FuzzyMap out = hutchinson_step(u, maps, greys);
        REQUIRE(out.size() == 2);
        CHECK(out.value_at(point({0.5 / 3.0})) == 1.0);
        CHECK(out.value_at(point({2.5 / 3.0})) == doctest::Approx(1.0 / 1.1).epsilon(1e-12));
    }
    SUBCASE("inadmissible grey systems are rejected") {
        FuzzyMap u({{point({0.5}), 1.0}});
        std::vector<PointMap> maps = {[](const Point& x) { return x; }};
        std::vector<GreyLevelMap> greys = {GreyLevelMap(-0.5, theta)};
        CHECK_THROWS_AS(hutchinson_step(u, maps, greys), InvalidSystemError);
    }
    SUBCASE("conjugation: theta o markov = hutchinson o theta") {
        std::mt19937_64 rng(29);
        for (double base : {1.1, 2.0, std::exp(1.0)}) {
            ScaleFunction th(base);
            for (int rep = 0; rep < 25; ++rep) {
                DensityMap mu = random_density(rng, 2);
                MaxPlusSystem sys = random_system(rng, 2);
                std::vector<PointMap> maps = exact_maps(sys);
                FuzzyMap lhs = theta_forward(markov_step(mu, sys.weights(), maps), th);
                FuzzyMap rhs = hutchinson_step(theta_forward(mu, th), maps, grey_maps(sys, th));
                REQUIRE(lhs.size() == rhs.size());
                for (std::size_t i = 0; i < lhs.size(); ++i) {
                    CHECK(point_equal(lhs.entries()[i].x, rhs.entries()[i].x));
                    CHECK(std::abs(lhs.entries()[i].value - rhs.entries()[i].value) <= 1e-12);
                }
            }
        }
    }
}
