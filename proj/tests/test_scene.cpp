#include <cmath>
#include <stdexcept>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "riscov/scene.hpp"

using namespace riscov;

namespace {

Building box(double cx, double cy, double l, double w, double omega = 0.0, double h = 100.0) {
    return {0, cx, cy, l, w, h, omega};
}

}  // namespace

TEST_SUITE("scene") {

TEST_CASE("config validation") {
    SceneConfig c;
    CHECK_NOTHROW(c.validate());
    c.l_min = 50.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = SceneConfig{};
    c.n1 = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = SceneConfig{};
    c.lambda_b_prime = -1.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("zero density gives no buildings") {
    SceneConfig c;
    c.lambda_b_prime = 0.0;
    Rng rng(7);
    CHECK(generate_buildings(c, rng).empty());
}

TEST_CASE("degenerate length range") {
    SceneConfig c;
    c.l_min = c.l_max = 30.0;
    Rng rng(3);
    const auto bs = generate_buildings(c, rng);
    REQUIRE(!bs.empty());
    for (const auto& b : bs) {
        CHECK(b.length == 30.0);
    }
}

TEST_CASE("dimension bounds") {
    SceneConfig c;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        c.seed = seed;
        for (const auto& b : generate_scene(c).buildings) {
            CHECK(b.length >= 30.0);
            CHECK(b.length <= 40.0);
            CHECK(b.width >= 30.0);
            CHECK(b.width <= 40.0);
            CHECK(b.height >= 80.0);
            CHECK(b.height <= 120.0);
            CHECK(b.omega >= 0.0);
            CHECK(b.omega < 2.0 * std::numbers::pi);
            CHECK(b.cx >= 0.0);
            CHECK(b.cx <= c.area_x);
        }
    }
}

TEST_CASE("poisson count mean") {
    SceneConfig c;
    c.area_x = c.area_y = 500.0;
    const double m = c.lambda_b_prime * c.area();
    double sum = 0.0;
    for (int s = 0; s < 200; ++s) {
        Rng rng = make_stream(static_cast<std::uint64_t>(s), "poisson");
        sum += static_cast<double>(generate_buildings(c, rng).size());
    }
    CHECK(std::abs(sum / 200.0 - m) <= 4.0 * std::sqrt(m / 200.0));
}

TEST_CASE("overlap removal basics") {
    const auto a = box(0, 0, 30, 30);
    SUBCASE("coincident") {
        const auto kept = remove_overlaps({a, a});
        REQUIRE(kept.size() == 1);
        CHECK(kept[0].id == 0);
    }
    SUBCASE("disjoint") {
        CHECK(remove_overlaps({a, box(100, 0, 30, 30)}).size() == 2);
    }
    SUBCASE("shared edge is not an overlap") {
        CHECK_FALSE(footprints_overlap(a, box(30, 0, 30, 30)));
        CHECK_FALSE(footprints_overlap(a, box(30, 30, 30, 30)));
    }
    SUBCASE("greedy keeps earlier buildings") {
        const auto kept = remove_overlaps({box(0, 0, 30, 30), box(20, 0, 30, 30), box(40, 0, 30, 30)});
        REQUIRE(kept.size() == 2);
        CHECK(kept[0].cx == 0.0);
        CHECK(kept[1].cx == 40.0);
        CHECK(kept[1].id == 1);
    }
    SUBCASE("rotated diamond near a square corner") {
        const auto d = box(15 + 15 * std::sqrt(2.0) + 0.5, 15, 30, 30, std::numbers::pi / 4);
        CHECK_FALSE(footprints_overlap(a, d));
        const auto e = box(15 + 15 * std::sqrt(2.0) - 0.5, 15, 30, 30, std::numbers::pi / 4);
        CHECK(footprints_overlap(a, e));
    }
}

TEST_CASE("overlap test agrees with polygon intersection") {
    Rng rng(11);
    int checked = 0;
    for (int t = 0; t < 20000; ++t) {
        const auto a = box(0, 0, uniform(rng, 10, 40), uniform(rng, 10, 40), uniform(rng, 0, 6.283));
        const auto b = box(uniform(rng, -60, 60), uniform(rng, -60, 60), uniform(rng, 10, 40), uniform(rng, 10, 40),
                           uniform(rng, 0, 6.283));
        CHECK(footprints_overlap(a, b) == oracle::quads_intersect(a, b));
        ++checked;
    }
    CHECK(checked == 20000);
}

TEST_CASE("kept set is pairwise disjoint") {
    SceneConfig c;
    c.area_x = c.area_y = 250.0;
    c.lambda_b_prime = 50.0 / c.area();
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Rng rng(seed);
        const auto kept = remove_overlaps(generate_buildings(c, rng));
        for (std::size_t i = 0; i < kept.size(); ++i) {
            CHECK(kept[i].id == i);
            for (std::size_t j = i + 1; j < kept.size(); ++j) {
                CHECK_FALSE(oracle::quads_intersect(kept[i], kept[j]));
            }
        }
    }
}

TEST_CASE("point in footprint") {
    const auto b = box(50, 50, 30, 20, std::numbers::pi / 4);
    CHECK(point_in_footprint(50, 50, b));
    CHECK_FALSE(point_in_footprint(50 + std::hypot(15, 10) + 0.01, 50, b));
    const auto corner = oracle::rotate({15, 10}, b.omega);
    CHECK(point_in_footprint(b.cx + corner.x * (1 - 1e-12), b.cy + corner.y * (1 - 1e-12), b));
    CHECK(point_in_footprint(65 - 1e-12, 50, box(50, 50, 30, 20)));
    CHECK(point_in_footprint(65, 50, box(50, 50, 30, 20)));
    const auto past = oracle::rotate({15.01, 10}, b.omega);
    CHECK_FALSE(point_in_footprint(b.cx + past.x, b.cy + past.y, b));
}

TEST_CASE("user grid") {
    SceneConfig c;
    c.n1 = 4;
    c.n2 = 5;
    SUBCASE("no buildings") {
        const auto us = generate_users(c, {});
        REQUIRE(us.size() == 20);
        CHECK(us[0].x == doctest::Approx(125.0));
        CHECK(us[0].y == doctest::Approx(100.0));
    }
    SUBCASE("one building covers everything") {
        CHECK(generate_users(c, {box(500, 500, 1000, 1000)}).empty());
    }
    SUBCASE("boundary users are removed") {
        // Grid x-coordinates are 125, 375, ...; a box edge at exactly x = 375.
        const auto us = generate_users(c, {box(350, 500, 50, 1000)});
        for (const auto& u : us) {
            CHECK(u.x != 375.0);
        }
        CHECK(us.size() == 15);
    }
}

TEST_CASE("scene invariants and determinism") {
    SceneConfig c;
    c.seed = 42;
    const Scene s1 = generate_scene(c);
    const Scene s2 = generate_scene(c);
    REQUIRE(s1.buildings.size() == s2.buildings.size());
    for (std::size_t i = 0; i < s1.buildings.size(); ++i) {
        CHECK(s1.buildings[i].cx == s2.buildings[i].cx);
        CHECK(s1.buildings[i].omega == s2.buildings[i].omega);
    }
    CHECK(s1.users.size() == s2.users.size());
    CHECK(s1.users.size() + s1.indoor_removed == 900);
    for (const auto& u : s1.users) {
        for (const auto& b : s1.buildings) {
            CHECK_FALSE(point_in_footprint(u.x, u.y, b));
        }
    }
}

TEST_CASE("user count near eight hundred") {
    SceneConfig c;
    for (std::uint64_t seed : {1, 2, 3}) {
        c.seed = seed;
        const auto n = static_cast<double>(generate_scene(c).users.size());
        CHECK(n >= 800 * 0.85);
        CHECK(n <= 800 * 1.15);
    }
}

}
