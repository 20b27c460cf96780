#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "riscov/config.hpp"
#include "riscov/csv_io.hpp"
#include "riscov/harness.hpp"

using namespace riscov;
using doctest::Approx;

namespace {

// A reduced setup that runs in about a second.
ExperimentConfig small_config(std::uint64_t seed = 3) {
    ExperimentConfig c;
    c.master_seed = seed;
    c.scene.area_x = c.scene.area_y = 400;
    c.scene.n1 = c.scene.n2 = 12;
    c.k_train = 6;
    c.n_test_sets = 4;
    c.test_set_size = 6;
    c.random_draws = 10;
    c.pga.s_p = 20;
    c.pga.interval = 10;
    c.pga.n_m = 6;
    c.pga.n_g = 60;
    c.fig3_elevations_deg = {30, 60};
    c.fig4_densities = {8e-5, 1.2e-4};
    c.fig4_gammas = {0.0, 0.25, 0.5};
    c.fig4_k = 6;
    c.fig5_k_list = {2, 6};
    return c;
}

std::string report_csv(const ExperimentReport& r) {
    std::ostringstream os;
    write_report(os, r);
    return os.str();
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("experiment scene is determined by the master seed") {
    const auto c = small_config();
    const Scene a = experiment_scene(c);
    const Scene b = experiment_scene(c);
    REQUIRE(a.buildings.size() == b.buildings.size());
    for (std::size_t i = 0; i < a.buildings.size(); ++i) {
        CHECK(a.buildings[i].cx == b.buildings[i].cx);
    }
    const Scene other = experiment_scene(small_config(4));
    CHECK((other.buildings.size() != a.buildings.size() || other.buildings[0].cx != a.buildings[0].cx));
}

TEST_CASE("scene with a fixed building count") {
    SceneConfig s;
    s.area_x = s.area_y = 300;
    const Scene sc = scene_with_building_count(s, 8, 5);
    CHECK(sc.buildings.size() == 8);
    CHECK(sc.users.size() + sc.indoor_removed == 900);
    CHECK_THROWS_AS(scene_with_building_count(s, 500, 5, 3), std::runtime_error);
}

TEST_CASE("matched bound parameters") {
    const auto c = small_config();
    const Scene sc = experiment_scene(c);
    const auto sat = edge_position(0.0, c.dome);
    const auto part = classify_users(sat, sc);
    REQUIRE(!part.nlos.empty());
    const BoundParams bp = matched_bound_params(sc, c.scene, c.channel, c.bound, sat, part.nlos, 0.5);
    CHECK_NOTHROW(bp.validate());
    double nbar = 0;
    for (std::size_t u : part.nlos) {
        for (const auto& b : sc.buildings) {
            nbar += std::hypot(b.cx - sc.users[u].x, b.cy - sc.users[u].y) <= c.channel.r_max;
        }
    }
    nbar /= static_cast<double>(part.nlos.size());
    CHECK(bp.lambda_bl * std::numbers::pi * 500 * 500 == Approx(nbar));
    CHECK(bp.n_r == static_cast<std::size_t>(std::max(1L, std::lround(0.5 * nbar))));
    CHECK(bp.d_rs == Approx(std::hypot(600e3 * std::sqrt(3.0), 600e3 - 100)).epsilon(1e-9));
    CHECK(bp.d_rs_xy == Approx(20 * std::sqrt(3.0) * 600e3 / (600e3 - 100)));
    CHECK(bp.l_bar == 35);
}

TEST_CASE("training and testing") {
    const auto c = small_config();
    SUBCASE("gamma zero") {
        const auto tr = run_training(c, 0.0);
        CHECK(tr.mask.total() == 0);
        CHECK(tr.train_coverage == 0.0);
        const auto te = run_testing(tr.mask, c);
        CHECK(te.mean == 0.0);
        CHECK(te.std == 0.0);
        CHECK(te.per_set.size() == c.n_test_sets);
    }
    SUBCASE("feasible, bounded and reproducible") {
        const auto tr = run_training(c, 0.5);
        CHECK(is_feasible(tr.mask, 0.5, tr.scene.buildings.size()));
        CHECK(tr.train_coverage >= 0.0);
        CHECK(tr.train_coverage <= 1.0);
        const auto a = run_testing(tr.mask, c);
        const auto b = run_testing(tr.mask, c);
        CHECK(a.mean == b.mean);
        CHECK(a.std == b.std);
        for (double v : a.per_set) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("experiment report") {
    auto c = small_config();
    c.gamma_list = {0.75, 0.25, 0.5};
    const auto r = run_experiment(c);
    REQUIRE(r.cells.size() == 3);
    CHECK(r.cells[0].gamma == 0.25);
    for (std::size_t i = 1; i < r.cells.size(); ++i) {
        CHECK(r.cells[i].train_coverage >= r.cells[i - 1].train_coverage);
    }
    for (const auto& cell : r.cells) {
        CHECK(cell.train_coverage >= cell.random_baseline_coverage);
        CHECK(cell.bound_coverage >= 0.0);
        CHECK(cell.bound_coverage <= 1.0);
        CHECK(is_feasible(cell.mask, cell.gamma, r.scene.buildings.size()));
    }
    CHECK(report_csv(r) == report_csv(run_experiment(c)));
}

TEST_CASE("figure drivers") {
    const auto c = small_config();
    SUBCASE("fig3") {
        const auto rows = run_fig3(c);
        REQUIRE(rows.size() == 2);
        for (const auto& row : rows) {
            CHECK(row.pga_coverage <= row.exhaustive_coverage);
            CHECK(row.random_coverage <= row.pga_coverage);
            CHECK(row.exhaustive_evaluations == enumeration_size(8, 0.5));
        }
    }
    SUBCASE("fig4") {
        const auto rows = run_fig4(c);
        REQUIRE(rows.size() == 6);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].gamma == 0.0) {
                CHECK(rows[i].optimized_coverage == 0.0);
                CHECK(rows[i].random_coverage == 0.0);
            } else {
                CHECK(rows[i].optimized_coverage >= rows[i - 1].optimized_coverage);
            }
            CHECK(rows[i].optimized_coverage >= rows[i].random_coverage);
        }
    }
    SUBCASE("fig5") {
        const auto rows = run_fig5(c);
        REQUIRE(rows.size() == 2);
        CHECK(rows[0].k_train == 2);
        for (const auto& row : rows) {
            CHECK(row.test_coverage_mean >= 0.0);
            CHECK(row.test_coverage_std >= 0.0);
        }
        const auto again = run_fig5(c);
        CHECK(again[1].test_coverage_std == rows[1].test_coverage_std);
    }
}

TEST_CASE("spearman") {
    const std::vector<double> x{1, 2, 3, 4};
    CHECK(spearman(x, std::vector<double>{10, 20, 30, 40}) == Approx(1.0));
    CHECK(spearman(x, std::vector<double>{4, 3, 2, 1}) == Approx(-1.0));
    CHECK(spearman(x, std::vector<double>{1, 1, 1, 1}) == 0.0);
    // Ties take average ranks: y ranks (1.5, 1.5, 3, 4).
    const double expect = 0.9486832980505138;
    CHECK(spearman(x, std::vector<double>{5, 5, 7, 9}) == Approx(expect));
    CHECK_THROWS_AS(spearman(x, std::vector<double>{1}), std::invalid_argument);
}

TEST_CASE("config round trip") {
    ExperimentConfig c = small_config(11);
    c.dome.theta_min = 40 * std::numbers::pi / 180;
    c.dome.h_s = 550e3;
    c.pga.cache = false;
    std::stringstream ss;
    write_config(ss, c);
    const ExperimentConfig d = parse_config(ss);
    CHECK(d.master_seed == 11);
    CHECK(d.scene.area_x == 400);
    CHECK(d.dome.theta_min == Approx(c.dome.theta_min));
    CHECK(d.dome.h_s == Approx(550e3));
    CHECK(d.pga.cache == false);
    CHECK(d.fig5_k_list == c.fig5_k_list);
    CHECK(d.fig4_gammas == c.fig4_gammas);
    CHECK(d.channel.p_t == c.channel.p_t);

    std::stringstream partial("[channel]\np_t = 5\n[dome]\ntheta_min_deg = 45\nh_s_km = 700\n");
    const auto p = parse_config(partial);
    CHECK(p.channel.p_t == 5);
    CHECK(p.dome.max_radius() == Approx(700e3));
    CHECK(p.scene.n1 == 30);

    std::stringstream unknown("[channel]\npower = 5\n");
    CHECK_THROWS_WITH_AS(parse_config(unknown), doctest::Contains("channel.power"), std::runtime_error);
    std::stringstream bad("[pga]\nn_p = lots\n");
    CHECK_THROWS_AS(parse_config(bad), std::runtime_error);
    std::stringstream invalid("[experiment]\ngamma_list = 0.5, 1.5\n");
    CHECK_THROWS_AS(parse_config(invalid), std::invalid_argument);
}

TEST_CASE("csv files") {
    SceneConfig s;
    s.area_x = s.area_y = 300;
    s.seed = 2;
    const Scene sc = generate_scene(s);
    std::stringstream bs;
    write_buildings(bs, sc.buildings);
    CHECK(bs.str().rfind("id,cx,cy,L,W,H,omega\n", 0) == 0);
    const auto back = read_buildings(bs);
    REQUIRE(back.size() == sc.buildings.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].cx == sc.buildings[i].cx);
        CHECK(back[i].omega == sc.buildings[i].omega);
    }

    std::stringstream us;
    write_users(us, sc.users);
    CHECK(read_users(us).size() == sc.users.size());

    DeploymentMask m(5);
    m.set(1, 2, true);
    m.set(4, 4, true);
    std::stringstream ms;
    write_mask(ms, m);
    CHECK(ms.str() == "building_id,facet_id\n1,2\n4,4\n");
    CHECK(read_mask(ms, 5) == m);

    std::stringstream wrong("id,cx,cy\n1,2,3\n");
    CHECK_THROWS_WITH_AS(read_buildings(wrong), doctest::Contains("does not match"), std::runtime_error);
    std::stringstream out_of_range("building_id,facet_id\n9,1\n");
    CHECK_THROWS_AS(read_mask(out_of_range, 5), std::runtime_error);

    std::stringstream f3;
    write_fig3(f3, {Fig3Row{30, 0.5, 0.6, 0.2, 0.1}});
    CHECK(f3.str() == "elevation_deg,pga_coverage,exhaustive_coverage,random_coverage,bound_coverage\n30,0.5,0.6,0.2,0.1\n");

    PowerMatrixSet w(2);
    w.push_block({{7}, {{{site_index(1, 3), 0.25}}}});
    std::stringstream ws;
    write_power_matrices(ws, w);
    CHECK(ws.str() == "k,user_id,building_id,facet_id,power_watts\n0,7,1,3,0.25\n");
}

}
