#include "riscov/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace riscov {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

DomeConfig with_k(DomeConfig dome, std::size_t k) {
    dome.k = k;
    return dome;
}

PgaParams pga_for(const ExperimentConfig& cfg, std::string_view tag) {
    PgaParams p = cfg.pga;
    p.seed = derive_seed(cfg.master_seed, tag);
    return p;
}

std::vector<PowerMatrixSet> test_matrices(const ExperimentConfig& cfg, const Scene& scene) {
    std::vector<PowerMatrixSet> out;
    out.reserve(cfg.n_test_sets);
    for (std::size_t t = 0; t < cfg.n_test_sets; ++t) {
        Rng rng = make_stream(cfg.master_seed, "sats-test-" + std::to_string(t));
        const auto sats = random_dome(cfg.test_set_size, cfg.dome, rng);
        out.push_back(build_power_matrices(sats, scene, cfg.channel));
    }
    return out;
}

TestingResult summarise(std::vector<double> values) {
    TestingResult r;
    r.per_set = std::move(values);
    const auto n = static_cast<double>(r.per_set.size());
    if (r.per_set.empty()) {
        return r;
    }
    r.mean = std::accumulate(r.per_set.begin(), r.per_set.end(), 0.0) / n;
    if (r.per_set.size() > 1) {
        double ss = 0.0;
        for (double v : r.per_set) {
            ss += (v - r.mean) * (v - r.mean);
        }
        r.std = std::sqrt(ss / (n - 1.0));
    }
    return r;
}

TestingResult evaluate_on(const DeploymentMask& mask, const std::vector<PowerMatrixSet>& sets, double epsilon) {
    std::vector<double> values;
    values.reserve(sets.size());
    for (const auto& w : sets) {
        values.push_back(objective(mask, w, epsilon));
    }
    return summarise(std::move(values));
}

std::vector<double> ranks(std::span<const double> v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) {
            ++j;
        }
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t t = i; t <= j; ++t) {
            r[idx[t]] = avg;
        }
        i = j + 1;
    }
    return r;
}

}  // namespace

void ExperimentConfig::validate() const {
    scene.validate();
    channel.validate();
    dome.validate();
    pga.validate();
    auto unit = [](double g) { return g >= 0.0 && g <= 1.0; };
    if (!std::all_of(gamma_list.begin(), gamma_list.end(), unit) ||
        !std::all_of(fig4_gammas.begin(), fig4_gammas.end(), unit) || !unit(fig3_gamma) || !unit(fig5_gamma)) {
        throw std::invalid_argument("ExperimentConfig: deployment ratios must lie in [0, 1]");
    }
    if (k_train < 1 || n_test_sets < 1 || test_set_size < 1 || fig4_k < 1) {
        throw std::invalid_argument("ExperimentConfig: satellite counts must be >= 1");
    }
    for (double e : fig3_elevations_deg) {
        if (!(e > 0.0 && e < 90.0)) {
            throw std::invalid_argument("ExperimentConfig: fig3 elevations must lie in (0, 90) degrees");
        }
    }
}

Scene experiment_scene(const ExperimentConfig& cfg) {
    SceneConfig s = cfg.scene;
    s.seed = derive_seed(cfg.master_seed, "scene");
    return generate_scene(s);
}

Scene scene_with_building_count(SceneConfig cfg, std::size_t n_b, std::uint64_t master, std::size_t max_attempts) {
    for (std::size_t a = 0; a < max_attempts; ++a) {
        cfg.seed = derive_seed(master, "scene-fixed-" + std::to_string(a));
        Rng rng = make_stream(cfg.seed, "scene");
        auto buildings = remove_overlaps(generate_buildings(cfg, rng));
        if (buildings.size() != n_b) {
            continue;
        }
        Scene scene;
        scene.area_x = cfg.area_x;
        scene.area_y = cfg.area_y;
        scene.buildings = std::move(buildings);
        scene.users = generate_users(cfg, scene.buildings);
        scene.indoor_removed = static_cast<std::size_t>(cfg.n1 * cfg.n2) - scene.users.size();
        return scene;
    }
    throw std::runtime_error("scene_with_building_count: no scene with " + std::to_string(n_b) + " buildings after " +
                             std::to_string(max_attempts) + " attempts");
}

BoundParams matched_bound_params(const Scene& scene, const SceneConfig& scfg, const ChannelParams& ch,
                                 const BoundModelConfig& bm, const SatellitePosition& sat,
                                 std::span<const std::size_t> nlos_users, double gamma) {
    const double r = ch.r_max;
    double nbar = 0.0;
    for (std::size_t u : nlos_users) {
        const auto& user = scene.users.at(u);
        for (const auto& b : scene.buildings) {
            if (std::hypot(b.cx - user.x, b.cy - user.y) <= r) {
                nbar += 1.0;
            }
        }
    }
    if (!nlos_users.empty()) {
        nbar /= static_cast<double>(nlos_users.size());
    }

    const double h_bar = 0.5 * (scfg.h_min + scfg.h_max);
    const double rho = std::hypot(sat.x, sat.y);
    const double rise = sat.z - h_bar;

    BoundParams bp;
    bp.lambda_bl = nbar / (std::numbers::pi * r * r);
    bp.l_bar = scfg.mean_length();
    bp.w_bar = scfg.mean_width();
    bp.h_min = scfg.h_min;
    bp.h_max = scfg.h_max;
    bp.r = r;
    bp.d_rs = std::hypot(rho, rise);
    bp.d_rs_xy = rho > 0.0 ? (scfg.h_max - h_bar) * rho / rise : 0.0;
    bp.eta1 = bm.eta1;
    bp.eta2 = bm.eta2;
    bp.p_t = ch.p_t;
    bp.d_const = cascade_constant(ch);
    bp.n_r = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(gamma * nbar)));
    return bp;
}

double matched_bound_coverage(const Scene& scene, const SceneConfig& scfg, const ChannelParams& ch,
                              const BoundModelConfig& bm, std::span<const SatellitePosition> sats,
                              const PowerMatrixSet& w, double gamma) {
    if (sats.size() != w.n_satellites()) {
        throw std::invalid_argument("matched_bound_coverage: satellite count does not match the matrices");
    }
    double weighted = 0.0;
    double weight = 0.0;
    for (std::size_t k = 0; k < sats.size(); ++k) {
        const auto& nlos = w.block(k).nlos_users;
        if (nlos.empty()) {
            continue;
        }
        const BoundParams bp = matched_bound_params(scene, scfg, ch, bm, sats[k], nlos, gamma);
        double nbar = bp.lambda_bl * std::numbers::pi * bp.r * bp.r;
        const double cov = std::lround(gamma * nbar) == 0 ? 0.0 : bound_coverage(bp, ch.epsilon, bm.grid_size);
        weighted += cov * static_cast<double>(nlos.size());
        weight += static_cast<double>(nlos.size());
    }
    return weight > 0.0 ? weighted / weight : 0.0;
}

double random_baseline(const PowerMatrixSet& w, double epsilon, double gamma, std::size_t draws,
                       std::uint64_t master) {
    if (draws == 0) {
        return 0.0;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
        Rng rng = make_stream(master, "random-" + std::to_string(i));
        sum += objective(random_deployment(w.n_buildings(), gamma, rng), w, epsilon);
    }
    return sum / static_cast<double>(draws);
}

TrainingResult run_training(const ExperimentConfig& cfg, const Scene& scene, double gamma,
                            const std::vector<DeploymentMask>& warm_start) {
    TrainingResult out;
    out.scene = scene;
    out.sats = fibonacci_dome(with_k(cfg.dome, cfg.k_train));
    out.matrices = build_power_matrices(out.sats, scene, cfg.channel);
    const std::size_t n_b = scene.buildings.size();
    out.mask = DeploymentMask(n_b);
    if (out.matrices.total_nlos() == 0 || ris_budget(n_b, gamma) == 0) {
        out.train_coverage = objective(out.mask, out.matrices, cfg.channel.epsilon);
        out.report.best_mask = out.mask;
        out.report.best_fitness = out.train_coverage;
        return out;
    }
    out.report = pga_optimize(out.matrices, cfg.channel.epsilon, gamma, pga_for(cfg, "pga"), warm_start);
    out.mask = out.report.best_mask;
    out.train_coverage = out.report.best_fitness;
    return out;
}

TrainingResult run_training(const ExperimentConfig& cfg, double gamma) {
    cfg.validate();
    return run_training(cfg, experiment_scene(cfg), gamma);
}

TestingResult run_testing(const DeploymentMask& mask, const ExperimentConfig& cfg, const Scene& scene) {
    if (mask.total() == 0) {
        return summarise(std::vector<double>(cfg.n_test_sets, 0.0));
    }
    return evaluate_on(mask, test_matrices(cfg, scene), cfg.channel.epsilon);
}

TestingResult run_testing(const DeploymentMask& mask, const ExperimentConfig& cfg) {
    cfg.validate();
    return run_testing(mask, cfg, experiment_scene(cfg));
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentReport report;
    report.scene = experiment_scene(cfg);
    const auto tests = test_matrices(cfg, report.scene);
    std::vector<double> gammas = cfg.gamma_list;
    std::sort(gammas.begin(), gammas.end());
    std::vector<DeploymentMask> warm;
    for (double gamma : gammas) {
        const auto t0 = std::chrono::steady_clock::now();
        TrainingResult tr = run_training(cfg, report.scene, gamma, warm);
        warm = {tr.mask};
        ExperimentCell cell;
        cell.gamma = gamma;
        cell.k_train = cfg.k_train;
        cell.train_coverage = tr.train_coverage;
        const TestingResult te = tr.mask.total() == 0 ? summarise(std::vector<double>(tests.size(), 0.0))
                                                       : evaluate_on(tr.mask, tests, cfg.channel.epsilon);
        cell.test_coverage_mean = te.mean;
        cell.test_coverage_std = te.std;
        cell.random_baseline_coverage =
            random_baseline(tr.matrices, cfg.channel.epsilon, gamma, cfg.random_draws, cfg.master_seed);
        cell.bound_coverage = matched_bound_coverage(report.scene, cfg.scene, cfg.channel, cfg.bound, tr.sats,
                                                     tr.matrices, gamma);
        cell.mask = tr.mask;
        cell.history = tr.report.history;
        cell.wall_time_seconds = seconds_since(t0);
        report.cells.push_back(std::move(cell));
    }
    return report;
}

std::vector<Fig3Row> run_fig3(const ExperimentConfig& cfg) {
    cfg.validate();
    SceneConfig scfg = cfg.scene;
    scfg.area_x = cfg.fig3_area_x;
    scfg.area_y = cfg.fig3_area_y;
    const Scene scene = scene_with_building_count(scfg, cfg.fig3_buildings, cfg.master_seed);
    const double eps = cfg.channel.epsilon;

    std::vector<Fig3Row> rows;
    for (double elev_deg : cfg.fig3_elevations_deg) {
        DomeConfig dome = cfg.dome;
        dome.theta_min = elev_deg * std::numbers::pi / 180.0;
        const std::vector<SatellitePosition> sats{edge_position(cfg.fig3_azimuth, dome)};
        const PowerMatrixSet w = build_power_matrices(sats, scene, cfg.channel);

        Fig3Row row;
        row.elevation_deg = elev_deg;
        row.nlos_users = w.total_nlos();
        if (w.total_nlos() > 0) {
            const FitnessReport ex = exhaustive_search(w, eps, cfg.fig3_gamma);
            const FitnessReport ga = pga_optimize(w, eps, cfg.fig3_gamma, pga_for(cfg, "pga-fig3"));
            row.exhaustive_coverage = ex.best_fitness;
            row.pga_coverage = ga.best_fitness;
            row.exhaustive_seconds = ex.wall_seconds;
            row.pga_seconds = ga.wall_seconds;
            row.exhaustive_evaluations = ex.evaluations;
            row.pga_evaluations = ga.evaluations;
            row.random_coverage = random_baseline(w, eps, cfg.fig3_gamma, cfg.random_draws, cfg.master_seed);
            row.bound_coverage =
                matched_bound_coverage(scene, scfg, cfg.channel, cfg.bound, sats, w, cfg.fig3_gamma);
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<Fig4Row> run_fig4(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<double> gammas = cfg.fig4_gammas;
    std::sort(gammas.begin(), gammas.end());
    const auto sats = fibonacci_dome(with_k(cfg.dome, cfg.fig4_k));
    const double eps = cfg.channel.epsilon;

    std::vector<Fig4Row> rows;
    for (std::size_t d = 0; d < cfg.fig4_densities.size(); ++d) {
        SceneConfig scfg = cfg.scene;
        scfg.lambda_b_prime = cfg.fig4_densities[d];
        scfg.seed = derive_seed(cfg.master_seed, "scene-density-" + std::to_string(d));
        const Scene scene = generate_scene(scfg);
        const PowerMatrixSet w = build_power_matrices(sats, scene, cfg.channel);
        const double density = static_cast<double>(scene.buildings.size()) / (scfg.area() * 1e-6);
        const std::size_t n_b = scene.buildings.size();

        std::vector<DeploymentMask> warm;
        for (double gamma : gammas) {
            Fig4Row row;
            row.density = density;
            row.gamma = gamma;
            if (w.total_nlos() > 0 && ris_budget(n_b, gamma) > 0) {
                const FitnessReport ga = pga_optimize(w, eps, gamma, pga_for(cfg, "pga-fig4-" + std::to_string(d)), warm);
                warm = {ga.best_mask};
                row.optimized_coverage = ga.best_fitness;
                row.random_coverage = random_baseline(w, eps, gamma, cfg.random_draws, cfg.master_seed);
            }
            rows.push_back(row);
        }
    }
    return rows;
}

std::vector<Fig5Row> run_fig5(const ExperimentConfig& cfg) {
    cfg.validate();
    const Scene scene = experiment_scene(cfg);
    const auto tests = test_matrices(cfg, scene);
    std::vector<Fig5Row> rows;
    for (std::size_t k : cfg.fig5_k_list) {
        ExperimentConfig c = cfg;
        c.k_train = k;
        const TrainingResult tr = run_training(c, scene, cfg.fig5_gamma);
        const TestingResult te = tr.mask.total() == 0 ? summarise(std::vector<double>(tests.size(), 0.0))
                                                       : evaluate_on(tr.mask, tests, cfg.channel.epsilon);
        rows.push_back({k, tr.train_coverage, te.mean, te.std});
    }
    return rows;
}

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("spearman: need two equally sized samples of length >= 2");
    }
    const auto rx = ranks(x);
    const auto ry = ranks(y);
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) {
        return 0.0;
    }
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace riscov
