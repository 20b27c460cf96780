#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "riscov/bound.hpp"
#include "riscov/channel.hpp"
#include "riscov/opt.hpp"
#include "riscov/satellites.hpp"
#include "riscov/scene.hpp"

namespace riscov {

/// Knobs for mapping a simulated scene onto the analytic bound.
struct BoundModelConfig {
    double eta1 = 1.0;
    double eta2 = 1.0;
    std::size_t grid_size = 4096;
};

struct ExperimentConfig {
    SceneConfig scene;
    ChannelParams channel{.p_t = 1e13};
    DomeConfig dome;
    PgaParams pga;
    BoundModelConfig bound;

    std::vector<double> gamma_list{0.5};
    std::size_t k_train = 30;
    std::size_t n_test_sets = 10;
    std::size_t test_set_size = 30;
    std::size_t random_draws = 50;   // random_deployment samples per baseline value
    std::uint64_t master_seed = 1;
    double train_test_slack = 0.05;

    // Exhaustive-search comparison on a small scene with a single edge satellite.
    std::vector<double> fig3_elevations_deg{30.0, 45.0, 60.0, 75.0};
    double fig3_azimuth = 0.0;      // radians
    std::size_t fig3_buildings = 8;
    double fig3_area_x = 300.0;
    double fig3_area_y = 300.0;
    double fig3_gamma = 0.5;

    // Deployment-ratio sweep, one scene per primitive building density (per m^2).
    std::vector<double> fig4_densities{4e-5, 8e-5, 1.2e-4};
    std::vector<double> fig4_gammas{0.0, 0.1, 0.25, 0.5, 0.75, 1.0};
    std::size_t fig4_k = 30;

    // Training-set size sweep.
    std::vector<std::size_t> fig5_k_list{5, 10, 30, 100};
    double fig5_gamma = 0.5;

    void validate() const;
};

/// Scene drawn from cfg.scene with its seed derived from master_seed.
Scene experiment_scene(const ExperimentConfig& cfg);

/// Re-draws scene seeds (derived from `master` and an attempt counter) until the
/// post-removal building count equals n_b. Throws std::runtime_error after max_attempts.
Scene scene_with_building_count(SceneConfig cfg, std::size_t n_b, std::uint64_t master,
                                std::size_t max_attempts = 10000);

/// Bound inputs matched to the scene as seen by the NLoS users of one satellite:
/// lambda_bl = mean building count within R of an NLoS user / (pi R^2),
/// N_R = round(gamma * that count), d_rs from the area centre at mean height, and
/// d_rs_xy the horizontal run of the RIS-satellite ray below the tallest building.
BoundParams matched_bound_params(const Scene& scene, const SceneConfig& scfg, const ChannelParams& ch,
                                 const BoundModelConfig& bm, const SatellitePosition& sat,
                                 std::span<const std::size_t> nlos_users, double gamma);

/// Bound coverage averaged over satellites, weighted by each satellite's NLoS count.
double matched_bound_coverage(const Scene& scene, const SceneConfig& scfg, const ChannelParams& ch,
                              const BoundModelConfig& bm, std::span<const SatellitePosition> sats,
                              const PowerMatrixSet& w, double gamma);

/// Mean objective of `draws` random deployments, streams derived from `master`.
double random_baseline(const PowerMatrixSet& w, double epsilon, double gamma, std::size_t draws,
                       std::uint64_t master);

struct TrainingResult {
    Scene scene;
    std::vector<SatellitePosition> sats;
    PowerMatrixSet matrices;
    DeploymentMask mask;
    double train_coverage = 0.0;
    FitnessReport report;
};

/// Scene, K Fibonacci positions, power matrices, then the GA at `gamma`.
TrainingResult run_training(const ExperimentConfig& cfg, double gamma);
TrainingResult run_training(const ExperimentConfig& cfg, const Scene& scene, double gamma,
                            const std::vector<DeploymentMask>& warm_start = {});

struct TestingResult {
    double mean = 0.0;
    double std = 0.0;
    std::vector<double> per_set;
};

/// Objective of a fixed mask over n_test_sets random satellite sets.
TestingResult run_testing(const DeploymentMask& mask, const ExperimentConfig& cfg);
TestingResult run_testing(const DeploymentMask& mask, const ExperimentConfig& cfg, const Scene& scene);

struct ExperimentCell {
    double gamma = 0.0;
    std::size_t k_train = 0;
    double train_coverage = 0.0;
    double test_coverage_mean = 0.0;
    double test_coverage_std = 0.0;
    double random_baseline_coverage = 0.0;
    double bound_coverage = 0.0;
    double wall_time_seconds = 0.0;
    DeploymentMask mask;
    std::vector<double> history;
};

struct ExperimentReport {
    Scene scene;
    std::vector<ExperimentCell> cells;
};

/// Train, test and baseline every gamma in cfg.gamma_list at K = cfg.k_train.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

struct Fig3Row {
    double elevation_deg = 0.0;
    double pga_coverage = 0.0;
    double exhaustive_coverage = 0.0;
    double random_coverage = 0.0;
    double bound_coverage = 0.0;
    // Not part of the CSV contract.
    double pga_seconds = 0.0;
    double exhaustive_seconds = 0.0;
    std::size_t pga_evaluations = 0;
    std::size_t exhaustive_evaluations = 0;
    std::size_t nlos_users = 0;
};

struct Fig4Row {
    double density = 0.0;  // post-removal buildings per km^2
    double gamma = 0.0;
    double optimized_coverage = 0.0;
    double random_coverage = 0.0;
};

struct Fig5Row {
    std::size_t k_train = 0;
    double train_coverage = 0.0;
    double test_coverage_mean = 0.0;
    double test_coverage_std = 0.0;
};

std::vector<Fig3Row> run_fig3(const ExperimentConfig& cfg);
std::vector<Fig4Row> run_fig4(const ExperimentConfig& cfg);
std::vector<Fig5Row> run_fig5(const ExperimentConfig& cfg);

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace riscov
