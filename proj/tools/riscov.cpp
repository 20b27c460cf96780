#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "riscov/config.hpp"
#include "riscov/csv_io.hpp"
#include "riscov/harness.hpp"

using namespace riscov;

namespace {

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out = "out";
    std::optional<std::size_t> k;
    std::optional<double> theta_min_deg;
    std::optional<double> hs_km;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config, "INI configuration file")->check(CLI::ExistingFile);
    sub->add_option("--seed", c.seed, "master seed (overrides the config)");
    sub->add_option("--out", c.out, "output directory")->capture_default_str();
    sub->add_option("--k", c.k, "number of training satellite positions");
    sub->add_option("--theta-min-deg", c.theta_min_deg, "minimum elevation angle in degrees")
        ->check(CLI::Range(0.0, 90.0));
    sub->add_option("--hs-km", c.hs_km, "satellite altitude in km")->check(CLI::PositiveNumber);
}

ExperimentConfig resolve(const Common& c) {
    ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : load_config(c.config);
    if (c.seed) {
        cfg.master_seed = *c.seed;
    }
    if (c.k) {
        cfg.k_train = *c.k;
        cfg.dome.k = *c.k;
    }
    if (c.theta_min_deg) {
        cfg.dome.theta_min = *c.theta_min_deg * std::numbers::pi / 180.0;
    }
    if (c.hs_km) {
        cfg.dome.h_s = *c.hs_km * 1e3;
    }
    cfg.validate();
    return cfg;
}

template <typename F>
void emit(const std::string& dir, const std::string& name, F write) {
    std::ostringstream os;
    write(os);
    write_file(dir, name, os.str());
    std::cerr << "wrote " << dir << '/' << name << '\n';
}

std::vector<SatellitePosition> training_positions(const ExperimentConfig& cfg) {
    DomeConfig d = cfg.dome;
    d.k = cfg.k_train;
    return fibonacci_dome(d);
}

void cmd_scene(const ExperimentConfig& cfg, const std::string& out) {
    const Scene s = experiment_scene(cfg);
    emit(out, "buildings.csv", [&](std::ostream& os) { write_buildings(os, s.buildings); });
    emit(out, "users.csv", [&](std::ostream& os) { write_users(os, s.users); });
    std::cerr << s.buildings.size() << " buildings, " << s.users.size() << " users (" << s.indoor_removed
              << " indoor grid points removed)\n";
}

void cmd_satellites(const ExperimentConfig& cfg, const std::string& out) {
    const auto sats = training_positions(cfg);
    emit(out, "satellites.csv", [&](std::ostream& os) { write_satellites(os, sats); });
}

void cmd_matrices(const ExperimentConfig& cfg, const std::string& out) {
    const Scene s = experiment_scene(cfg);
    const auto sats = training_positions(cfg);
    const auto w = build_power_matrices(sats, s, cfg.channel);
    emit(out, "satellites.csv", [&](std::ostream& os) { write_satellites(os, sats); });
    emit(out, "power_matrices.csv", [&](std::ostream& os) { write_power_matrices(os, w); });
    std::cerr << w.total_nlos() << " NLoS (satellite, user) pairs\n";
}

// Bound curves for the satellite on the dome rim, matched to the experiment scene.
void cmd_bound(const ExperimentConfig& cfg, const std::string& out, double gamma) {
    const Scene s = experiment_scene(cfg);
    const SatellitePosition sat = edge_position(cfg.fig3_azimuth, cfg.dome);
    const LosPartition part = classify_users(sat, s);
    if (part.nlos.empty()) {
        throw std::runtime_error("bound: no NLoS users for the rim satellite");
    }

    const BoundParams bp = matched_bound_params(s, cfg.scene, cfg.channel, cfg.bound, sat, part.nlos, gamma);
    const DiscretePdf pdf = convolve_n(single_ris_power_pdf(bp, cfg.bound.grid_size), bp.n_r);
    emit(out, "bound_epsilon.csv", [&](std::ostream& os) {
        os << kBoundEpsilonHeader << '\n';
        const double lo = std::log10(cfg.channel.epsilon) - 2.0;
        for (int i = 0; i <= 80; ++i) {
            const double eps = std::pow(10.0, lo + 4.0 * i / 80.0);
            os << format_number(eps) << ',' << format_number(coverage_probability(pdf, eps)) << '\n';
        }
    });

    std::vector<double> gammas = cfg.fig4_gammas;
    gammas.insert(gammas.end(), cfg.gamma_list.begin(), cfg.gamma_list.end());
    std::sort(gammas.begin(), gammas.end());
    gammas.erase(std::unique(gammas.begin(), gammas.end()), gammas.end());
    const double nbar = bp.lambda_bl * std::numbers::pi * bp.r * bp.r;
    emit(out, "bound_gamma.csv", [&](std::ostream& os) {
        os << kBoundGammaHeader << '\n';
        for (double g : gammas) {
            const long n_r = std::lround(g * nbar);
            double cov = 0.0;
            if (n_r > 0) {
                BoundParams b = bp;
                b.n_r = static_cast<std::size_t>(n_r);
                cov = bound_coverage(b, cfg.channel.epsilon, cfg.bound.grid_size);
            }
            os << format_number(g) << ',' << n_r << ',' << format_number(cov) << '\n';
        }
    });
}

void cmd_optimize(const ExperimentConfig& cfg, const std::string& out, double gamma) {
    const TrainingResult tr = run_training(cfg, gamma);
    emit(out, "satellites.csv", [&](std::ostream& os) { write_satellites(os, tr.sats); });
    emit(out, "mask.csv", [&](std::ostream& os) { write_mask(os, tr.mask); });
    emit(out, "history.csv", [&](std::ostream& os) { write_history(os, tr.report.history); });
    std::cout << "gamma " << gamma << ": " << tr.mask.total() << " RISs, training coverage " << tr.train_coverage
              << " (" << tr.report.evaluations << " evaluations, " << tr.report.wall_seconds << " s)\n";
}

void cmd_evaluate(const ExperimentConfig& cfg, const std::string& out, const std::string& mask_path) {
    if (!mask_path.empty()) {
        const Scene s = experiment_scene(cfg);
        std::ifstream in(mask_path);
        if (!in) {
            throw std::runtime_error("cannot open mask file " + mask_path);
        }
        const DeploymentMask mask = read_mask(in, s.buildings.size());
        const TestingResult te = run_testing(mask, cfg, s);
        emit(out, "test_sets.csv", [&](std::ostream& os) {
            os << "set,coverage\n";
            for (std::size_t i = 0; i < te.per_set.size(); ++i) {
                os << i << ',' << format_number(te.per_set[i]) << '\n';
            }
        });
        std::cout << "test coverage mean " << te.mean << ", std " << te.std << '\n';
        return;
    }
    const ExperimentReport rep = run_experiment(cfg);
    emit(out, "report.csv", [&](std::ostream& os) { write_report(os, rep); });
    for (const auto& c : rep.cells) {
        std::ostringstream name;
        name << "mask_gamma_" << format_number(c.gamma) << ".csv";
        emit(out, name.str(), [&](std::ostream& os) { write_mask(os, c.mask); });
        std::cout << "gamma " << c.gamma << ": train " << c.train_coverage << ", test " << c.test_coverage_mean
                  << " +- " << c.test_coverage_std << ", random " << c.random_baseline_coverage << ", bound "
                  << c.bound_coverage << " (" << c.wall_time_seconds << " s)\n";
    }
}

void cmd_fig3(const ExperimentConfig& cfg, const std::string& out) {
    const auto rows = run_fig3(cfg);
    emit(out, "fig3.csv", [&](std::ostream& os) { write_fig3(os, rows); });
    for (const auto& r : rows) {
        std::cout << "elevation " << r.elevation_deg << ": " << r.nlos_users << " NLoS users, GA "
                  << r.pga_evaluations << " evaluations in " << r.pga_seconds << " s, exhaustive "
                  << r.exhaustive_evaluations << " in " << r.exhaustive_seconds << " s\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RIS placement for satellite NLoS coverage"};
    app.require_subcommand(1);

    Common common;
    double gamma = -1.0;
    std::string mask_path;

    auto* scene = app.add_subcommand("scene", "generate a scene: buildings.csv, users.csv");
    auto* sats = app.add_subcommand("satellites", "training satellite positions: satellites.csv");
    auto* matrices = app.add_subcommand("matrices", "power matrices for the training positions");
    auto* bound = app.add_subcommand("bound", "analytic lower bound curves: bound_epsilon.csv, bound_gamma.csv");
    auto* optimize = app.add_subcommand("optimize", "train a deployment: mask.csv, history.csv");
    auto* evaluate = app.add_subcommand("evaluate", "test a mask, or run train/test over gamma_list: report.csv");
    auto* fig3 = app.add_subcommand("fig3", "GA vs exhaustive vs random vs bound over elevation: fig3.csv");
    auto* fig4 = app.add_subcommand("fig4", "coverage vs deployment ratio per density: fig4.csv");
    auto* fig5 = app.add_subcommand("fig5", "train/test coverage vs training-set size: fig5.csv");
    for (auto* sub : {scene, sats, matrices, bound, optimize, evaluate, fig3, fig4, fig5}) {
        add_common(sub, common);
    }
    for (auto* sub : {bound, optimize}) {
        sub->add_option("--gamma", gamma, "deployment ratio (default: first entry of gamma_list)")
            ->check(CLI::Range(0.0, 1.0));
    }
    evaluate->add_option("--mask", mask_path, "mask CSV to evaluate on the test sets")->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        const ExperimentConfig cfg = resolve(common);
        const double g = gamma >= 0.0 ? gamma : cfg.gamma_list.front();
        const std::string& out = common.out;
        emit(out, "config.ini", [&](std::ostream& os) { write_config(os, cfg); });
        if (scene->parsed()) {
            cmd_scene(cfg, out);
        } else if (sats->parsed()) {
            cmd_satellites(cfg, out);
        } else if (matrices->parsed()) {
            cmd_matrices(cfg, out);
        } else if (bound->parsed()) {
            cmd_bound(cfg, out, g);
        } else if (optimize->parsed()) {
            cmd_optimize(cfg, out, g);
        } else if (evaluate->parsed()) {
            cmd_evaluate(cfg, out, mask_path);
        } else if (fig3->parsed()) {
            cmd_fig3(cfg, out);
        } else if (fig4->parsed()) {
            emit(out, "fig4.csv", [&](std::ostream& os) { write_fig4(os, run_fig4(cfg)); });
        } else if (fig5->parsed()) {
            emit(out, "fig5.csv", [&](std::ostream& os) { write_fig5(os, run_fig5(cfg)); });
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
