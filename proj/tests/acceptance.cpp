// Acceptance checks: one PASS/FAIL line per criterion. Exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "riscov/csv_io.hpp"
#include "riscov/harness.hpp"

using namespace riscov;

namespace {

constexpr double kPi = std::numbers::pi;

// Tolerances and sizes.
constexpr std::size_t kOptimalityScenes = 20;
constexpr std::size_t kOptimalityMinExact = 18;
constexpr std::size_t kOptimalityMaxGap = 1;  // covered users
constexpr double kEvaluationFraction = 0.10;
constexpr double kBoundRandomTol = 0.05;
constexpr std::size_t kRandomSeeds = 50;
constexpr double kMcTol = 0.01;
constexpr std::size_t kMcSamples = 1'000'000;
constexpr double kTrainTestSlack = 0.05;
constexpr std::size_t kTrainTestSeeds = 5;
constexpr double kOracleAgreement = 0.999;
constexpr std::size_t kOracleCases = 10'000;
constexpr double kNormTol = 1e-6;
constexpr std::size_t kMonotonePairs = 10'000;

struct Outcome {
    bool pass;
    std::string detail;
};

int g_failures = 0;

void report(const std::string& name, const std::function<Outcome()>& check) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = check();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) {
        ++g_failures;
    }
    std::printf("%s %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// GA settings used on the 8-building instances.
PgaParams small_instance_pga(std::uint64_t seed) {
    PgaParams p;
    p.n_p = 4;
    p.s_p = 16;
    p.interval = 5;
    p.n_m = 40;
    p.n_g = 200;
    p.stall_rounds = 6;
    p.seed = seed;
    return p;
}

// GA settings used on full 1 km^2 scenes.
PgaParams large_instance_pga(std::uint64_t seed) {
    PgaParams p;
    p.n_p = 4;
    p.s_p = 30;
    p.interval = 10;
    p.n_m = 12;
    p.n_g = 120;
    p.seed = seed;
    return p;
}

ExperimentConfig base_config(std::uint64_t seed) {
    ExperimentConfig c;
    c.master_seed = seed;
    c.pga = large_instance_pga(derive_seed(seed, "pga"));
    return c;
}

struct SmallInstance {
    PowerMatrixSet w;
    FitnessReport ga;
    FitnessReport ex;
};

const std::vector<SmallInstance>& small_instances() {
    static const std::vector<SmallInstance> cache = [] {
        std::vector<SmallInstance> out;
        const ExperimentConfig cfg;
        SceneConfig s = cfg.scene;
        s.area_x = s.area_y = 300;
        const std::vector<SatellitePosition> sats{edge_position(0.0, cfg.dome)};
        std::uint64_t master = 1000;
        while (out.size() < kOptimalityScenes) {
            const Scene scene = scene_with_building_count(s, 8, master++);
            PowerMatrixSet w = build_power_matrices(sats, scene, cfg.channel);
            if (w.total_nlos() == 0) {
                continue;
            }
            const double eps = cfg.channel.epsilon;
            FitnessReport ex = exhaustive_search(w, eps, 0.5);
            FitnessReport ga = pga_optimize(w, eps, 0.5, small_instance_pga(master));
            out.push_back({std::move(w), std::move(ga), std::move(ex)});
        }
        return out;
    }();
    return cache;
}

Outcome pga_vs_exhaustive() {
    std::size_t exact = 0;
    std::size_t worst_gap = 0;
    for (const auto& inst : small_instances()) {
        const double n = static_cast<double>(inst.w.total_nlos());
        const auto ga = static_cast<std::size_t>(std::lround(inst.ga.best_fitness * n));
        const auto ex = static_cast<std::size_t>(std::lround(inst.ex.best_fitness * n));
        exact += ga == ex;
        worst_gap = std::max(worst_gap, ex > ga ? ex - ga : 0);
    }
    return {exact >= kOptimalityMinExact && worst_gap <= kOptimalityMaxGap,
            fmt("%zu/%zu scenes at the exhaustive optimum, worst gap %zu users", exact, small_instances().size(),
                worst_gap)};
}

Outcome pga_speed() {
    double ga_time = 0, ex_time = 0;
    std::size_t worst_evals = 0;
    for (const auto& inst : small_instances()) {
        ga_time += inst.ga.wall_seconds;
        ex_time += inst.ex.wall_seconds;
        worst_evals = std::max(worst_evals, inst.ga.evaluations);
    }
    const auto enum_size = static_cast<double>(enumeration_size(8, 0.5));
    const bool ok = ga_time < ex_time && static_cast<double>(worst_evals) < kEvaluationFraction * enum_size;
    return {ok, fmt("GA %.3f s vs exhaustive %.3f s; max GA evaluations %zu of %.0f (limit %.0f%%)", ga_time,
                    ex_time, worst_evals, enum_size, kEvaluationFraction * 100)};
}

// Single edge satellite at the minimum elevation over a default 1 km^2 scene.
struct EdgeCell {
    double gamma;
    double random;
    double bound;
    double optimized;
};

std::vector<EdgeCell> edge_cells(std::uint64_t seed) {
    const ExperimentConfig cfg = base_config(seed);
    const Scene scene = experiment_scene(cfg);
    const std::vector<SatellitePosition> sats{edge_position(0.0, cfg.dome)};
    const PowerMatrixSet w = build_power_matrices(sats, scene, cfg.channel);
    std::vector<EdgeCell> out;
    for (double gamma : {0.25, 0.5}) {
        EdgeCell c{gamma, 0, 0, 0};
        c.random = random_baseline(w, cfg.channel.epsilon, gamma, kRandomSeeds, seed);
        c.bound = matched_bound_coverage(scene, cfg.scene, cfg.channel, cfg.bound, sats, w, gamma);
        c.optimized = pga_optimize(w, cfg.channel.epsilon, gamma, cfg.pga).best_fitness;
        out.push_back(c);
    }
    return out;
}

const std::vector<std::vector<EdgeCell>>& all_edge_cells() {
    static const std::vector<std::vector<EdgeCell>> cache = [] {
        std::vector<std::vector<EdgeCell>> out;
        for (std::uint64_t seed : {1, 2, 3}) {
            out.push_back(edge_cells(seed));
        }
        return out;
    }();
    return cache;
}

Outcome bound_vs_random() {
    const auto& cells = all_edge_cells().front();
    bool ok = true;
    std::string detail;
    for (const auto& c : cells) {
        const double diff = std::abs(c.random - c.bound);
        ok = ok && diff <= kBoundRandomTol;
        detail += fmt("gamma %.2f random %.3f bound %.3f |diff| %.3f; ", c.gamma, c.random, c.bound, diff);
    }
    return {ok, detail + fmt("tolerance %.2f", kBoundRandomTol)};
}

Outcome optimized_vs_bound() {
    bool ok = true;
    double margin = 1.0;
    std::size_t cells = 0;
    for (const auto& scene_cells : all_edge_cells()) {
        for (const auto& c : scene_cells) {
            ok = ok && c.optimized >= c.bound;
            margin = std::min(margin, c.optimized - c.bound);
            ++cells;
        }
    }
    return {ok, fmt("%zu (scene, gamma) cells, smallest optimized - bound margin %.3f", cells, margin)};
}

Outcome analytic_vs_mc() {
    const ChannelParams ch = ExperimentConfig{}.channel;
    double worst = 0;
    Rng rng = make_stream(7, "acceptance-mc");
    for (double lambda : {5e-5, 1e-4, 2e-4}) {
        for (std::size_t n_r : {2u, 6u, 12u}) {
            BoundParams bp;
            bp.lambda_bl = lambda;
            bp.n_r = n_r;
            bp.p_t = ch.p_t;
            bp.d_const = cascade_constant(ch);
            bp.d_rs = 1.2e6;
            bp.d_rs_xy = 35;
            const double a = bound_coverage(bp, ch.epsilon);
            const double m = monte_carlo_bound(bp, ch.epsilon, kMcSamples, rng);
            worst = std::max(worst, std::abs(a - m));
        }
    }
    return {worst <= kMcTol, fmt("max |analytic - MC| = %.4f over 9 cells (tolerance %.2f)", worst, kMcTol)};
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

Outcome gamma_monotonicity() {
    const std::vector<double> gammas{0.1, 0.25, 0.5, 0.75, 1.0};
    bool ok = true;
    std::string detail;
    for (std::uint64_t seed : {1, 2}) {
        ExperimentConfig cfg = base_config(seed);
        cfg.fig4_densities = {cfg.scene.lambda_b_prime};
        cfg.fig4_gammas = gammas;
        const auto rows = run_fig4(cfg);
        std::vector<double> opt, rnd;
        for (const auto& r : rows) {
            opt.push_back(r.optimized_coverage);
            rnd.push_back(r.random_coverage);
        }
        const bool mono = std::is_sorted(opt.begin(), opt.end());
        // Low-coverage regime: random points below one half.
        std::vector<double> gx, ry;
        for (std::size_t i = 0; i < gammas.size(); ++i) {
            if (rnd[i] < 0.5) {
                gx.push_back(gammas[i]);
                ry.push_back(rnd[i]);
            }
        }
        const double s = gx.size() >= 2 ? slope(gx, ry) : slope(gammas, rnd);
        ok = ok && mono && s > 0;
        detail += fmt("scene %llu optimized [", static_cast<unsigned long long>(seed));
        for (double v : opt) {
            detail += fmt("%.3f ", v);
        }
        detail += fmt("] random slope %.3f over %zu low-coverage points; ", s, gx.size());
    }
    return {ok, detail};
}

Outcome train_test() {
    const std::vector<std::size_t> ks{5, 10, 30, 100};
    std::vector<double> mean_test(ks.size(), 0.0);
    double worst_excess = -1.0;
    for (std::uint64_t seed = 1; seed <= kTrainTestSeeds; ++seed) {
        ExperimentConfig cfg = base_config(seed);
        cfg.fig5_k_list = ks;
        const auto rows = run_fig5(cfg);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            mean_test[i] += rows[i].test_coverage_mean / kTrainTestSeeds;
            worst_excess = std::max(worst_excess, rows[i].test_coverage_mean - rows[i].train_coverage);
        }
    }
    std::vector<double> kd(ks.begin(), ks.end());
    const double rho = spearman(kd, mean_test);
    std::string detail = fmt("max(test - train) = %.3f (slack %.2f); mean test by K [", worst_excess, kTrainTestSlack);
    for (double v : mean_test) {
        detail += fmt("%.3f ", v);
    }
    detail += fmt("] Spearman %.2f", rho);
    return {worst_excess <= kTrainTestSlack && rho > 0, detail};
}

bool oracle_inside(const Building& b, double x, double y, double z) {
    const double dx = x - b.cx, dy = y - b.cy;
    const double lx = dx * std::cos(b.omega) + dy * std::sin(b.omega);
    const double ly = -dx * std::sin(b.omega) + dy * std::cos(b.omega);
    return z >= 0 && z <= b.height && std::abs(lx) <= b.length / 2 && std::abs(ly) <= b.width / 2;
}

std::string pipeline_bytes(std::uint64_t seed) {
    ExperimentConfig c;
    c.master_seed = seed;
    c.scene.area_x = c.scene.area_y = 400;
    c.scene.n1 = c.scene.n2 = 12;
    c.k_train = 5;
    c.n_test_sets = 3;
    c.test_set_size = 5;
    c.random_draws = 5;
    c.pga = large_instance_pga(1);
    c.pga.n_m = 3;
    c.gamma_list = {0.25, 0.5};
    c.fig3_elevations_deg = {30};
    c.fig4_densities = {1.2e-4};
    c.fig4_gammas = {0.25};
    c.fig4_k = 5;
    c.fig5_k_list = {3};
    std::ostringstream os;
    const auto rep = run_experiment(c);
    write_buildings(os, rep.scene.buildings);
    write_users(os, rep.scene.users);
    write_report(os, rep);
    for (const auto& cell : rep.cells) {
        write_mask(os, cell.mask);
        write_history(os, cell.history);
    }
    write_fig3(os, run_fig3(c));
    write_fig4(os, run_fig4(c));
    write_fig5(os, run_fig5(c));
    return os.str();
}

Outcome property_suites() {
    Rng rng = make_stream(3, "acceptance-properties");
    std::string detail;
    bool ok = true;

    // Geometry against dense point sampling.
    std::size_t agree = 0;
    for (std::size_t t = 0; t < kOracleCases; ++t) {
        const Building b{0, uniform(rng, -20, 20), uniform(rng, -20, 20), uniform(rng, 10, 40), uniform(rng, 10, 40),
                         uniform(rng, 20, 80), uniform(rng, 0, 2 * kPi)};
        const Vec3 a{uniform(rng, -80, 80), uniform(rng, -80, 80), uniform(rng, 0, 100)};
        const Vec3 c{uniform(rng, -80, 80), uniform(rng, -80, 80), uniform(rng, 0, 100)};
        bool sampled = false;
        for (int s = 1; s < 4000 && !sampled; ++s) {
            const double u = s / 4000.0;
            sampled = oracle_inside(b, a.x + u * (c.x - a.x), a.y + u * (c.y - a.y), a.z + u * (c.z - a.z));
        }
        agree += sampled == segment_hits_building(a, c, b);
    }
    const double frac = static_cast<double>(agree) / kOracleCases;
    ok = ok && frac >= kOracleAgreement;
    detail += fmt("geometry oracle %.4f; ", frac);

    // Density normalisation.
    double worst_norm = 0;
    for (double lambda : {0.0, 5e-5, 1e-4, 2e-4}) {
        for (std::size_t n_r : {1u, 4u, 16u}) {
            BoundParams bp;
            bp.lambda_bl = lambda;
            bp.p_t = 1e13;
            bp.d_const = 6.0;
            worst_norm = std::max(worst_norm, std::abs(convolve_n(single_ris_power_pdf(bp), n_r).integral() - 1));
        }
    }
    ok = ok && worst_norm <= kNormTol;
    detail += fmt("max |integral - 1| %.1e; ", worst_norm);

    // Objective monotone under adding a feasible bit.
    const ExperimentConfig cfg = base_config(1);
    const Scene scene = experiment_scene(cfg);
    DomeConfig dome = cfg.dome;
    dome.k = 5;
    const auto w = build_power_matrices(fibonacci_dome(dome), scene, cfg.channel);
    const std::size_t n_b = w.n_buildings();
    std::size_t violations = 0;
    for (std::size_t t = 0; t < kMonotonePairs; ++t) {
        DeploymentMask x = random_deployment(n_b, uniform(rng, 0.0, 0.5), rng);
        const double before = objective(x, w, cfg.channel.epsilon);
        std::size_t i = uniform_index(rng, n_b);
        while (x.row_sum(i) != 0) {
            i = uniform_index(rng, n_b);
        }
        x.set(i, 1 + static_cast<int>(uniform_index(rng, 4)), true);
        violations += objective(x, w, cfg.channel.epsilon) < before;
    }
    ok = ok && violations == 0;
    detail += fmt("%zu monotonicity violations in %zu pairs; ", violations, kMonotonePairs);

    const bool same = pipeline_bytes(5) == pipeline_bytes(5);
    const bool differs = pipeline_bytes(5) != pipeline_bytes(6);
    ok = ok && same && differs;
    detail += fmt("pipeline bytes %s per seed", same ? "identical" : "DIFFER");
    return {ok, detail};
}

}  // namespace

int main() {
    report("pga-vs-exhaustive optimality", pga_vs_exhaustive);
    report("pga speed advantage", pga_speed);
    report("bound-vs-random agreement", bound_vs_random);
    report("optimized-vs-bound dominance", optimized_vs_bound);
    report("analytic-vs-monte-carlo bound", analytic_vs_mc);
    report("gamma monotonicity", gamma_monotonicity);
    report("train/test behaviour", train_test);
    report("property suites", property_suites);
    std::printf("%d failed\n", g_failures);
    return g_failures;
}
