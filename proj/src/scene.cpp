#include "riscov/scene.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace riscov {

namespace {

constexpr double kOverlapTol = 1e-9;

void require(bool ok, const char* what) {
    if (!ok) {
        throw std::invalid_argument(std::string("SceneConfig: ") + what);
    }
}

// Projects the four corners onto axis (ax, ay) and returns [min, max].
std::pair<double, double> project(const std::array<Point2, 4>& poly, double ax, double ay) {
    double lo = poly[0].x * ax + poly[0].y * ay;
    double hi = lo;
    for (std::size_t i = 1; i < poly.size(); ++i) {
        const double v = poly[i].x * ax + poly[i].y * ay;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {lo, hi};
}

}  // namespace

void SceneConfig::validate() const {
    require(area_x > 0.0 && area_y > 0.0, "area must be positive");
    require(lambda_b_prime >= 0.0, "building density must be non-negative");
    require(l_min > 0.0 && w_min > 0.0 && h_min > 0.0, "dimensions must be positive");
    require(l_min <= l_max, "l_min > l_max");
    require(w_min <= w_max, "w_min > w_max");
    require(h_min <= h_max, "h_min > h_max");
    require(n1 >= 1 && n2 >= 1, "user grid must be at least 1x1");
}

std::array<Point2, 4> footprint_corners(const Building& b) {
    const double c = std::cos(b.omega);
    const double s = std::sin(b.omega);
    const double hl = 0.5 * b.length;
    const double hw = 0.5 * b.width;
    const std::array<Point2, 4> local{{{hl, hw}, {-hl, hw}, {-hl, -hw}, {hl, -hw}}};
    std::array<Point2, 4> out{};
    for (std::size_t i = 0; i < 4; ++i) {
        out[i] = {b.cx + c * local[i].x - s * local[i].y, b.cy + s * local[i].x + c * local[i].y};
    }
    return out;
}

bool footprints_overlap(const Building& a, const Building& b) {
    const auto pa = footprint_corners(a);
    const auto pb = footprint_corners(b);
    for (const Building* owner : {&a, &b}) {
        const double c = std::cos(owner->omega);
        const double s = std::sin(owner->omega);
        for (const auto& [ax, ay] : {std::pair{c, s}, std::pair{-s, c}}) {
            const auto [alo, ahi] = project(pa, ax, ay);
            const auto [blo, bhi] = project(pb, ax, ay);
            if (std::min(ahi, bhi) - std::max(alo, blo) <= kOverlapTol) {
                return false;
            }
        }
    }
    return true;
}

bool point_in_footprint(double x, double y, const Building& b) {
    const double dx = x - b.cx;
    const double dy = y - b.cy;
    const double c = std::cos(b.omega);
    const double s = std::sin(b.omega);
    const double lx = c * dx + s * dy;
    const double ly = -s * dx + c * dy;
    return std::abs(lx) <= 0.5 * b.length && std::abs(ly) <= 0.5 * b.width;
}

std::vector<Building> generate_buildings(const SceneConfig& cfg, Rng& rng) {
    cfg.validate();
    const double mean = cfg.lambda_b_prime * cfg.area();
    if (mean <= 0.0) {
        return {};
    }
    std::poisson_distribution<long> count_dist(mean);
    const long count = count_dist(rng);

    std::vector<Building> out;
    out.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) {
        Building b;
        b.id = static_cast<std::size_t>(i);
        b.cx = uniform(rng, 0.0, cfg.area_x);
        b.cy = uniform(rng, 0.0, cfg.area_y);
        b.length = uniform(rng, cfg.l_min, cfg.l_max);
        b.width = uniform(rng, cfg.w_min, cfg.w_max);
        b.height = uniform(rng, cfg.h_min, cfg.h_max);
        b.omega = uniform(rng, 0.0, 2.0 * std::numbers::pi);
        out.push_back(b);
    }
    return out;
}

std::vector<Building> remove_overlaps(const std::vector<Building>& buildings) {
    std::vector<Building> kept;
    kept.reserve(buildings.size());
    for (const auto& cand : buildings) {
        bool clash = false;
        for (const auto& k : kept) {
            // Bounding circles first; most pairs are far apart.
            const double reach = 0.5 * (std::hypot(cand.length, cand.width) + std::hypot(k.length, k.width));
            if (std::hypot(cand.cx - k.cx, cand.cy - k.cy) >= reach) {
                continue;
            }
            if (footprints_overlap(cand, k)) {
                clash = true;
                break;
            }
        }
        if (!clash) {
            kept.push_back(cand);
        }
    }
    for (std::size_t i = 0; i < kept.size(); ++i) {
        kept[i].id = i;
    }
    return kept;
}

std::vector<UserPosition> generate_users(const SceneConfig& cfg,
                                         const std::vector<Building>& buildings) {
    cfg.validate();
    std::vector<UserPosition> users;
    users.reserve(static_cast<std::size_t>(cfg.n1) * static_cast<std::size_t>(cfg.n2));
    for (int i = 0; i < cfg.n1; ++i) {
        const double x = (i + 0.5) / cfg.n1 * cfg.area_x;
        for (int j = 0; j < cfg.n2; ++j) {
            const double y = (j + 0.5) / cfg.n2 * cfg.area_y;
            bool indoor = false;
            for (const auto& b : buildings) {
                if (point_in_footprint(x, y, b)) {
                    indoor = true;
                    break;
                }
            }
            if (!indoor) {
                users.push_back({users.size(), x, y, 0.0});
            }
        }
    }
    return users;
}

Scene generate_scene(const SceneConfig& cfg) {
    cfg.validate();
    Rng rng = make_stream(cfg.seed, "scene");
    Scene scene;
    scene.area_x = cfg.area_x;
    scene.area_y = cfg.area_y;
    scene.buildings = remove_overlaps(generate_buildings(cfg, rng));
    scene.users = generate_users(cfg, scene.buildings);
    scene.indoor_removed = static_cast<std::size_t>(cfg.n1) * static_cast<std::size_t>(cfg.n2) - scene.users.size();
    return scene;
}

}  // namespace riscov
