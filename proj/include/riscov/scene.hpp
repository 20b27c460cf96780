#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "riscov/random.hpp"

namespace riscov {

/// Statistical description of the urban area: a rectangle [0, area_x] x [0, area_y]
/// populated by a Poisson field of oriented box buildings and sampled by an
/// n1 x n2 grid of ground users.
struct SceneConfig {
    double area_x = 1000.0;
    double area_y = 1000.0;
    double lambda_b_prime = 1.2e-4;  // buildings per m^2, before overlap removal
    double l_min = 30.0, l_max = 40.0;
    double w_min = 30.0, w_max = 40.0;
    double h_min = 80.0, h_max = 120.0;
    int n1 = 30;
    int n2 = 30;
    std::uint64_t seed = 1;

    /// Throws std::invalid_argument on a violated invariant.
    void validate() const;
    double area() const { return area_x * area_y; }
    double mean_length() const { return 0.5 * (l_min + l_max); }
    double mean_width() const { return 0.5 * (w_min + w_max); }
};

struct Building {
    std::size_t id = 0;
    double cx = 0.0, cy = 0.0;
    double length = 0.0;  // along the local x axis (rotated by omega)
    double width = 0.0;
    double height = 0.0;
    double omega = 0.0;   // radians, [0, 2*pi)
};

struct UserPosition {
    std::size_t id = 0;
    double x = 0.0, y = 0.0;
    double z = 0.0;
};

struct Scene {
    double area_x = 0.0;
    double area_y = 0.0;
    std::vector<Building> buildings;
    std::vector<UserPosition> users;
    std::size_t indoor_removed = 0;

    double center_x() const { return 0.5 * area_x; }
    double center_y() const { return 0.5 * area_y; }
};

struct Point2 {
    double x = 0.0, y = 0.0;
};

/// Footprint corners in counter-clockwise order.
std::array<Point2, 4> footprint_corners(const Building& b);

/// Strict overlap of two footprints via the separating axis theorem.
/// Footprints that only share an edge or a corner do not overlap.
bool footprints_overlap(const Building& a, const Building& b);

/// Boundary counts as inside.
bool point_in_footprint(double x, double y, const Building& b);

std::vector<Building> generate_buildings(const SceneConfig& cfg, Rng& rng);

/// Greedy scan in generation order; kept buildings are re-indexed 0..N_B-1.
std::vector<Building> remove_overlaps(const std::vector<Building>& buildings);

std::vector<UserPosition> generate_users(const SceneConfig& cfg,
                                         const std::vector<Building>& buildings);

/// Full pipeline using a stream derived from cfg.seed.
Scene generate_scene(const SceneConfig& cfg);

}  // namespace riscov
