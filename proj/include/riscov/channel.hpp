#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "riscov/geom.hpp"
#include "riscov/satellites.hpp"
#include "riscov/scene.hpp"

namespace riscov {

constexpr double kSpeedOfLight = 299792458.0;  // m/s

/// Link budget for the satellite -> RIS -> user cascade.
struct ChannelParams {
    double p_t = 1.0;      // W
    double g_t = 1.0;      // linear
    double g_r = 1.0;
    double g = 1.0;        // RIS unit-cell gain
    double m = 100.0;      // unit-cell rows
    double n = 100.0;      // unit-cell columns
    double d_x = 0.075;    // m
    double d_y = 0.075;
    double f_c = 2e9;      // Hz
    double a = 1.0;        // reflection coefficient, (0, 1]
    double epsilon = 1e-3; // coverage threshold, W
    double r_max = 500.0;  // horizontal RIS influence radius, m

    void validate() const;
};

/// D = Gt Gr G M^2 N^2 dx dy c^2 A^2 / (64 fc^2 pi^3).
double cascade_constant(const ChannelParams& p);

/// P_t * D / (d_ur * d_rs)^2.
double link_power(const ChannelParams& p, double d_ur, double d_rs);

/// Satellite position in scene coordinates.
Vec3 world_position(const SatellitePosition& s, const Scene& scene);

struct LosPartition {
    std::vector<std::size_t> los;   // user indices
    std::vector<std::size_t> nlos;
};

LosPartition classify_users(const SatellitePosition& s, const Scene& scene);

/// Row-major (building, facet) index into the flattened N_B x 4 layout.
constexpr std::uint32_t site_index(std::size_t building, int facet_id) {
    return static_cast<std::uint32_t>(building * kFacetsPerBuilding + static_cast<std::size_t>(facet_id - 1));
}

struct PowerEntry {
    std::uint32_t site = 0;  // site_index(i, j)
    double power = 0.0;      // W, strictly positive
};

/// NLoS users of one satellite position with the nonzero entries of each W_l^k.
struct SatelliteBlock {
    std::vector<std::size_t> nlos_users;
    std::vector<std::vector<PowerEntry>> rows;  // parallel to nlos_users, sorted by site
};

/// The W_l^k matrices for a set of satellite positions. Matrices are stored
/// sparsely; entry() and dense() reconstruct the N_B x 4 view.
class PowerMatrixSet {
public:
    PowerMatrixSet() = default;
    explicit PowerMatrixSet(std::size_t n_buildings) : n_buildings_(n_buildings) {}

    std::size_t n_buildings() const { return n_buildings_; }
    std::size_t n_satellites() const { return blocks_.size(); }
    std::size_t total_nlos() const;

    const SatelliteBlock& block(std::size_t k) const { return blocks_.at(k); }
    const std::vector<SatelliteBlock>& blocks() const { return blocks_; }
    void push_block(SatelliteBlock b) { blocks_.push_back(std::move(b)); }

    /// W_l^k(i, j) in watts; l indexes the NLoS list of satellite k.
    double entry(std::size_t k, std::size_t l, std::size_t i, int j) const;

    /// Row-major N_B x 4 matrix.
    std::vector<double> dense(std::size_t k, std::size_t l) const;

    /// Multiplies every entry by alpha.
    void scale(double alpha);

private:
    std::size_t n_buildings_ = 0;
    std::vector<SatelliteBlock> blocks_;
};

PowerMatrixSet build_power_matrices(std::span<const SatellitePosition> sats, const Scene& scene,
                                    const ChannelParams& p);

}  // namespace riscov
