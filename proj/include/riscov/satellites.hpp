#pragma once

#include <cstddef>
#include <vector>

#include "riscov/random.hpp"

namespace riscov {

/// Satellite position relative to the ground-area centre (x, y) at altitude z.
struct SatellitePosition {
    double x = 0.0, y = 0.0, z = 0.0;

    /// Elevation seen from the area centre, radians; pi/2 at the zenith.
    double elevation() const;
};

/// The admissible region is the disk of radius h_s * cot(theta_min) at altitude h_s.
struct DomeConfig {
    double h_s = 600e3;      // metres
    double theta_min = 0.5235987755982988;  // radians (30 deg)
    std::size_t k = 30;

    void validate() const;
    double max_radius() const;
};

/// Sunflower lattice: rho_i = rho_max * sqrt((i + 0.5) / K), phi_i = 2*pi*i*(1 - 1/golden).
std::vector<SatellitePosition> fibonacci_dome(const DomeConfig& cfg);

/// Area-uniform draws on the same disk.
std::vector<SatellitePosition> random_dome(std::size_t n, const DomeConfig& cfg, Rng& rng);

/// Point on the dome rim (elevation exactly theta_min) at the given azimuth.
SatellitePosition edge_position(double azimuth, const DomeConfig& cfg);

}  // namespace riscov
