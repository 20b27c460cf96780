#include "riscov/satellites.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace riscov {

double SatellitePosition::elevation() const {
    const double rho = std::hypot(x, y);
    return rho == 0.0 ? 0.5 * std::numbers::pi : std::atan(z / rho);
}

void DomeConfig::validate() const {
    if (!(h_s > 0.0)) {
        throw std::invalid_argument("DomeConfig: h_s must be positive");
    }
    if (!(theta_min > 0.0 && theta_min < 0.5 * std::numbers::pi)) {
        throw std::invalid_argument("DomeConfig: theta_min must lie in (0, pi/2)");
    }
    if (k < 1) {
        throw std::invalid_argument("DomeConfig: k must be >= 1");
    }
}

double DomeConfig::max_radius() const {
    return h_s / std::tan(theta_min);
}

std::vector<SatellitePosition> fibonacci_dome(const DomeConfig& cfg) {
    cfg.validate();
    const double rho_max = cfg.max_radius();
    const double turn = 2.0 * std::numbers::pi * (1.0 - 1.0 / std::numbers::phi);
    std::vector<SatellitePosition> out;
    out.reserve(cfg.k);
    for (std::size_t i = 0; i < cfg.k; ++i) {
        const double rho = rho_max * std::sqrt((static_cast<double>(i) + 0.5) / static_cast<double>(cfg.k));
        const double phi = turn * static_cast<double>(i);
        out.push_back({rho * std::cos(phi), rho * std::sin(phi), cfg.h_s});
    }
    return out;
}

std::vector<SatellitePosition> random_dome(std::size_t n, const DomeConfig& cfg, Rng& rng) {
    cfg.validate();
    if (n < 1) {
        throw std::invalid_argument("random_dome: n must be >= 1");
    }
    const double rho_max = cfg.max_radius();
    std::vector<SatellitePosition> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double rho = rho_max * std::sqrt(uniform01(rng));
        const double phi = 2.0 * std::numbers::pi * uniform01(rng);
        out.push_back({rho * std::cos(phi), rho * std::sin(phi), cfg.h_s});
    }
    return out;
}

SatellitePosition edge_position(double azimuth, const DomeConfig& cfg) {
    const double rho = cfg.max_radius();
    return {rho * std::cos(azimuth), rho * std::sin(azimuth), cfg.h_s};
}

}  // namespace riscov
