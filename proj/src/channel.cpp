#include "riscov/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace riscov {

void ChannelParams::validate() const {
    const bool positive = p_t > 0.0 && g_t > 0.0 && g_r > 0.0 && g > 0.0 && m > 0.0 && n > 0.0 &&
                          d_x > 0.0 && d_y > 0.0 && f_c > 0.0 && a > 0.0 && epsilon > 0.0 && r_max > 0.0;
    if (!positive) {
        throw std::invalid_argument("ChannelParams: all parameters must be positive");
    }
    if (a > 1.0) {
        throw std::invalid_argument("ChannelParams: reflection coefficient must be <= 1");
    }
}

double cascade_constant(const ChannelParams& p) {
    p.validate();
    const double c2 = kSpeedOfLight * kSpeedOfLight;
    const double pi3 = std::numbers::pi * std::numbers::pi * std::numbers::pi;
    return p.g_t * p.g_r * p.g * (p.m * p.m) * (p.n * p.n) * p.d_x * p.d_y * c2 * (p.a * p.a) /
           (64.0 * p.f_c * p.f_c * pi3);
}

double link_power(const ChannelParams& p, double d_ur, double d_rs) {
    if (!(d_ur > 0.0) || !(d_rs > 0.0)) {
        throw std::invalid_argument("link_power: distances must be positive");
    }
    const double prod = d_ur * d_rs;
    return p.p_t * cascade_constant(p) / (prod * prod);
}

Vec3 world_position(const SatellitePosition& s, const Scene& scene) {
    return {scene.center_x() + s.x, scene.center_y() + s.y, s.z};
}

LosPartition classify_users(const SatellitePosition& s, const Scene& scene) {
    const Vec3 sat = world_position(s, scene);
    std::vector<char> los(scene.users.size(), 0);
    parallel_for(scene.users.size(), [&](std::size_t u) {
        const auto& user = scene.users[u];
        los[u] = has_los(Vec3{user.x, user.y, user.z}, sat, scene.buildings) ? 1 : 0;
    });
    LosPartition out;
    for (std::size_t u = 0; u < los.size(); ++u) {
        (los[u] ? out.los : out.nlos).push_back(u);
    }
    return out;
}

std::size_t PowerMatrixSet::total_nlos() const {
    std::size_t total = 0;
    for (const auto& b : blocks_) {
        total += b.nlos_users.size();
    }
    return total;
}

double PowerMatrixSet::entry(std::size_t k, std::size_t l, std::size_t i, int j) const {
    if (i >= n_buildings_ || j < 1 || j > kFacetsPerBuilding) {
        throw std::out_of_range("PowerMatrixSet::entry: index out of range");
    }
    const auto& row = blocks_.at(k).rows.at(l);
    const std::uint32_t site = site_index(i, j);
    const auto it = std::lower_bound(row.begin(), row.end(), site,
                                     [](const PowerEntry& e, std::uint32_t s) { return e.site < s; });
    return (it != row.end() && it->site == site) ? it->power : 0.0;
}

std::vector<double> PowerMatrixSet::dense(std::size_t k, std::size_t l) const {
    std::vector<double> out(n_buildings_ * kFacetsPerBuilding, 0.0);
    for (const auto& e : blocks_.at(k).rows.at(l)) {
        out[e.site] = e.power;
    }
    return out;
}

void PowerMatrixSet::scale(double alpha) {
    for (auto& b : blocks_) {
        for (auto& row : b.rows) {
            for (auto& e : row) {
                e.power *= alpha;
            }
        }
    }
}

PowerMatrixSet build_power_matrices(std::span<const SatellitePosition> sats, const Scene& scene,
                                    const ChannelParams& p) {
    p.validate();
    const std::size_t n_b = scene.buildings.size();
    const double budget = p.p_t * cascade_constant(p);
    const double r2_max = p.r_max * p.r_max;

    std::vector<Facet> facets;
    std::vector<RisSite> sites;
    facets.reserve(n_b * kFacetsPerBuilding);
    sites.reserve(n_b * kFacetsPerBuilding);
    for (const auto& b : scene.buildings) {
        for (int j = 1; j <= kFacetsPerBuilding; ++j) {
            facets.push_back(facet(b, j));
            sites.push_back(ris_site(b, j));
        }
    }

    PowerMatrixSet out(n_b);
    for (const auto& s : sats) {
        const Vec3 sat = world_position(s, scene);
        const LosPartition part = classify_users(s, scene);

        // Conditions (b) and (d) depend only on the site; d_rs is cached alongside.
        std::vector<std::uint32_t> lit_sites;
        std::vector<double> lit_d_rs;
        for (std::uint32_t idx = 0; idx < sites.size(); ++idx) {
            const std::size_t host = sites[idx].building_id;
            if (faces(sat, facets[idx]) && has_los(sites[idx].position, sat, scene.buildings, host)) {
                lit_sites.push_back(idx);
                lit_d_rs.push_back((sat - sites[idx].position).norm());
            }
        }

        SatelliteBlock block;
        block.nlos_users = part.nlos;
        block.rows.resize(part.nlos.size());
        parallel_for(part.nlos.size(), [&](std::size_t l) {
            const auto& user = scene.users[part.nlos[l]];
            const Vec3 up{user.x, user.y, user.z};
            auto& row = block.rows[l];
            for (std::size_t t = 0; t < lit_sites.size(); ++t) {
                const std::uint32_t idx = lit_sites[t];
                const RisSite& site = sites[idx];
                const Vec3 d = site.position - up;
                if (d.x * d.x + d.y * d.y > r2_max) {
                    continue;
                }
                if (!faces(up, facets[idx])) {
                    continue;
                }
                if (!has_los(up, site.position, scene.buildings, site.building_id)) {
                    continue;
                }
                const double prod = d.norm() * lit_d_rs[t];
                row.push_back({idx, budget / (prod * prod)});
            }
        });
        out.push_block(std::move(block));
    }
    return out;
}

}  // namespace riscov
