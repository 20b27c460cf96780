#pragma once

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>

#include "riscov/scene.hpp"

namespace riscov {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }
    double norm_xy() const { return std::hypot(x, y); }
    bool operator==(const Vec3&) const = default;
};

/// Facet ids are 1..4; facet j faces the local direction omega + (j - 1) * pi / 2,
/// so facet 1 is the +length side and facet 2 the +width side.
struct Facet {
    std::size_t building_id = 0;
    int facet_id = 1;
    Vec3 anchor;  // centre of the facet plane
    Vec3 normal;  // outward, horizontal, unit length
};

struct RisSite {
    std::size_t building_id = 0;
    int facet_id = 1;
    Vec3 position;  // midpoint of the facet's top edge
    Vec3 normal;
};

constexpr int kFacetsPerBuilding = 4;

/// Throws std::invalid_argument when j is outside 1..4.
Facet facet(const Building& b, int j);
RisSite ris_site(const Building& b, int j);

/// Strict half-space test: a point in the facet plane does not face it.
bool faces(const Vec3& p, const Facet& f);

/// True iff the open segment (a, b) meets the closed box of a building whose id
/// differs from `exclude`.
bool segment_blocked(const Vec3& a, const Vec3& b, std::span<const Building> buildings,
                     std::optional<std::size_t> exclude = std::nullopt);

/// Single-building slab test in the building's local frame.
bool segment_hits_building(const Vec3& a, const Vec3& b, const Building& building);

/// Debug aid: when set, every blocking hit is logged to `out`. Not thread-safe;
/// pass nullptr to disable.
void set_geometry_trace(std::ostream* out);

inline bool has_los(const Vec3& a, const Vec3& b, std::span<const Building> buildings,
                    std::optional<std::size_t> exclude = std::nullopt) {
    return !segment_blocked(a, b, buildings, exclude);
}

}  // namespace riscov
