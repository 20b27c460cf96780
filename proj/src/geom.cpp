#include "riscov/geom.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <numbers>
#include <stdexcept>
#include <string>

namespace riscov {

namespace {

constexpr double kSlabTol = 1e-9;  // metres

std::ostream* g_trace = nullptr;

void check_facet_id(int j) {
    if (j < 1 || j > kFacetsPerBuilding) {
        throw std::invalid_argument("invalid facet id " + std::to_string(j));
    }
}

// Squared distance from p to the 2D segment [a, b].
double point_segment_dist2(double px, double py, double ax, double ay, double bx, double by) {
    const double dx = bx - ax;
    const double dy = by - ay;
    const double len2 = dx * dx + dy * dy;
    double t = 0.0;
    if (len2 > 0.0) {
        t = std::clamp(((px - ax) * dx + (py - ay) * dy) / len2, 0.0, 1.0);
    }
    const double ex = ax + t * dx - px;
    const double ey = ay + t * dy - py;
    return ex * ex + ey * ey;
}

}  // namespace

Facet facet(const Building& b, int j) {
    check_facet_id(j);
    const double angle = b.omega + (j - 1) * 0.5 * std::numbers::pi;
    const double half = (j % 2 == 1) ? 0.5 * b.length : 0.5 * b.width;
    const Vec3 n{std::cos(angle), std::sin(angle), 0.0};
    return {b.id, j, Vec3{b.cx + half * n.x, b.cy + half * n.y, 0.5 * b.height}, n};
}

RisSite ris_site(const Building& b, int j) {
    const Facet f = facet(b, j);
    return {b.id, j, Vec3{f.anchor.x, f.anchor.y, b.height}, f.normal};
}

void set_geometry_trace(std::ostream* out) { g_trace = out; }

bool faces(const Vec3& p, const Facet& f) {
    return (p - f.anchor).dot(f.normal) > 0.0;
}

bool segment_hits_building(const Vec3& a, const Vec3& b, const Building& building) {
    if (std::min(a.z, b.z) > building.height) {
        return false;
    }
    const double r = 0.5 * std::hypot(building.length, building.width) + kSlabTol;
    if (point_segment_dist2(building.cx, building.cy, a.x, a.y, b.x, b.y) > r * r) {
        return false;
    }

    const double c = std::cos(building.omega);
    const double s = std::sin(building.omega);
    const double ax = a.x - building.cx;
    const double ay = a.y - building.cy;
    const double bx = b.x - building.cx;
    const double by = b.y - building.cy;
    const double o[3] = {c * ax + s * ay, -s * ax + c * ay, a.z};
    const double e[3] = {c * bx + s * by, -s * bx + c * by, b.z};
    const double lo[3] = {-0.5 * building.length, -0.5 * building.width, 0.0};
    const double hi[3] = {0.5 * building.length, 0.5 * building.width, building.height};

    double t_enter = -std::numeric_limits<double>::infinity();
    double t_exit = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k) {
        const double d = e[k] - o[k];
        if (d == 0.0) {
            if (o[k] < lo[k] || o[k] > hi[k]) {
                return false;
            }
            continue;
        }
        double t1 = (lo[k] - o[k]) / d;
        double t2 = (hi[k] - o[k]) / d;
        if (t1 > t2) {
            std::swap(t1, t2);
        }
        t_enter = std::max(t_enter, t1);
        t_exit = std::min(t_exit, t2);
        if (t_enter > t_exit) {
            return false;
        }
    }
    // Open segment: contact exactly at an endpoint is not a hit.
    const double tol_t = kSlabTol / (b - a).norm();
    return t_enter < 1.0 - tol_t && t_exit > tol_t;
}

bool segment_blocked(const Vec3& a, const Vec3& b, std::span<const Building> buildings,
                     std::optional<std::size_t> exclude) {
    for (const auto& building : buildings) {
        if (exclude && building.id == *exclude) {
            continue;
        }
        if (segment_hits_building(a, b, building)) {
            if (g_trace) {
                *g_trace << "blocked (" << a.x << ',' << a.y << ',' << a.z << ") -> (" << b.x << ','
                         << b.y << ',' << b.z << ") by building " << building.id << '\n';
            }
            return true;
        }
    }
    return false;
}

}  // namespace riscov
