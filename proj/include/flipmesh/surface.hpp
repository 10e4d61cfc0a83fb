#ifndef FLIPMESH_SURFACE_HPP
#define FLIPMESH_SURFACE_HPP

#include "error.hpp"
#include "geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace flipmesh {

enum class SurfaceKind
{
    sphere,
    torus,
};

/// Analytic closed surface with closed-form reach: a sphere of radius R
/// centered at the origin, or a torus around the z-axis with major radius R
/// and minor radius r (R > 2r).
class SurfaceModel
{
public:
    static SurfaceModel sphere(double radius)
    {
        if(!(radius > 0) || !std::isfinite(radius))
            throw InvalidSurface("sphere radius must be positive and finite");
        return SurfaceModel(SurfaceKind::sphere, radius, 0);
    }

    static SurfaceModel torus(double major, double minor)
    {
        if(!(minor > 0) || !std::isfinite(major) || !(major > 2 * minor))
            throw InvalidSurface("torus requires R > 2r > 0");
        return SurfaceModel(SurfaceKind::torus, major, minor);
    }

    SurfaceKind kind() const { return m_kind; }
    double major_radius() const { return m_major; }
    double minor_radius() const { return m_minor; }

    /// Distance from the surface to its medial axis. For the torus the medial
    /// axis is the core circle (distance r) plus the z-axis (distance R - r).
    double reach() const
    {
        return m_kind == SurfaceKind::sphere ? m_major : std::min(m_minor, m_major - m_minor);
    }

    /// Closest surface point; throws on the medial axis where it is not unique.
    Point3 project(Point3 x) const
    {
        if(m_kind == SurfaceKind::sphere)
        {
            const double len = norm(x.as_vector());
            if(!(len > 0))
                throw Error("projection undefined at the sphere center");
            return Point3{} + x.as_vector() * (m_major / len);
        }
        const Point3 c = core_point(x);
        const Vec3 d = x - c;
        const double len = norm(d);
        if(!(len > 0))
            throw Error("projection undefined on the torus core circle");
        return c + d * (m_minor / len);
    }

    /// Positive outside.
    double signed_distance(Point3 x) const
    {
        if(m_kind == SurfaceKind::sphere)
            return norm(x.as_vector()) - m_major;
        return distance(x, core_point(x)) - m_minor;
    }

    /// Outward unit normal at the projection of x.
    UnitVector3 normal(Point3 x) const
    {
        if(m_kind == SurfaceKind::sphere)
            return UnitVector3::normalize(x.as_vector());
        return UnitVector3::normalize(x - core_point(x));
    }

    /// Torus parametrization; u runs around the z-axis, v around the core.
    Point3 torus_point(double u, double v) const
    {
        const double w = m_major + m_minor * std::cos(v);
        return {w * std::cos(u), w * std::sin(u), m_minor * std::sin(v)};
    }

    std::string describe() const
    {
        if(m_kind == SurfaceKind::sphere)
            return "sphere:" + format_number(m_major);
        return "torus:" + format_number(m_major) + "," + format_number(m_minor);
    }

private:
    SurfaceModel(SurfaceKind k, double major, double minor) : m_kind(k), m_major(major), m_minor(minor) {}

    Point3 core_point(Point3 x) const
    {
        const double rho = std::hypot(x.x, x.y);
        if(!(rho > 0))
            throw Error("point on the torus axis has no unique closest point");
        return {x.x * m_major / rho, x.y * m_major / rho, 0};
    }

    static std::string format_number(double v)
    {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

    SurfaceKind m_kind;
    double m_major;
    double m_minor;
};

inline double reach(const SurfaceModel& s) { return s.reach(); }

} // namespace flipmesh

#endif
