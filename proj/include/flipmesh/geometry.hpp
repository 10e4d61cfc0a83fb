#ifndef FLIPMESH_GEOMETRY_HPP
#define FLIPMESH_GEOMETRY_HPP

#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace flipmesh {

struct Vec3
{
    double x = 0, y = 0, z = 0;

    friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend constexpr Vec3 operator-(Vec3 a) { return {-a.x, -a.y, -a.z}; }
    friend constexpr Vec3 operator*(Vec3 a, double s) { return {a.x * s, a.y * s, a.z * s}; }
    friend constexpr Vec3 operator*(double s, Vec3 a) { return a * s; }
    friend constexpr Vec3 operator/(Vec3 a, double s) { return {a.x / s, a.y / s, a.z / s}; }
    friend constexpr bool operator==(Vec3, Vec3) = default;
};

constexpr double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(Vec3 a, Vec3 b)
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

constexpr double squared_norm(Vec3 v) { return dot(v, v); }
inline double norm(Vec3 v) { return std::sqrt(dot(v, v)); }

/// Position in surface length units.
struct Point3
{
    double x = 0, y = 0, z = 0;

    friend constexpr Vec3 operator-(Point3 a, Point3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend constexpr Point3 operator+(Point3 p, Vec3 v) { return {p.x + v.x, p.y + v.y, p.z + v.z}; }
    friend constexpr Point3 operator-(Point3 p, Vec3 v) { return {p.x - v.x, p.y - v.y, p.z - v.z}; }
    friend constexpr bool operator==(Point3, Point3) = default;

    constexpr Vec3 as_vector() const { return {x, y, z}; }
    bool is_finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

inline double distance(Point3 a, Point3 b) { return norm(a - b); }
constexpr double squared_distance(Point3 a, Point3 b) { return squared_norm(a - b); }

inline Point3 midpoint(Point3 a, Point3 b)
{
    return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y), 0.5 * (a.z + b.z)};
}

/// Direction with Euclidean norm 1 (to within 1e-12). Only constructible by
/// normalizing, so the invariant cannot be bypassed.
class UnitVector3
{
public:
    static constexpr double kNormTolerance = 1e-12;

    /// Throws Error on a zero or non-finite vector.
    static UnitVector3 normalize(Vec3 v)
    {
        const double len = norm(v);
        if(!(len > 0) || !std::isfinite(len))
            throw Error("cannot normalize a zero or non-finite vector");
        UnitVector3 u;
        u.m_v = v / len;
        return u;
    }

    constexpr const Vec3& vec() const { return m_v; }
    constexpr double x() const { return m_v.x; }
    constexpr double y() const { return m_v.y; }
    constexpr double z() const { return m_v.z; }
    UnitVector3 operator-() const
    {
        UnitVector3 u;
        u.m_v = -m_v;
        return u;
    }
    constexpr operator Vec3() const { return m_v; }

private:
    Vec3 m_v{0, 0, 1};
};

/// Angle in [0, pi] between two directions, via atan2 of |a x b| and a.b.
inline double angle_between(Vec3 a, Vec3 b)
{
    return std::atan2(norm(cross(a, b)), dot(a, b));
}

struct Ball
{
    Point3 center;
    double radius = 0;
};

struct Plane
{
    Point3 point;
    UnitVector3 normal;

    double signed_distance(Point3 x) const { return dot(x - point, normal.vec()); }
};

/// Vertices in order; orientation follows the right-hand rule on (b - a, c - a).
struct Triangle
{
    Point3 a, b, c;
};

/// Triangles whose area is below this fraction of the squared longest edge
/// are treated as degenerate.
inline constexpr double kDegeneracyThreshold = 1e-12;

inline bool is_degenerate(const Triangle& t)
{
    const Vec3 ab = t.b - t.a;
    const Vec3 ac = t.c - t.a;
    const Vec3 bc = t.c - t.b;
    const double longest2 = std::max({squared_norm(ab), squared_norm(ac), squared_norm(bc)});
    const double area = 0.5 * norm(cross(ab, ac));
    return !(area >= kDegeneracyThreshold * longest2) || longest2 == 0;
}

inline void require_nondegenerate(const Triangle& t)
{
    if(is_degenerate(t))
        throw DegenerateTriangle();
}

/// Circumcenter and circumradius of a triangle in 3-space. The center lies in
/// the plane of the triangle.
inline std::pair<Point3, double> circumcenter_radius(const Triangle& t)
{
    require_nondegenerate(t);
    const Vec3 ab = t.b - t.a;
    const Vec3 ac = t.c - t.a;
    const Vec3 n = cross(ab, ac);
    const Vec3 offset =
        (cross(n, ab) * squared_norm(ac) + cross(ac, n) * squared_norm(ab)) / (2.0 * squared_norm(n));
    return {t.a + offset, norm(offset)};
}

inline double circumradius(const Triangle& t) { return circumcenter_radius(t).second; }

inline Ball diametric_ball(const Triangle& t)
{
    const auto [c, r] = circumcenter_radius(t);
    return {c, r};
}

inline UnitVector3 triangle_normal(const Triangle& t)
{
    require_nondegenerate(t);
    return UnitVector3::normalize(cross(t.b - t.a, t.c - t.a));
}

/// Circumscribing ball of t centered at circumcenter + beta * n_t.
inline Ball beta_ball(const Triangle& t, double beta)
{
    const auto [c, r] = circumcenter_radius(t);
    const UnitVector3 n = triangle_normal(t);
    return {c + n.vec() * beta, std::hypot(r, beta)};
}

inline Ball shrunk_ball(const Ball& b, double alpha)
{
    if(alpha > b.radius)
        throw NegativeRadius();
    return {b.center, b.radius - alpha};
}

/// Shrink amount whose shrunk diametric ball fits inside the lens of the
/// beta- and (-beta)-balls: rho + beta - sqrt(rho^2 + beta^2).
inline double lens_shrink_amount(double rho, double beta)
{
    return rho + beta - std::hypot(rho, beta);
}

/// ||c - x||^2 - r^2: negative inside, zero on the boundary.
constexpr double power_distance(const Ball& b, Point3 x)
{
    return squared_distance(b.center, x) - b.radius * b.radius;
}

/// Plane of equal power distance to both balls.
inline Plane bisector_plane(const Ball& b1, const Ball& b2)
{
    const Vec3 d = b2.center - b1.center;
    const double d2 = squared_norm(d);
    if(!(d2 > 0))
        throw CoincidentCenters();
    // pow1(x) - pow2(x) = 2 x.d + |c1|^2 - |c2|^2 - r1^2 + r2^2 = 0, parametrized
    // as x = c1 + s d.
    const double s = 0.5 * (1.0 + (b1.radius * b1.radius - b2.radius * b2.radius) / d2);
    return {b1.center + d * s, UnitVector3::normalize(d)};
}

/// Angle in [0, pi] between the oriented normals of t1 and t2.
inline double dihedral_angle(const Triangle& t1, const Triangle& t2)
{
    return angle_between(triangle_normal(t1).vec(), triangle_normal(t2).vec());
}

/// Circumradius over shortest edge; 1/sqrt(3) for an equilateral triangle.
inline double aspect_ratio(const Triangle& t)
{
    const double rho = circumradius(t);
    const double shortest =
        std::sqrt(std::min({squared_distance(t.a, t.b), squared_distance(t.b, t.c),
                            squared_distance(t.c, t.a)}));
    return rho / shortest;
}

} // namespace flipmesh

#endif
