#include "fixtures.hpp"

#include <gtest/gtest.h>

using namespace flipmesh;
using fixtures::Gen;

namespace {

/// Circumcenter from the 3x3 system: equidistance from a,b,c plus lying in
/// their plane, solved by Cramer's rule.
Point3 cramer_circumcenter(const Triangle& t)
{
    const Vec3 n = cross(t.b - t.a, t.c - t.a);
    const Vec3 r0 = (t.b - t.a) * 2.0, r1 = (t.c - t.a) * 2.0, r2 = n;
    const double rhs0 = squared_norm(t.b.as_vector()) - squared_norm(t.a.as_vector());
    const double rhs1 = squared_norm(t.c.as_vector()) - squared_norm(t.a.as_vector());
    const double rhs2 = dot(n, t.a.as_vector());
    auto det = [](Vec3 a, Vec3 b, Vec3 c) { return dot(a, cross(b, c)); };
    const double d = det(r0, r1, r2);
    const Vec3 c0{r0.x, r1.x, r2.x}, c1{r0.y, r1.y, r2.y}, c2{r0.z, r1.z, r2.z};
    const Vec3 rhs{rhs0, rhs1, rhs2};
    return {det(rhs, c1, c2) / d, det(c0, rhs, c2) / d, det(c0, c1, rhs) / d};
}

constexpr double kTight = 1e-12;

} // namespace

TEST(Circumcenter, RightTriangle)
{
    const auto [c, r] = circumcenter_radius({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}});
    EXPECT_NEAR(c.x, 0.5, kTight);
    EXPECT_NEAR(c.y, 0.5, kTight);
    EXPECT_NEAR(c.z, 0.0, kTight);
    EXPECT_NEAR(r, std::sqrt(2.0) / 2, kTight);
}

TEST(Circumcenter, EquilateralRadius)
{
    const Triangle t{{0, 0, 0}, {1, 0, 0}, {0.5, std::sqrt(3.0) / 2, 0}};
    EXPECT_NEAR(circumradius(t), 1 / std::sqrt(3.0), kTight);
}

TEST(Circumcenter, CollinearIsDegenerate)
{
    EXPECT_THROW(circumcenter_radius({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}), DegenerateTriangle);
    EXPECT_THROW(triangle_normal({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}), DegenerateTriangle);
}

TEST(Circumcenter, QuadExampleCenters)
{
    const Point3 p{0, 0, 0}, q{1, 0, 0}, r{0.5, 0.8, 0}, s{0.5, -0.1, 0};
    const auto [c1, r1] = circumcenter_radius({p, q, r});
    EXPECT_NEAR(c1.x, 0.5, kTight);
    EXPECT_NEAR(c1.y, 0.24375, kTight);
    EXPECT_NEAR(r1, std::hypot(0.5, 0.24375), kTight);
    EXPECT_NEAR(r1, 0.55625, kTight);
    const auto [c2, r2] = circumcenter_radius({p, q, s});
    EXPECT_NEAR(c2.x, 0.5, kTight);
    EXPECT_NEAR(c2.y, 1.2, kTight);
    EXPECT_NEAR(r2, 1.3, kTight);
}

TEST(CircumcenterProperty, AgreesWithCramerAndIsEquidistantInPlane)
{
    Gen g(11);
    for(int i = 0; i < 2000; ++i)
    {
        const Triangle t = g.triangle();
        const auto [c, r] = circumcenter_radius(t);
        const Point3 o = cramer_circumcenter(t);
        const double scale = std::max({norm(t.b - t.a), norm(t.c - t.a), 1.0});
        EXPECT_NEAR(distance(c, o), 0.0, 1e-9 * scale);
        EXPECT_NEAR(distance(c, t.a), r, 1e-9 * scale);
        EXPECT_NEAR(distance(c, t.b), r, 1e-9 * scale);
        EXPECT_NEAR(distance(c, t.c), r, 1e-9 * scale);
        EXPECT_NEAR(dot(c - t.a, triangle_normal(t).vec()), 0.0, 1e-9 * scale);
    }
}

TEST(DiametricBall, CornersOnBoundary)
{
    Gen g(12);
    for(int i = 0; i < 500; ++i)
    {
        const Triangle t = g.triangle();
        const Ball b = diametric_ball(t);
        for(const Point3& x : {t.a, t.b, t.c})
            EXPECT_NEAR(power_distance(b, x), 0.0, 1e-9 * b.radius * b.radius);
    }
    const Ball b = diametric_ball({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}});
    EXPECT_NEAR(b.center.x, 0.5, kTight);
    EXPECT_NEAR(b.radius, std::sqrt(0.5), kTight);
}

TEST(BetaBall, RadiusAndCenter)
{
    // Right triangle scaled so rho = 3.
    const double leg = 3 * std::sqrt(2.0);
    const Triangle t{{0, 0, 0}, {leg, 0, 0}, {0, leg, 0}};
    ASSERT_NEAR(circumradius(t), 3.0, kTight);
    const Ball up = beta_ball(t, 4);
    EXPECT_NEAR(up.radius, 5.0, kTight);
    EXPECT_NEAR(up.center.z, 4.0, kTight);
    const Ball down = beta_ball(t, -4);
    EXPECT_NEAR(down.radius, 5.0, kTight);
    EXPECT_NEAR(down.center.z, -4.0, kTight);
    const Ball zero = beta_ball(t, 0);
    const Ball d = diametric_ball(t);
    EXPECT_EQ(zero.center, d.center);
    EXPECT_EQ(zero.radius, d.radius);
}

TEST(BetaBallProperty, CircumscribesTriangleSymmetrically)
{
    Gen g(13);
    for(int i = 0; i < 500; ++i)
    {
        const Triangle t = g.triangle();
        const double beta = g.uniform(0, 20);
        const Ball up = beta_ball(t, beta), down = beta_ball(t, -beta);
        EXPECT_DOUBLE_EQ(up.radius, down.radius);
        for(const Point3& x : {t.a, t.b, t.c})
        {
            EXPECT_NEAR(power_distance(up, x), 0.0, 1e-9 * up.radius * up.radius);
            EXPECT_NEAR(power_distance(down, x), 0.0, 1e-9 * down.radius * down.radius);
        }
    }
}

TEST(ShrunkBall, Examples)
{
    const Ball b{{1, 2, 3}, 3};
    const Ball s = shrunk_ball(b, 2);
    EXPECT_EQ(s.center, b.center);
    EXPECT_DOUBLE_EQ(s.radius, 1.0);
    const Ball same = shrunk_ball(b, 0);
    EXPECT_DOUBLE_EQ(same.radius, 3.0);
    EXPECT_THROW(shrunk_ball(b, 3.5), NegativeRadius);
    EXPECT_NEAR(lens_shrink_amount(3, 4), 2.0, kTight);
}

TEST(ShrunkBallProperty, LensShrunkBallLiesInsideBothBetaBalls)
{
    // Sample points of the shrunk ball; each must be inside both beta balls.
    Gen g(14);
    for(int i = 0; i < 300; ++i)
    {
        const Triangle t = g.triangle(2);
        const double beta = g.uniform(0, 5);
        const Ball d = diametric_ball(t);
        const Ball s = shrunk_ball(d, lens_shrink_amount(d.radius, beta));
        const Ball up = beta_ball(t, beta), down = beta_ball(t, -beta);
        for(int k = 0; k < 20; ++k)
        {
            const Point3 x = s.center + g.unit_vector() * (s.radius * g.uniform(0, 1));
            EXPECT_LE(power_distance(up, x), 1e-9 * up.radius * up.radius);
            EXPECT_LE(power_distance(down, x), 1e-9 * down.radius * down.radius);
        }
    }
}

TEST(PowerDistance, Examples)
{
    const Ball b{{0, 0, 0}, 1};
    EXPECT_DOUBLE_EQ(power_distance(b, {2, 0, 0}), 3.0);
    EXPECT_DOUBLE_EQ(power_distance(b, {0, 1, 0}), 0.0);
    EXPECT_DOUBLE_EQ(power_distance(b, {0, 0, 0}), -1.0);
}

TEST(Bisector, Examples)
{
    const Plane p = bisector_plane({{0, 0, 0}, 1}, {{2, 0, 0}, 1});
    EXPECT_NEAR(p.point.x, 1.0, kTight);
    EXPECT_NEAR(p.normal.x(), 1.0, kTight);
    EXPECT_NEAR(power_distance({{0, 0, 0}, 1}, {1, 5, 0}), 25.0, kTight);
    EXPECT_NEAR(power_distance({{2, 0, 0}, 1}, {1, 5, 0}), 25.0, kTight);

    const Plane q = bisector_plane({{0, 0, 0}, 2}, {{4, 0, 0}, 1});
    EXPECT_NEAR(q.point.x, 2.375, kTight);
    EXPECT_THROW(bisector_plane({{1, 1, 1}, 2}, {{1, 1, 1}, 3}), CoincidentCenters);
}

TEST(BisectorProperty, SampledPointsHaveEqualPower)
{
    Gen g(15);
    for(int i = 0; i < 500; ++i)
    {
        const Ball b1{g.point(), g.uniform(0, 5)}, b2{g.point(), g.uniform(0, 5)};
        const Plane pl = bisector_plane(b1, b2);
        // Any point of the plane: offset the anchor by a tangent vector.
        const Vec3 tangent = cross(pl.normal.vec(), g.unit_vector());
        const Point3 x = pl.point + tangent * g.uniform(-10, 10);
        const double scale = std::max(1.0, squared_distance(x, b1.center) + squared_distance(x, b2.center));
        EXPECT_NEAR(power_distance(b1, x), power_distance(b2, x), 1e-10 * scale);
        EXPECT_NEAR(pl.signed_distance(x), 0.0, 1e-9 * std::sqrt(scale));
    }
}

TEST(Normal, Examples)
{
    const UnitVector3 n = triangle_normal({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}});
    EXPECT_NEAR(n.z(), 1.0, kTight);
    const UnitVector3 m = triangle_normal({{0, 0, 0}, {0, 1, 0}, {1, 0, 0}});
    EXPECT_NEAR(m.z(), -1.0, kTight);
}

TEST(NormalProperty, UnitAndPerpendicular)
{
    Gen g(16);
    for(int i = 0; i < 1000; ++i)
    {
        const Triangle t = g.triangle();
        const Vec3 n = triangle_normal(t).vec();
        EXPECT_NEAR(norm(n), 1.0, 1e-12);
        EXPECT_NEAR(dot(n, (t.b - t.a) / norm(t.b - t.a)), 0.0, 1e-12);
        EXPECT_NEAR(dot(n, (t.c - t.a) / norm(t.c - t.a)), 0.0, 1e-12);
    }
}

TEST(UnitVector, RejectsZero)
{
    EXPECT_THROW(UnitVector3::normalize({0, 0, 0}), Error);
    EXPECT_NEAR(norm(UnitVector3::normalize({3, 4, 12}).vec()), 1.0, 1e-12);
}

TEST(Dihedral, Examples)
{
    const Triangle flat1{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    const Triangle flat2{{1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
    EXPECT_NEAR(dihedral_angle(flat1, flat2), 0.0, kTight);
    const Triangle wall{{0, 0, 0}, {0, 0, 1}, {1, 0, 0}};
    EXPECT_NEAR(dihedral_angle(flat1, wall), std::numbers::pi / 2, kTight);
    const Triangle flipped{{1, 0, 0}, {0, 1, 0}, {1, 1, 0}};
    EXPECT_NEAR(dihedral_angle(flat1, flipped), std::numbers::pi, kTight);
}

TEST(AspectRatio, Examples)
{
    EXPECT_NEAR(aspect_ratio({{0, 0, 0}, {1, 0, 0}, {0.5, std::sqrt(3.0) / 2, 0}}), 1 / std::sqrt(3.0), kTight);
    EXPECT_NEAR(aspect_ratio({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}), std::sqrt(2.0) / 2, kTight);
    // Thin triangle: oracle circumradius from Cramer's center.
    const Triangle thin{{0, 0, 0}, {1, 0, 0}, {0.5, 0.01, 0}};
    const double rho = distance(cramer_circumcenter(thin), thin.a);
    const double shortest = distance(thin.a, thin.c);
    EXPECT_NEAR(aspect_ratio(thin), rho / shortest, 1e-9);
    EXPECT_NEAR(rho, 12.5, 0.01);
    EXPECT_NEAR(aspect_ratio(thin), 25.0, 0.01);
}
