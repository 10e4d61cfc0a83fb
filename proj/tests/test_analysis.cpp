#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace flipmesh;
using fixtures::Gen;
using fixtures::QuadFixture;

namespace {

TriangleMesh icosahedron(std::uint64_t seed = 0)
{
    return make_dense_mesh(SurfaceModel::sphere(1), {10.0, 0, seed, 0, 1});
}

TriangleMesh reversed(const TriangleMesh& m)
{
    auto tris = m.triangles();
    for(auto& t : tris)
        std::swap(t[1], t[2]);
    return build_mesh(m.positions(), tris);
}

/// Oracle for diametric-ball occupancy: a vertex lies strictly inside the
/// circumscribed sphere centred in the triangle plane iff its distance to the
/// Cramer-rule center is below the radius.
std::set<std::pair<Index, Index>> ball_occupants(const TriangleMesh& m, double shrink)
{
    std::set<std::pair<Index, Index>> out;
    for(Index f = 0; f < m.num_faces(); ++f)
    {
        const Triangle t = m.triangle(f);
        const Vec3 ab = t.b - t.a, ac = t.c - t.a, n = cross(ab, ac);
        const Vec3 rhs = (cross(n, ab) * dot(ac, ac) + cross(ac, n) * dot(ab, ab)) / (2 * dot(n, n));
        const Point3 c = t.a + rhs;
        const double rho = norm(rhs);
        const double r = rho - std::min(shrink, rho);
        if(r <= 0)
            continue;
        const auto corners = m.face_vertices(f);
        for(Index v = 0; v < m.num_vertices(); ++v)
        {
            if(std::find(corners.begin(), corners.end(), VertexHandle{v}) != corners.end())
                continue;
            if(distance(m.position({v}), c) < r * (1 - 1e-9))
                out.insert({f, v});
        }
    }
    return out;
}

std::set<std::pair<Index, Index>> as_pairs(const ConformanceReport& r)
{
    std::set<std::pair<Index, Index>> out;
    for(const auto& v : r.violations)
        out.insert({v.face, v.witness});
    return out;
}

} // namespace

TEST(Density, IcosahedronMatchesClosedForm)
{
    const TriangleMesh m = icosahedron(3);
    const DensityReport d = density_report(m, SurfaceModel::sphere(1));
    // Edge of the unit-circumsphere icosahedron and the circumradius of its
    // equilateral faces.
    const double edge = 4 / std::sqrt(10 + 2 * std::sqrt(5.0));
    EXPECT_NEAR(d.epsilon, edge / std::sqrt(3.0), 1e-12);
    EXPECT_NEAR(d.epsilon, 0.607, 1e-3);
    EXPECT_NEAR(d.min_vertex_distance, edge, 1e-12);
    EXPECT_NEAR(d.delta, std::sqrt(3.0), 1e-12);
    EXPECT_NEAR(d.max_aspect_ratio, 1 / std::sqrt(3.0), 1e-12);
    EXPECT_TRUE(d.orientation_consistent);
    EXPECT_EQ(d.num_vertices, 12u);
    EXPECT_EQ(d.num_faces, 20u);
    EXPECT_DOUBLE_EQ(d.gamma_used, 1.0);
}

TEST(Density, ReversedOrientationIsDetected)
{
    const DensityReport d = density_report(reversed(icosahedron()), SurfaceModel::sphere(1));
    EXPECT_FALSE(d.orientation_consistent);
}

TEST(Density, GammaOverride)
{
    const DensityReport d = density_report(icosahedron(), SurfaceModel::sphere(1), 2.0);
    EXPECT_DOUBLE_EQ(d.gamma_used, 2.0);
    EXPECT_NEAR(d.epsilon, 0.607 / 2, 1e-3);
}

TEST(Density, VertexOffSurface)
{
    const TriangleMesh m = fixtures::octahedron();
    EXPECT_NO_THROW(density_report(m, SurfaceModel::sphere(1)));
    EXPECT_THROW(density_report(m, SurfaceModel::sphere(1.001)), VertexOffSurface);
    EXPECT_THROW(density_report(fixtures::pulled_octahedron(0.3), SurfaceModel::sphere(1)), VertexOffSurface);
}

TEST(Gabriel, OctahedronPasses)
{
    const ConformanceReport r = gabriel_check(fixtures::octahedron());
    EXPECT_TRUE(r.pass());
    EXPECT_EQ(r.faces_checked, 8u);
    EXPECT_EQ(r.mode, ConformanceMode::gabriel);
}

TEST(Gabriel, QuadViolation)
{
    const ConformanceReport r = gabriel_check(QuadFixture::mesh());
    ASSERT_FALSE(r.pass());
    bool found = false;
    for(const auto& v : r.violations)
    {
        EXPECT_GT(v.depth, 0);
        found |= v.face == QuadFixture::face_pqr && v.witness == QuadFixture::s;
    }
    EXPECT_TRUE(found);
}

TEST(Gabriel, MatchesIndependentOracle)
{
    Gen g(51);
    for(int i = 0; i < 6; ++i)
    {
        const auto gm = g.surface_mesh(i % 2 == 1, g.uniform(0.15, 0.35), 1 + g.index(6));
        const TriangleMesh& m = gm.perturbed;
        const ConformanceReport r = gabriel_check(m);
        EXPECT_EQ(as_pairs(r), ball_occupants(m, 0));
        EXPECT_EQ(r.pass(), brute_force_stab_scan(m).empty());
    }
}

TEST(AlphaGabriel, ZeroEqualsGabriel)
{
    const TriangleMesh m = QuadFixture::mesh();
    EXPECT_EQ(as_pairs(alpha_gabriel_check(m, 0)), as_pairs(gabriel_check(m)));
    EXPECT_EQ(alpha_gabriel_check(m, 0).mode, ConformanceMode::gabriel);
    EXPECT_THROW(alpha_gabriel_check(m, -1), Error);
}

TEST(AlphaGabriel, LargeAlphaIsVacuous)
{
    const TriangleMesh m = QuadFixture::mesh();
    const ConformanceReport r = alpha_gabriel_check(m, 1e3);
    EXPECT_TRUE(r.pass());
    EXPECT_EQ(r.faces_vacuous, m.num_faces());
}

TEST(AlphaGabriel, MonotoneAndMatchesOracle)
{
    Gen g(52);
    const auto gm = g.surface_mesh(true, 0.3, 10);
    const TriangleMesh& m = gm.perturbed;
    std::size_t prev = std::numeric_limits<std::size_t>::max();
    for(double alpha : {0.0, 1e-4, 1e-3, 3e-3, 1e-2, 3e-2, 0.1})
    {
        const ConformanceReport r = alpha_gabriel_check(m, alpha);
        EXPECT_EQ(as_pairs(r), ball_occupants(m, alpha)) << alpha;
        EXPECT_LE(r.violations.size(), prev);
        prev = r.violations.size();
    }
}

TEST(LensConsistency, ImplicationHoldsOnPerturbedMeshes)
{
    Gen g(53);
    for(int i = 0; i < 4; ++i)
    {
        const auto gm = g.surface_mesh(i % 2 == 1, 0.25, 8);
        for(double beta : {0.0, 0.01, 0.05, 0.3})
        {
            const LensConsistencyReport r = lens_consistency(gm.perturbed, beta);
            EXPECT_TRUE(r.implication_breaks.empty()) << beta;
            EXPECT_LE(r.shrunk_occupied, r.lens_stabbed);
            EXPECT_EQ(r.faces, gm.perturbed.num_faces());
        }
        // At beta = 0 the lens is the diametric ball itself.
        EXPECT_TRUE(lens_consistency(gm.perturbed, 0).agree());
    }
}

TEST(LensConsistency, ShrinkAmountOracle)
{
    for(double rho : {0.01, 0.1, 1.0})
        for(double beta : {0.0, 0.05, 2.0})
        {
            const double a = lens_shrink_amount(rho, beta);
            EXPECT_GE(a, 0);
            EXPECT_LE(a, std::min(rho, beta) + 1e-15);
            EXPECT_NEAR(a, rho + beta - std::hypot(rho, beta), 1e-15);
        }
}

TEST(NormalBounds, FineMeshesSatisfyAllBounds)
{
    for(bool torus : {false, true})
    {
        const SurfaceModel s = torus ? SurfaceModel::torus(2, 0.5) : SurfaceModel::sphere(1);
        const TriangleMesh m = make_dense_mesh(s, {0.06, 0, 1, 0, torus ? 2.0 : 1.0});
        const NormalBoundAudit a = normal_bound_audit(m, s);
        EXPECT_TRUE(a.applicable);
        ASSERT_EQ(a.checks.size(), 3u);
        for(const auto& c : a.checks)
            EXPECT_TRUE(c.pass) << c.name << " " << c.observed << " > " << c.bound;
        EXPECT_TRUE(a.pass());
    }
}

TEST(NormalBounds, DihedralScalesWithEpsilon)
{
    // Halving the sphere's edge length roughly halves both the epsilon and
    // the largest dihedral, so their ratio stays bounded.
    const SurfaceModel s = SurfaceModel::sphere(1);
    for(double eps : {0.08, 0.04, 0.02, 0.01})
    {
        const NormalBoundAudit a = normal_bound_audit(make_dense_mesh(s, {eps, 0, 2, 0, 1}), s);
        EXPECT_LT(a.checks[2].observed / a.epsilon, 14.0);
        EXPECT_LT(a.checks[1].observed / a.epsilon, 7.0);
    }
}

TEST(NormalBounds, CoarseMeshIsNotApplicable)
{
    const NormalBoundAudit a = normal_bound_audit(icosahedron(), SurfaceModel::sphere(1));
    EXPECT_FALSE(a.applicable);
}
