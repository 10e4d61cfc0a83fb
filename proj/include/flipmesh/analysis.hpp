#ifndef FLIPMESH_ANALYSIS_HPP
#define FLIPMESH_ANALYSIS_HPP

#include "error.hpp"
#include "geometry.hpp"
#include "halfedge_mesh.hpp"
#include "parallel.hpp"
#include "spatial_index.hpp"
#include "stab_predicates.hpp"
#include "surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace flipmesh {

struct DensityReport
{
    double epsilon = 0;           // max circumradius / gamma
    double delta = 0;             // closest vertex pair / (epsilon * gamma)
    double max_aspect_ratio = 0;
    double max_dihedral = 0;      // radians, between oriented normals of adjacent faces
    double max_normal_angle = 0;  // face normal vs. surface normal at its corners
    bool orientation_consistent = true;
    double gamma_used = 0;
    double max_circumradius = 0;
    double min_vertex_distance = 0;
    double max_surface_distance = 0;
    std::size_t num_vertices = 0;
    std::size_t num_faces = 0;
};

namespace detail {

/// Circumcenter from barycentric weights, kept separate from geometry.hpp so
/// the checkers do not share code with the engine.
inline Ball barycentric_circumball(const Triangle& t)
{
    const double a2 = squared_distance(t.b, t.c);
    const double b2 = squared_distance(t.c, t.a);
    const double c2 = squared_distance(t.a, t.b);
    const double wa = a2 * (b2 + c2 - a2);
    const double wb = b2 * (c2 + a2 - b2);
    const double wc = c2 * (a2 + b2 - c2);
    const double sum = wa + wb + wc;
    const Point3 c{(wa * t.a.x + wb * t.b.x + wc * t.c.x) / sum,
                   (wa * t.a.y + wb * t.b.y + wc * t.c.y) / sum,
                   (wa * t.a.z + wb * t.b.z + wc * t.c.z) / sum};
    return {c, distance(c, t.a)};
}

} // namespace detail

/// Density and uniformity of m measured against surf. gamma overrides the
/// surface reach when given.
inline DensityReport density_report(const TriangleMesh& m, const SurfaceModel& surf,
                                    std::optional<double> gamma = std::nullopt)
{
    DensityReport r;
    r.gamma_used = gamma ? *gamma : surf.reach();
    if(!(r.gamma_used > 0))
        throw Error("gamma must be positive");
    r.num_vertices = m.num_vertices();
    r.num_faces = m.num_faces();
    const double off_limit = 1e-6 * r.gamma_used;
    for(Index v = 0; v < m.num_vertices(); ++v)
    {
        const double d = std::abs(surf.signed_distance(m.position({v})));
        if(d > off_limit)
            throw VertexOffSurface(v, d);
        r.max_surface_distance = std::max(r.max_surface_distance, d);
    }

    double shortest_edge = std::numeric_limits<double>::infinity();
    for(Index f = 0; f < m.num_faces(); ++f)
    {
        const Triangle t = m.triangle(f);
        r.max_circumradius = std::max(r.max_circumradius, circumradius_or_inf(t));
        shortest_edge = std::min({shortest_edge, distance(t.a, t.b), distance(t.b, t.c),
                                  distance(t.c, t.a)});
        if(is_degenerate(t))
        {
            r.max_aspect_ratio = std::numeric_limits<double>::infinity();
            r.orientation_consistent = false;
            continue;
        }
        r.max_aspect_ratio = std::max(r.max_aspect_ratio, aspect_ratio(t));
        const Vec3 n = triangle_normal(t).vec();
        for(const Point3& x : {t.a, t.b, t.c})
        {
            const double a = angle_between(n, surf.normal(x).vec());
            r.max_normal_angle = std::max(r.max_normal_angle, a);
            if(a > std::numbers::pi / 2)
                r.orientation_consistent = false;
        }
    }
    for(Index e = 0; e < m.num_edges(); ++e)
    {
        const auto [fa, fb] = m.edge_faces(e);
        const double a = dihedral_angle_or_nan(m.triangle(fa), m.triangle(fb));
        r.max_dihedral = std::max(r.max_dihedral, a == a ? a : std::numbers::pi);
    }
    r.epsilon = r.max_circumradius / r.gamma_used;
    r.min_vertex_distance = closest_pair_distance(m.positions(), shortest_edge);
    r.delta = r.min_vertex_distance / (r.epsilon * r.gamma_used);
    return r;
}

enum class ConformanceMode
{
    gabriel,
    alpha_gabriel,
};

inline const char* to_string(ConformanceMode m)
{
    return m == ConformanceMode::gabriel ? "gabriel" : "alpha_gabriel";
}

struct ConformanceViolation
{
    Index face = kNoIndex;
    Index witness = kNoIndex;
    double depth = 0; // -power distance / rho(face)^2
};

struct ConformanceReport
{
    ConformanceMode mode = ConformanceMode::gabriel;
    double alpha = 0;
    std::vector<ConformanceViolation> violations;
    std::size_t faces_checked = 0;
    std::size_t faces_vacuous = 0; // shrunk ball empty by construction

    bool pass() const { return violations.empty(); }
};

namespace detail {

/// Exhaustive scan. shrink(rho) gives the amount to shrink each diametric
/// ball; faces whose shrunk radius is not positive are vacuous.
template <class Shrink>
ConformanceReport conformance_scan(const TriangleMesh& m, double tau, Shrink&& shrink)
{
    ConformanceReport rep;
    const std::size_t nf = m.num_faces();
    std::vector<std::vector<ConformanceViolation>> per_face(nf);
    std::vector<char> vacuous(nf, 0);
    const auto pts = m.positions();
    parallel_chunks(nf, [&](std::size_t b, std::size_t e) {
        for(std::size_t fi = b; fi < e; ++fi)
        {
            const Triangle t = m.triangle(Index(fi));
            if(is_degenerate(t))
                continue;
            const Ball d = barycentric_circumball(t);
            const double radius = d.radius - shrink(d.radius);
            if(!(radius > 0))
            {
                vacuous[fi] = 1;
                continue;
            }
            const double r2 = radius * radius;
            const double limit = r2 * (1 - tau);
            const auto corners = m.face_vertices(Index(fi));
            for(Index v = 0; v < pts.size(); ++v)
            {
                const double dx = pts[v].x - d.center.x, dy = pts[v].y - d.center.y,
                             dz = pts[v].z - d.center.z;
                const double q = dx * dx + dy * dy + dz * dz;
                if(q < limit && v != corners[0].index && v != corners[1].index &&
                   v != corners[2].index)
                    per_face[fi].push_back({Index(fi), v, (r2 - q) / (d.radius * d.radius)});
            }
        }
    });
    for(std::size_t f = 0; f < nf; ++f)
    {
        rep.faces_vacuous += vacuous[f];
        rep.violations.insert(rep.violations.end(), per_face[f].begin(), per_face[f].end());
    }
    rep.faces_checked = nf;
    return rep;
}

} // namespace detail

/// Every vertex outside every diametric ball (tau relative tolerance).
inline ConformanceReport gabriel_check(const TriangleMesh& m, double tau = kStabTolerance)
{
    return detail::conformance_scan(m, tau, [](double) { return 0.0; });
}

/// Every diametric ball shrunk by min(alpha, rho) is empty.
inline ConformanceReport alpha_gabriel_check(const TriangleMesh& m, double alpha,
                                             double tau = kStabTolerance)
{
    if(!(alpha >= 0))
        throw Error("alpha must be nonnegative");
    auto rep = detail::conformance_scan(m, tau, [alpha](double rho) { return std::min(alpha, rho); });
    rep.mode = alpha == 0 ? ConformanceMode::gabriel : ConformanceMode::alpha_gabriel;
    rep.alpha = alpha;
    return rep;
}

/// Shrinks each face by its own lens amount rho + beta - sqrt(rho^2 + beta^2).
inline ConformanceReport lens_shrunk_check(const TriangleMesh& m, double beta,
                                           double tau = kStabTolerance)
{
    auto rep = detail::conformance_scan(m, tau, [beta](double rho) { return lens_shrink_amount(rho, beta); });
    rep.mode = ConformanceMode::alpha_gabriel;
    rep.alpha = std::numeric_limits<double>::quiet_NaN();
    return rep;
}

/// Per-face comparison of two verdicts: "no vertex in the beta-lens" and "no
/// vertex in the lens-shrunk diametric ball". The shrunk ball sits inside the
/// lens, so the first verdict implies the second.
struct LensConsistencyReport
{
    double beta = 0;
    std::size_t faces = 0;
    std::size_t lens_stabbed = 0;
    std::size_t shrunk_occupied = 0;
    std::vector<Index> disagreements;     // verdicts differ
    std::vector<Index> implication_breaks; // lens empty but shrunk ball occupied

    bool agree() const { return disagreements.empty(); }
};

inline LensConsistencyReport lens_consistency(const TriangleMesh& m, double beta,
                                              double tau = kStabTolerance)
{
    LensConsistencyReport rep;
    rep.beta = beta;
    rep.faces = m.num_faces();
    std::vector<char> lens(m.num_faces(), 0), shrunk(m.num_faces(), 0);
    for(const auto& s : brute_force_beta_stab_scan(m, beta, tau))
        lens[s.face.index] = 1;
    for(const auto& v : lens_shrunk_check(m, beta, tau).violations)
        shrunk[v.face] = 1;
    for(Index f = 0; f < m.num_faces(); ++f)
    {
        rep.lens_stabbed += lens[f];
        rep.shrunk_occupied += shrunk[f];
        if(lens[f] != shrunk[f])
            rep.disagreements.push_back(f);
        if(!lens[f] && shrunk[f])
            rep.implication_breaks.push_back(f);
    }
    return rep;
}

struct BoundCheck
{
    std::string name;
    double observed = 0;
    double bound = 0;
    bool pass = false;
};

struct NormalBoundAudit
{
    double epsilon = 0;
    bool applicable = false; // bounds are stated for epsilon < 0.1
    std::vector<BoundCheck> checks;

    bool pass() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return c.pass; });
    }
};

/// Observed normal deviations against the bounds eps/(1-eps) (surface normals
/// at the ends of an edge, eps = longest edge / gamma), 7 eps (face vs.
/// corner normals) and 14 eps (adjacent faces).
inline NormalBoundAudit normal_bound_audit(const TriangleMesh& m, const SurfaceModel& surf,
                                           std::optional<double> gamma = std::nullopt)
{
    const DensityReport d = density_report(m, surf, gamma);
    NormalBoundAudit a;
    a.epsilon = d.epsilon;
    a.applicable = d.epsilon < 0.1;

    double longest = 0, edge_normal = 0;
    for(Index e = 0; e < m.num_edges(); ++e)
    {
        const auto [x, y] = m.edge_vertices(e);
        longest = std::max(longest, distance(m.position(x), m.position(y)));
        edge_normal = std::max(edge_normal, angle_between(surf.normal(m.position(x)).vec(),
                                                          surf.normal(m.position(y)).vec()));
    }
    const double e_edge = longest / d.gamma_used;
    const double lemma = e_edge < 1 ? e_edge / (1 - e_edge) : std::numeric_limits<double>::infinity();
    a.checks.push_back({"edge_surface_normals", edge_normal, lemma, edge_normal <= lemma});
    a.checks.push_back({"face_vs_vertex_normal", d.max_normal_angle, 7 * d.epsilon,
                        d.max_normal_angle <= 7 * d.epsilon});
    a.checks.push_back({"dihedral", d.max_dihedral, 14 * d.epsilon, d.max_dihedral <= 14 * d.epsilon});
    return a;
}

} // namespace flipmesh

#endif
