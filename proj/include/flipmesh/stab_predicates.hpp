#ifndef FLIPMESH_STAB_PREDICATES_HPP
#define FLIPMESH_STAB_PREDICATES_HPP

#include "geometry.hpp"
#include "halfedge_mesh.hpp"
#include "parallel.hpp"
#include "spatial_index.hpp"

#include <cmath>
#include <optional>
#include <vector>

namespace flipmesh {

/// Relative margin for "strictly inside": a vertex within tau * r^2 power
/// distance of a ball boundary does not stab it.
inline constexpr double kStabTolerance = 1e-9;

enum class StabKind
{
    stabbed,
    locally_stabbed,
    beta_stabbed,
    locally_beta_stabbed,
};

inline const char* to_string(StabKind k)
{
    switch(k)
    {
    case StabKind::stabbed: return "stabbed";
    case StabKind::locally_stabbed: return "locally_stabbed";
    case StabKind::beta_stabbed: return "beta_stabbed";
    case StabKind::locally_beta_stabbed: return "locally_beta_stabbed";
    }
    return "?";
}

struct StabReport
{
    FaceHandle face;
    VertexHandle witness;
    StabKind kind = StabKind::stabbed;
    double beta = 0;
    double power = 0; // power distance of the witness to the diametric ball
};

/// Diametric ball and oriented normal of a face, the data every stab test needs.
struct FaceBalls
{
    Point3 center;
    double radius = 0;
    Vec3 normal;
    bool degenerate = true;

    static FaceBalls of(const Triangle& t)
    {
        FaceBalls g;
        if(is_degenerate(t))
            return g;
        const auto [c, r] = circumcenter_radius(t);
        g.center = c;
        g.radius = r;
        g.normal = triangle_normal(t).vec();
        g.degenerate = false;
        return g;
    }

    Ball diametric() const { return {center, radius}; }

    /// Largest of the power distances of x to the beta- and (-beta)-balls.
    /// For beta = 0 this is the power distance to the diametric ball.
    double lens_power(Point3 x, double beta) const
    {
        const Vec3 d = x - center;
        return squared_norm(d) + 2.0 * beta * std::abs(dot(d, normal)) - radius * radius;
    }

    bool lens_contains(Point3 x, double beta, double tau) const
    {
        return !degenerate && lens_power(x, beta) < -tau * (radius * radius + beta * beta);
    }
};

namespace detail {

inline bool better_witness(double pw, Index v, double best_pw, Index best_v)
{
    return pw < best_pw || (pw == best_pw && v < best_v);
}

inline bool is_corner(const std::array<VertexHandle, 3>& corners, Index v)
{
    return corners[0].index == v || corners[1].index == v || corners[2].index == v;
}

template <class Candidates>
std::optional<StabReport> min_power_witness(const TriangleMesh& m, FaceHandle f, double beta,
                                            double tau, StabKind kind, Candidates&& candidates)
{
    const FaceBalls g = FaceBalls::of(m.triangle(f));
    if(g.degenerate)
        return std::nullopt;
    const auto corners = m.face_vertices(f);
    const auto positions = m.positions();
    double best_pw = 0;
    Index best = kNoIndex;
    candidates(g, [&](Index v) {
        if(is_corner(corners, v))
            return;
        const Point3 x = positions[v];
        if(!g.lens_contains(x, beta, tau))
            return;
        const double pw = power_distance(g.diametric(), x);
        if(best == kNoIndex || better_witness(pw, v, best_pw, best))
        {
            best_pw = pw;
            best = v;
        }
    });
    if(best == kNoIndex)
        return std::nullopt;
    return StabReport{f, {best}, kind, beta, best_pw};
}

} // namespace detail

/// Some vertex of m lies strictly inside D_f. Returns the witness of minimum
/// power distance (ties to the lower index).
inline std::optional<StabReport> is_stabbed(const TriangleMesh& m, FaceHandle f,
                                            const SpatialIndex& idx, double tau = kStabTolerance)
{
    return detail::min_power_witness(m, f, 0.0, tau, StabKind::stabbed,
                                     [&](const FaceBalls& g, auto&& visit) {
                                         idx.for_each_candidate(g.diametric(), visit);
                                     });
}

/// A vertex lies strictly inside both the beta- and (-beta)-balls of f. The
/// lens lies inside D_f, so D_f bounds the candidate search.
inline std::optional<StabReport> is_beta_stabbed(const TriangleMesh& m, FaceHandle f, double beta,
                                                 const SpatialIndex& idx,
                                                 double tau = kStabTolerance)
{
    return detail::min_power_witness(m, f, beta, tau, StabKind::beta_stabbed,
                                     [&](const FaceBalls& g, auto&& visit) {
                                         idx.for_each_candidate(g.diametric(), visit);
                                     });
}

inline std::optional<StabReport> is_locally_beta_stabbed(const TriangleMesh& m, FaceHandle f,
                                                         double beta, double tau = kStabTolerance)
{
    const auto nb = neighbor_vertices(m, f);
    return detail::min_power_witness(m, f, beta, tau, StabKind::locally_beta_stabbed,
                                     [&](const FaceBalls&, auto&& visit) {
                                         for(VertexHandle v : nb)
                                             visit(v.index);
                                     });
}

/// Stabbed by one of the three neighbor vertices.
inline std::optional<StabReport> is_locally_stabbed(const TriangleMesh& m, FaceHandle f,
                                                    double tau = kStabTolerance)
{
    auto r = is_locally_beta_stabbed(m, f, 0.0, tau);
    if(r)
        r->kind = StabKind::locally_stabbed;
    return r;
}

/// The apex across half-edge h stabs the lens of the face containing h.
inline bool apex_stabs(const TriangleMesh& m, HalfEdge h, double beta = 0.0,
                       double tau = kStabTolerance)
{
    const FaceBalls g = FaceBalls::of(m.triangle(m.face_of(h)));
    const VertexHandle apex = m.origin(m.prev(m.twin(h)));
    return g.lens_contains(m.position(apex), beta, tau);
}

/// Edge e is flippable when the apex across it stabs (the beta-lens of) one
/// of its two faces.
inline bool is_flippable(const TriangleMesh& m, Index e, double beta = 0.0,
                         double tau = kStabTolerance)
{
    const HalfEdge h = 2 * e;
    return apex_stabs(m, h, beta, tau) || apex_stabs(m, m.twin(h), beta, tau);
}

inline std::vector<EdgeHandle> flippable_edges(const TriangleMesh& m, double beta = 0.0,
                                               double tau = kStabTolerance)
{
    std::vector<EdgeHandle> out;
    for(Index e = 0; e < m.num_edges(); ++e)
        if(is_flippable(m, e, beta, tau))
            out.push_back(m.edge(e));
    return out;
}

/// Whether flipping e would leave one of the two new faces locally stabbed.
/// Evaluated from the current connectivity; m is not modified.
inline bool flip_creates_local_stab(const TriangleMesh& m, Index e, double tau = kStabTolerance)
{
    const HalfEdge h0 = 2 * e, h1 = m.next(h0), h2 = m.next(h1);
    const HalfEdge t0 = m.twin(h0), t1 = m.next(t0), t2 = m.next(t1);
    const auto pos = [&](VertexHandle v) { return m.position(v); };
    const auto apex_across = [&](HalfEdge h) { return m.origin(m.prev(m.twin(h))); };
    const VertexHandle p = m.origin(h0), q = m.origin(h1), r = m.origin(h2), s = m.origin(t2);
    // New faces (s, r, p) and (r, s, q).
    const Triangle a{pos(s), pos(r), pos(p)};
    const Triangle b{pos(r), pos(s), pos(q)};
    if(is_degenerate(a) || is_degenerate(b))
        return false;
    const FaceBalls ga = FaceBalls::of(a), gb = FaceBalls::of(b);
    for(VertexHandle v : {q, apex_across(h2), apex_across(t1)})
        if(v != p && v != r && v != s && ga.lens_contains(pos(v), 0.0, tau))
            return true;
    for(VertexHandle v : {p, apex_across(t2), apex_across(h1)})
        if(v != q && v != r && v != s && gb.lens_contains(pos(v), 0.0, tau))
            return true;
    return false;
}

/// Exhaustive O(V*F) scan built on the explicit beta-ball construction. One
/// report per stabbed face (minimum power witness), ordered by face index.
inline std::vector<StabReport> brute_force_beta_stab_scan(const TriangleMesh& m, double beta,
                                                          double tau = kStabTolerance)
{
    const std::size_t nf = m.num_faces();
    std::vector<std::optional<StabReport>> per_face(nf);
    const auto positions = m.positions();
    std::vector<double> xs, ys, zs;
    xs.reserve(positions.size());
    ys.reserve(positions.size());
    zs.reserve(positions.size());
    for(const Point3& x : positions)
    {
        xs.push_back(x.x);
        ys.push_back(x.y);
        zs.push_back(x.z);
    }
    const std::size_t nv = positions.size();
    parallel_chunks(nf, [&](std::size_t b, std::size_t e) {
        for(std::size_t fi = b; fi < e; ++fi)
        {
            const Triangle t = m.triangle(Index(fi));
            if(is_degenerate(t))
                continue;
            const Ball d = diametric_ball(t);
            const Ball up = beta_ball(t, beta);
            const Ball down = beta_ball(t, -beta);
            const double slack_d = tau * d.radius * d.radius;
            const double slack_b = tau * up.radius * up.radius;
            // Branch-free pass: corners sit on the boundary, so a minimum
            // below -slack means some other vertex is inside D.
            const double cx = d.center.x, cy = d.center.y, cz = d.center.z, r2 = d.radius * d.radius;
            double lanes[4] = {0, 0, 0, 0};
            std::size_t v = 0;
            for(; v + 4 <= nv; v += 4)
                for(std::size_t l = 0; l < 4; ++l)
                {
                    const double dx = xs[v + l] - cx, dy = ys[v + l] - cy, dz = zs[v + l] - cz;
                    const double pw = dx * dx + dy * dy + dz * dz - r2;
                    lanes[l] = pw < lanes[l] ? pw : lanes[l];
                }
            for(; v < nv; ++v)
            {
                const double dx = xs[v] - cx, dy = ys[v] - cy, dz = zs[v] - cz;
                const double pw = dx * dx + dy * dy + dz * dz - r2;
                lanes[0] = pw < lanes[0] ? pw : lanes[0];
            }
            const double lowest = std::min(std::min(lanes[0], lanes[1]), std::min(lanes[2], lanes[3]));
            if(!(lowest < -slack_d))
                continue;
            const auto corners = m.face_vertices(Index(fi));
            double best_pw = 0;
            Index best = kNoIndex;
            for(Index v = 0; v < positions.size(); ++v)
            {
                const double pw = power_distance(d, positions[v]);
                if(pw >= -slack_d || detail::is_corner(corners, v))
                    continue;
                if(beta != 0.0 && (power_distance(up, positions[v]) >= -slack_b ||
                                   power_distance(down, positions[v]) >= -slack_b))
                    continue;
                if(best == kNoIndex || detail::better_witness(pw, v, best_pw, best))
                {
                    best_pw = pw;
                    best = v;
                }
            }
            if(best != kNoIndex)
                per_face[fi] = StabReport{m.face(Index(fi)), {best},
                                          beta == 0.0 ? StabKind::stabbed : StabKind::beta_stabbed,
                                          beta, best_pw};
        }
    });
    std::vector<StabReport> out;
    for(auto& r : per_face)
        if(r)
            out.push_back(*r);
    return out;
}

inline std::vector<StabReport> brute_force_stab_scan(const TriangleMesh& m,
                                                     double tau = kStabTolerance)
{
    return brute_force_beta_stab_scan(m, 0.0, tau);
}

} // namespace flipmesh

#endif
