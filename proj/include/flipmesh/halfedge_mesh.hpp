#ifndef FLIPMESH_HALFEDGE_MESH_HPP
#define FLIPMESH_HALFEDGE_MESH_HPP

#include "error.hpp"
#include "geometry.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace flipmesh {

using Index = std::uint32_t;
inline constexpr Index kNoIndex = std::numeric_limits<Index>::max();

struct VertexHandle
{
    Index index = kNoIndex;
    friend constexpr bool operator==(VertexHandle, VertexHandle) = default;
    friend constexpr auto operator<=>(VertexHandle, VertexHandle) = default;
};

/// Face and edge handles carry the generation of their slot; a flip bumps the
/// generation of the edge and the two faces it rewrites, so handles held
/// across a flip are detectably stale.
struct FaceHandle
{
    Index index = kNoIndex;
    Index generation = 0;
    friend constexpr bool operator==(FaceHandle, FaceHandle) = default;
};

struct EdgeHandle
{
    Index index = kNoIndex;
    Index generation = 0;
    friend constexpr bool operator==(EdgeHandle, EdgeHandle) = default;
};

using HalfEdge = Index;

/// One executed edge flip: edge pq shared by faces pqr and pqs became rs.
struct FlipRecord
{
    EdgeHandle edge;              // handle of the new edge rs
    std::array<Index, 4> pqrs{};  // vertex indices p, q, r, s
    std::array<double, 2> old_radii{};  // rho(pqr), rho(pqs)
    std::array<double, 2> new_radii{};  // rho(prs), rho(qrs)
    double dihedral_before = 0;   // angle between the oriented normals of pqr and pqs

    double old_max() const { return std::max(old_radii[0], old_radii[1]); }
    double new_max() const { return std::max(new_radii[0], new_radii[1]); }
};

/// Circumradius, or +inf for a degenerate triangle.
inline double circumradius_or_inf(const Triangle& t)
{
    if(is_degenerate(t))
        return std::numeric_limits<double>::infinity();
    return circumradius(t);
}

inline double dihedral_angle_or_nan(const Triangle& t1, const Triangle& t2)
{
    if(is_degenerate(t1) || is_degenerate(t2))
        return std::numeric_limits<double>::quiet_NaN();
    return dihedral_angle(t1, t2);
}

/// Closed, consistently oriented triangle mesh stored as half-edges. Edge e
/// owns half-edges 2e and 2e+1. Flips rewrite connectivity in place; the
/// vertex, edge and face counts never change and vertices never move.
class TriangleMesh
{
public:
    TriangleMesh() = default;

    std::size_t num_vertices() const { return m_positions.size(); }
    std::size_t num_faces() const { return m_face_he.size(); }
    std::size_t num_edges() const { return m_origin.size() / 2; }
    std::size_t num_halfedges() const { return m_origin.size(); }

    Point3 position(VertexHandle v) const { return m_positions[v.index]; }
    std::span<const Point3> positions() const { return m_positions; }

    std::optional<UnitVector3> normal(VertexHandle v) const { return m_normals[v.index]; }
    void set_normal(VertexHandle v, UnitVector3 n) { m_normals[v.index] = n; }

    // Raw half-edge access.
    VertexHandle origin(HalfEdge h) const { return {m_origin[h]}; }
    VertexHandle dest(HalfEdge h) const { return {m_origin[m_next[h]]}; }
    HalfEdge twin(HalfEdge h) const { return m_twin[h]; }
    HalfEdge next(HalfEdge h) const { return m_next[h]; }
    HalfEdge prev(HalfEdge h) const { return m_next[m_next[h]]; }
    Index face_of(HalfEdge h) const { return m_face[h]; }
    HalfEdge face_halfedge(Index f) const { return m_face_he[f]; }
    HalfEdge vertex_halfedge(VertexHandle v) const { return m_vertex_he[v.index]; }
    static Index edge_of(HalfEdge h) { return h / 2; }

    FaceHandle face(Index f) const { return {f, m_face_gen[f]}; }
    EdgeHandle edge(Index e) const { return {e, m_edge_gen[e]}; }
    EdgeHandle edge_of_halfedge(HalfEdge h) const { return edge(edge_of(h)); }
    bool is_valid(FaceHandle f) const
    {
        return f.index < num_faces() && m_face_gen[f.index] == f.generation;
    }
    bool is_valid(EdgeHandle e) const
    {
        return e.index < num_edges() && m_edge_gen[e.index] == e.generation;
    }

    std::array<VertexHandle, 3> face_vertices(Index f) const
    {
        const HalfEdge h = m_face_he[f];
        return {origin(h), origin(next(h)), origin(prev(h))};
    }
    std::array<VertexHandle, 3> face_vertices(FaceHandle f) const { return face_vertices(f.index); }

    Triangle triangle(Index f) const
    {
        const auto v = face_vertices(f);
        return {m_positions[v[0].index], m_positions[v[1].index], m_positions[v[2].index]};
    }
    Triangle triangle(FaceHandle f) const { return triangle(f.index); }

    std::array<VertexHandle, 2> edge_vertices(Index e) const
    {
        return {origin(2 * e), dest(2 * e)};
    }

    /// Apexes opposite edge e in its two faces: (apex of face(2e), apex of face(2e+1)).
    std::array<VertexHandle, 2> opposite_vertices(Index e) const
    {
        const HalfEdge h = 2 * e;
        return {origin(prev(h)), origin(prev(m_twin[h]))};
    }

    std::array<Index, 2> edge_faces(Index e) const
    {
        return {m_face[2 * e], m_face[m_twin[2 * e]]};
    }

    /// Walks the one-ring of a.
    bool has_edge(VertexHandle a, VertexHandle b) const
    {
        const HalfEdge start = m_vertex_he[a.index];
        HalfEdge h = start;
        std::size_t guard = 0;
        do
        {
            if(dest(h) == b)
                return true;
            h = m_twin[prev(h)];
        } while(h != start && ++guard <= num_halfedges());
        return false;
    }

    std::size_t degree(VertexHandle a) const
    {
        const HalfEdge start = m_vertex_he[a.index];
        HalfEdge h = start;
        std::size_t n = 0;
        do
        {
            ++n;
            h = m_twin[prev(h)];
        } while(h != start && n <= num_halfedges());
        return n;
    }

    /// Reason the flip of e would be refused, or None.
    FlipRejection check_flip(EdgeHandle e) const
    {
        if(!is_valid(e))
            return FlipRejection::InvalidHandle;
        const HalfEdge h0 = 2 * e.index;
        const VertexHandle p = origin(h0);
        const VertexHandle q = dest(h0);
        const auto [r, s] = opposite_vertices(e.index);
        if(r == s || has_edge(r, s))
            return FlipRejection::EdgeExists;
        const Point3 pp = m_positions[p.index], pq = m_positions[q.index];
        const Point3 pr = m_positions[r.index], ps = m_positions[s.index];
        if(is_degenerate({pp, ps, pr}) || is_degenerate({pq, pr, ps}))
            return FlipRejection::WouldDegenerate;
        return FlipRejection::None;
    }

    /// Replaces pqr, pqs by prs, qrs. Throws FlipError when check_flip refuses.
    FlipRecord flip_edge(EdgeHandle e)
    {
        if(const FlipRejection why = check_flip(e); why != FlipRejection::None)
            throw FlipError(why);

        // h0: p->q, h1: q->r, h2: r->p in face A; t0: q->p, t1: p->s, t2: s->q in face B.
        const HalfEdge h0 = 2 * e.index;
        const HalfEdge h1 = m_next[h0];
        const HalfEdge h2 = m_next[h1];
        const HalfEdge t0 = m_twin[h0];
        const HalfEdge t1 = m_next[t0];
        const HalfEdge t2 = m_next[t1];
        const Index fa = m_face[h0];
        const Index fb = m_face[t0];
        const Index p = m_origin[h0], q = m_origin[h1], r = m_origin[h2], s = m_origin[t2];

        FlipRecord rec;
        rec.pqrs = {p, q, r, s};
        const Triangle pqr = triangle(fa);
        const Triangle pqs = triangle(fb);
        rec.old_radii = {circumradius_or_inf(pqr), circumradius_or_inf(pqs)};
        rec.dihedral_before = dihedral_angle_or_nan(pqr, pqs);

        // A becomes (s, r, p), B becomes (r, s, q).
        m_origin[h0] = s;
        m_origin[t0] = r;
        m_next[h0] = h2;
        m_next[h2] = t1;
        m_next[t1] = h0;
        m_next[t0] = t2;
        m_next[t2] = h1;
        m_next[h1] = t0;
        m_face[t1] = fa;
        m_face[h1] = fb;
        m_face_he[fa] = h0;
        m_face_he[fb] = t0;
        if(m_vertex_he[p] == h0)
            m_vertex_he[p] = t1;
        if(m_vertex_he[q] == t0)
            m_vertex_he[q] = h1;

        ++m_edge_gen[e.index];
        ++m_face_gen[fa];
        ++m_face_gen[fb];

        rec.edge = edge(e.index);
        rec.new_radii = {circumradius_or_inf(triangle(fa)), circumradius_or_inf(triangle(fb))};
        return rec;
    }

    /// Face corner lists in face order.
    std::vector<std::array<Index, 3>> triangles() const
    {
        std::vector<std::array<Index, 3>> out(num_faces());
        for(Index f = 0; f < num_faces(); ++f)
        {
            const auto v = face_vertices(f);
            out[f] = {v[0].index, v[1].index, v[2].index};
        }
        return out;
    }

    /// Breaks the twin invariant on purpose; used to exercise validate().
    void set_twin_unchecked(HalfEdge h, HalfEdge t) { m_twin[h] = t; }

private:
    friend TriangleMesh build_mesh(std::span<const Point3>, std::span<const std::array<Index, 3>>);

    std::vector<Point3> m_positions;
    std::vector<std::optional<UnitVector3>> m_normals;
    std::vector<HalfEdge> m_vertex_he;

    std::vector<Index> m_origin;
    std::vector<HalfEdge> m_twin;
    std::vector<HalfEdge> m_next;
    std::vector<Index> m_face;
    std::vector<Index> m_edge_gen;

    std::vector<HalfEdge> m_face_he;
    std::vector<Index> m_face_gen;
};

namespace detail {

inline std::uint64_t pair_key(Index a, Index b)
{
    return (std::uint64_t(a) << 32) | std::uint64_t(b);
}

inline std::uint64_t undirected_key(Index a, Index b)
{
    return a < b ? pair_key(a, b) : pair_key(b, a);
}

inline std::string tri_string(const std::array<Index, 3>& t)
{
    return "(" + std::to_string(t[0]) + ", " + std::to_string(t[1]) + ", " + std::to_string(t[2]) +
           ")";
}

} // namespace detail

/// Builds a half-edge mesh. Rejects anything that is not a closed, consistently
/// oriented 2-manifold.
inline TriangleMesh build_mesh(std::span<const Point3> positions,
                               std::span<const std::array<Index, 3>> triangles)
{
    const std::size_t nv = positions.size();
    const std::size_t nf = triangles.size();
    if(nv >= kNoIndex || 3 * nf >= kNoIndex)
        throw MeshError(MeshErrorKind::IndexOutOfRange, "mesh too large");

    std::set<std::array<Index, 3>> faces_seen;
    std::unordered_map<std::uint64_t, int> undirected_count;
    undirected_count.reserve(3 * nf);
    for(const auto& t : triangles)
    {
        for(Index v : t)
            if(v >= nv)
                throw MeshError(MeshErrorKind::IndexOutOfRange,
                                "face " + detail::tri_string(t) + " references vertex " +
                                    std::to_string(v));
        if(t[0] == t[1] || t[1] == t[2] || t[2] == t[0])
            throw MeshError(MeshErrorKind::RepeatedVertex, "face " + detail::tri_string(t));
        auto s = t;
        std::sort(s.begin(), s.end());
        if(!faces_seen.insert(s).second)
            throw MeshError(MeshErrorKind::DuplicateFace, "face " + detail::tri_string(t));
        for(int i = 0; i < 3; ++i)
            ++undirected_count[detail::undirected_key(t[i], t[(i + 1) % 3])];
    }
    // Scan in face order so the reported edge does not depend on hashing.
    for(int pass = 0; pass < 2; ++pass)
        for(const auto& t : triangles)
            for(int i = 0; i < 3; ++i)
            {
                const Index a = t[i], b = t[(i + 1) % 3];
                const int count = undirected_count[detail::undirected_key(a, b)];
                auto edge = [&] { return "edge (" + std::to_string(a) + ", " + std::to_string(b) + ")"; };
                if(pass == 0 && count > 2)
                    throw MeshError(MeshErrorKind::NonManifoldEdge,
                                    edge() + " has " + std::to_string(count) + " incident faces");
                if(pass == 1 && count == 1)
                    throw MeshError(MeshErrorKind::OpenBoundary, edge() + " has a single incident face");
            }

    TriangleMesh m;
    m.m_positions.assign(positions.begin(), positions.end());
    m.m_normals.assign(nv, std::nullopt);
    m.m_vertex_he.assign(nv, kNoIndex);
    const std::size_t nh = 3 * nf;
    m.m_origin.assign(nh, kNoIndex);
    m.m_twin.assign(nh, kNoIndex);
    m.m_next.assign(nh, kNoIndex);
    m.m_face.assign(nh, kNoIndex);
    m.m_edge_gen.assign(nh / 2, 0);
    m.m_face_he.assign(nf, kNoIndex);
    m.m_face_gen.assign(nf, 0);

    // directed (a, b) -> half-edge
    std::unordered_map<std::uint64_t, HalfEdge> directed;
    directed.reserve(nh);
    Index next_edge = 0;
    for(Index f = 0; f < nf; ++f)
    {
        const auto& t = triangles[f];
        std::array<HalfEdge, 3> hs{};
        for(int i = 0; i < 3; ++i)
        {
            const Index a = t[i], b = t[(i + 1) % 3];
            if(directed.count(detail::pair_key(a, b)))
                throw MeshError(MeshErrorKind::InconsistentOrientation,
                                "directed edge (" + std::to_string(a) + ", " + std::to_string(b) +
                                    ") used by two faces");
            HalfEdge h;
            if(auto it = directed.find(detail::pair_key(b, a)); it != directed.end())
            {
                h = it->second ^ 1u;
                m.m_twin[h] = it->second;
                m.m_twin[it->second] = h;
            }
            else
            {
                h = 2 * next_edge++;
            }
            directed.emplace(detail::pair_key(a, b), h);
            m.m_origin[h] = a;
            m.m_face[h] = f;
            hs[i] = h;
            if(m.m_vertex_he[a] == kNoIndex)
                m.m_vertex_he[a] = h;
        }
        for(int i = 0; i < 3; ++i)
            m.m_next[hs[i]] = hs[(i + 1) % 3];
        m.m_face_he[f] = hs[0];
    }

    for(Index v = 0; v < nv; ++v)
    {
        if(m.m_vertex_he[v] == kNoIndex)
            throw MeshError(MeshErrorKind::UnreferencedVertex,
                            "vertex " + std::to_string(v) + " is not used by any face");
    }
    // A vertex whose faces form more than one fan is pinched.
    std::vector<std::size_t> outgoing(nv, 0);
    for(HalfEdge h = 0; h < nh; ++h)
        ++outgoing[m.m_origin[h]];
    for(Index v = 0; v < nv; ++v)
    {
        if(m.degree({v}) != outgoing[v])
            throw MeshError(MeshErrorKind::NonManifoldEdge,
                            "vertex " + std::to_string(v) + " has a non-disk neighborhood");
    }
    return m;
}

inline TriangleMesh build_mesh(const std::vector<Point3>& positions,
                               const std::vector<std::array<Index, 3>>& triangles)
{
    return build_mesh(std::span<const Point3>(positions),
                      std::span<const std::array<Index, 3>>(triangles));
}

/// For each edge of f (in face order), the apex of the face across it.
inline std::array<VertexHandle, 3> neighbor_vertices(const TriangleMesh& m, FaceHandle f)
{
    std::array<VertexHandle, 3> out;
    HalfEdge h = m.face_halfedge(f.index);
    for(int i = 0; i < 3; ++i, h = m.next(h))
        out[i] = m.origin(m.prev(m.twin(h)));
    return out;
}

struct Violation
{
    std::string kind;
    std::string detail;
};

/// Exhaustive structural check. Empty result iff every mesh invariant holds.
inline std::vector<Violation> validate(const TriangleMesh& m)
{
    std::vector<Violation> out;
    auto fail = [&](const char* kind, std::string detail) {
        out.push_back({kind, std::move(detail)});
    };
    const std::size_t nh = m.num_halfedges();
    const std::size_t nv = m.num_vertices();
    const std::size_t nf = m.num_faces();
    if(nh != 3 * nf)
        fail("count", "half-edge count is not three times the face count");

    bool links_ok = true;
    for(HalfEdge h = 0; h < nh; ++h)
    {
        const HalfEdge t = m.twin(h);
        const HalfEdge n = m.next(h);
        if(t >= nh || n >= nh || m.origin(h).index >= nv || m.face_of(h) >= nf)
        {
            fail("dangling", "half-edge " + std::to_string(h) + " has an out-of-range link");
            links_ok = false;
            continue;
        }
        if(t == h || m.twin(t) != h)
            fail("twin", "twin(twin(" + std::to_string(h) + ")) != " + std::to_string(h));
    }
    if(!links_ok)
        return out;

    for(HalfEdge h = 0; h < nh; ++h)
    {
        const HalfEdge t = m.twin(h);
        if(m.twin(t) == h && m.origin(t) != m.dest(h))
            fail("orientation",
                 "half-edge " + std::to_string(h) + " and its twin run in the same direction");
        if(m.next(m.next(m.next(h))) != h)
            fail("face_cycle", "next^3 != id at half-edge " + std::to_string(h));
        if(m.face_of(m.next(h)) != m.face_of(h))
            fail("face_cycle", "half-edge " + std::to_string(h) + " and its successor disagree on face");
    }
    for(Index f = 0; f < nf; ++f)
    {
        const HalfEdge h = m.face_halfedge(f);
        if(h >= nh || m.face_of(h) != f)
            fail("face", "face " + std::to_string(f) + " points at a foreign half-edge");
    }
    for(Index v = 0; v < nv; ++v)
    {
        const HalfEdge h = m.vertex_halfedge({v});
        if(h >= nh || m.origin(h).index != v)
            fail("vertex", "vertex " + std::to_string(v) + " points at a foreign half-edge");
    }
    if(!out.empty())
        return out;

    // Combinatorial simplicity.
    std::unordered_set<std::uint64_t> edges;
    for(Index e = 0; e < m.num_edges(); ++e)
    {
        const auto [a, b] = m.edge_vertices(e);
        if(a == b)
            fail("edge", "edge " + std::to_string(e) + " is a loop");
        else if(!edges.insert(detail::undirected_key(a.index, b.index)).second)
            fail("edge", "vertex pair (" + std::to_string(a.index) + ", " +
                             std::to_string(b.index) + ") joined by more than one edge");
    }
    std::set<std::array<Index, 3>> faces;
    for(Index f = 0; f < nf; ++f)
    {
        auto v = m.face_vertices(f);
        std::array<Index, 3> s{v[0].index, v[1].index, v[2].index};
        std::sort(s.begin(), s.end());
        if(s[0] == s[1] || s[1] == s[2])
            fail("face", "face " + std::to_string(f) + " repeats a vertex");
        if(!faces.insert(s).second)
            fail("face", "face " + std::to_string(f) + " duplicates another face's vertices");
    }

    // Vertex links are single cycles.
    std::vector<std::size_t> outgoing(nv, 0);
    for(HalfEdge h = 0; h < nh; ++h)
        ++outgoing[m.origin(h).index];
    for(Index v = 0; v < nv; ++v)
    {
        if(outgoing[v] == 0)
            fail("vertex", "vertex " + std::to_string(v) + " is isolated");
        else if(m.degree({v}) != outgoing[v])
            fail("vertex", "vertex " + std::to_string(v) + " has a non-disk neighborhood");
    }

    // Euler characteristic per connected component.
    std::vector<Index> parent(nf);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](Index x) {
        while(parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    for(HalfEdge h = 0; h < nh; ++h)
    {
        const Index a = find(m.face_of(h)), b = find(m.face_of(m.twin(h)));
        if(a != b)
            parent[a] = b;
    }
    std::map<Index, std::array<long long, 3>> vef;
    for(Index f = 0; f < nf; ++f)
        vef[find(f)][2] += 1;
    for(HalfEdge h = 0; h < nh; h += 2)
        vef[find(m.face_of(h))][1] += 1;
    for(Index v = 0; v < nv; ++v)
        vef[find(m.face_of(m.vertex_halfedge({v})))][0] += 1;
    for(const auto& [root, c] : vef)
    {
        const long long chi = c[0] - c[1] + c[2];
        if(chi > 2 || chi % 2 != 0)
            fail("euler", "component with V - E + F = " + std::to_string(chi) +
                              " is not a closed orientable surface");
    }
    return out;
}

/// Euler characteristic V - E + F of the whole mesh.
inline long long euler_characteristic(const TriangleMesh& m)
{
    return static_cast<long long>(m.num_vertices()) - static_cast<long long>(m.num_edges()) +
           static_cast<long long>(m.num_faces());
}

} // namespace flipmesh

#endif
