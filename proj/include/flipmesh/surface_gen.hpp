#ifndef FLIPMESH_SURFACE_GEN_HPP
#define FLIPMESH_SURFACE_GEN_HPP

#include "error.hpp"
#include "geometry.hpp"
#include "halfedge_mesh.hpp"
#include "spatial_index.hpp"
#include "stab_predicates.hpp"
#include "surface.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <unordered_map>
#include <vector>

namespace flipmesh {

struct GenSpec
{
    double epsilon = 0.05;
    double delta = 0;           // 0 disables the uniformity floor
    std::uint64_t seed = 0;
    std::size_t perturb_flips = 0;
    double grading = 1;         // torus only: widest / narrowest u-spacing
};

/// Result of one generation run. `resolution` is the icosphere level for the
/// sphere and the u-count for the torus.
struct GeneratedMesh
{
    TriangleMesh mesh;
    TriangleMesh perturbed;
    std::vector<FlipRecord> perturbation;
    std::size_t resolution = 0;
    std::size_t v_count = 0;
};

struct PerturbResult
{
    TriangleMesh mesh;
    std::vector<FlipRecord> records;
};

/// Applies k flips, each keeping both new circumradii <= max_radius and
/// leaving a locally stabbed face behind. Candidates are visited once in a
/// seeded random order; a flip is skipped when it touches a vertex of an
/// earlier perturbation so perturbations stay independent.
inline PerturbResult perturb_anti_delaunay(const TriangleMesh& m, std::size_t k, std::uint64_t seed,
                                           double max_radius)
{
    PerturbResult out{m, {}};
    if(k == 0)
        return out;
    TriangleMesh& w = out.mesh;
    std::vector<Index> order(w.num_edges());
    for(Index e = 0; e < order.size(); ++e)
        order[e] = e;
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<char> used(w.num_vertices(), 0);
    for(Index e : order)
    {
        const auto [p, q] = w.edge_vertices(e);
        const auto [r, s] = w.opposite_vertices(e);
        if(used[p.index] || used[q.index] || used[r.index] || used[s.index])
            continue;
        if(w.check_flip(w.edge(e)) != FlipRejection::None)
            continue;
        const double ra = circumradius_or_inf({w.position(s), w.position(r), w.position(p)});
        const double rb = circumradius_or_inf({w.position(r), w.position(s), w.position(q)});
        if(!(ra <= max_radius && rb <= max_radius))
            continue;
        if(!flip_creates_local_stab(w, e))
            continue;
        out.records.push_back(w.flip_edge(w.edge(e)));
        for(VertexHandle v : {p, q, r, s})
            used[v.index] = 1;
        if(out.records.size() == k)
            return out;
    }
    throw CannotPerturb("found " + std::to_string(out.records.size()) + " of " + std::to_string(k) +
                        " eligible flips");
}

namespace detail {

struct RawMesh
{
    std::vector<Point3> positions;
    std::vector<std::array<Index, 3>> triangles;
};

/// Uniform random rotation (unit quaternion from three uniforms).
inline std::array<Vec3, 3> random_rotation(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const double u1 = U(rng), u2 = U(rng), u3 = U(rng);
    const double a = std::sqrt(1 - u1), b = std::sqrt(u1);
    const double tau = 2 * std::numbers::pi;
    const double w = a * std::sin(tau * u2), x = a * std::cos(tau * u2);
    const double y = b * std::sin(tau * u3), z = b * std::cos(tau * u3);
    return {Vec3{1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)},
            Vec3{2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)},
            Vec3{2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)}};
}

inline RawMesh icosahedron(const std::array<Vec3, 3>& rot)
{
    const double phi = std::numbers::phi;
    const Vec3 base[12] = {{-1, phi, 0}, {1, phi, 0},  {-1, -phi, 0}, {1, -phi, 0},
                           {0, -1, phi}, {0, 1, phi},  {0, -1, -phi}, {0, 1, -phi},
                           {phi, 0, -1}, {phi, 0, 1},  {-phi, 0, -1}, {-phi, 0, 1}};
    RawMesh raw;
    for(const Vec3& v : base)
    {
        const Vec3 u = v / norm(v);
        raw.positions.push_back({dot(rot[0], u), dot(rot[1], u), dot(rot[2], u)});
    }
    raw.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                     {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                     {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                     {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
    for(auto& t : raw.triangles)
    {
        const Point3 a = raw.positions[t[0]], b = raw.positions[t[1]], c = raw.positions[t[2]];
        if(dot(cross(b - a, c - a), a.as_vector() + b.as_vector() + c.as_vector()) < 0)
            std::swap(t[1], t[2]);
    }
    return raw;
}

inline RawMesh subdivide(const RawMesh& in, const SurfaceModel& surf)
{
    RawMesh out{in.positions, {}};
    out.triangles.reserve(4 * in.triangles.size());
    std::unordered_map<std::uint64_t, Index> mid;
    auto midpoint_of = [&](Index a, Index b) {
        const auto key = undirected_key(a, b);
        if(auto it = mid.find(key); it != mid.end())
            return it->second;
        const Index id = Index(out.positions.size());
        out.positions.push_back(surf.project(midpoint(in.positions[a], in.positions[b])));
        mid.emplace(key, id);
        return id;
    };
    for(const auto& [a, b, c] : in.triangles)
    {
        const Index ab = midpoint_of(a, b), bc = midpoint_of(b, c), ca = midpoint_of(c, a);
        out.triangles.push_back({a, ab, ca});
        out.triangles.push_back({ab, b, bc});
        out.triangles.push_back({ca, bc, c});
        out.triangles.push_back({ab, bc, ca});
    }
    return out;
}

inline double max_radius_of(const RawMesh& raw)
{
    double r = 0;
    for(const auto& t : raw.triangles)
        r = std::max(r, circumradius_or_inf({raw.positions[t[0]], raw.positions[t[1]], raw.positions[t[2]]}));
    return r;
}

/// Graded torus grid. The u-parameter follows u(s) = 2pi (s + a sin(2pi s) / 2pi)
/// with a = (g - 1) / (g + 1), so the widest u-step is g times the narrowest.
inline RawMesh torus_grid(const SurfaceModel& surf, std::size_t nu, std::size_t nv, double grading,
                          double u_phase, double v_phase)
{
    const double two_pi = 2 * std::numbers::pi;
    const double a = (grading - 1) / (grading + 1);
    RawMesh raw;
    raw.positions.reserve(nu * nv);
    for(std::size_t i = 0; i < nu; ++i)
    {
        const double s = double(i) / double(nu);
        const double u = two_pi * s + a * std::sin(two_pi * s) + u_phase;
        for(std::size_t j = 0; j < nv; ++j)
            raw.positions.push_back(surf.torus_point(u, two_pi * double(j) / double(nv) + v_phase));
    }
    auto id = [nu, nv](std::size_t i, std::size_t j) { return Index((i % nu) * nv + (j % nv)); };
    raw.triangles.reserve(2 * nu * nv);
    for(std::size_t i = 0; i < nu; ++i)
        for(std::size_t j = 0; j < nv; ++j)
        {
            const Index p00 = id(i, j), p10 = id(i + 1, j), p11 = id(i + 1, j + 1), p01 = id(i, j + 1);
            auto rho = [&](Index x, Index y, Index z) {
                return circumradius_or_inf({raw.positions[x], raw.positions[y], raw.positions[z]});
            };
            const double d0 = std::max(rho(p00, p10, p11), rho(p00, p11, p01));
            const double d1 = std::max(rho(p00, p10, p01), rho(p10, p11, p01));
            if(d1 < d0 * (1 - 1e-12))
            {
                raw.triangles.push_back({p00, p10, p01});
                raw.triangles.push_back({p10, p11, p01});
            }
            else
            {
                raw.triangles.push_back({p00, p10, p11});
                raw.triangles.push_back({p00, p11, p01});
            }
        }
    return raw;
}

inline TriangleMesh finish(const RawMesh& raw, const SurfaceModel& surf)
{
    TriangleMesh m = build_mesh(raw.positions, raw.triangles);
    for(Index v = 0; v < m.num_vertices(); ++v)
        m.set_normal({v}, surf.normal(m.position({v})));
    return m;
}

inline double min_edge_length(const TriangleMesh& m)
{
    double d = std::numeric_limits<double>::infinity();
    for(Index e = 0; e < m.num_edges(); ++e)
    {
        const auto [a, b] = m.edge_vertices(e);
        d = std::min(d, distance(m.position(a), m.position(b)));
    }
    return d;
}

/// Uniformity is measured against the achieved density: the mesh is
/// (rho_max / reach, delta)-dense when no two vertices are within delta * rho_max.
inline void require_uniform(const TriangleMesh& m, const GenSpec& spec)
{
    if(spec.delta <= 0)
        return;
    const double floor = spec.delta * max_circumradius(m);
    const double closest = closest_pair_distance(m.positions(), min_edge_length(m));
    if(!(closest > floor))
        throw UnachievableSpec("closest vertex pair " + std::to_string(closest) +
                               " does not exceed delta * max circumradius = " + std::to_string(floor));
}

inline void validate_spec(const GenSpec& spec)
{
    if(!(spec.epsilon > 0) || !std::isfinite(spec.epsilon))
        throw UnachievableSpec("epsilon must be positive");
    if(!(spec.delta >= 0))
        throw UnachievableSpec("delta must be nonnegative");
    if(spec.delta >= 1)
        throw UnachievableSpec("delta must be below 1");
    if(!(spec.grading >= 1) || !std::isfinite(spec.grading))
        throw UnachievableSpec("grading must be at least 1");
}

/// Tries to perturb; false when the mesh lacks room for k flips.
inline bool try_perturb(GeneratedMesh& g, const SurfaceModel& surf, const GenSpec& spec)
{
    try
    {
        auto p = perturb_anti_delaunay(g.mesh, spec.perturb_flips, spec.seed ^ 0x5bd1e995ull,
                                       spec.epsilon * surf.reach());
        g.perturbed = std::move(p.mesh);
        g.perturbation = std::move(p.records);
        return true;
    }
    catch(const CannotPerturb&)
    {
        return false;
    }
}

inline constexpr std::size_t kMaxSphereLevel = 8;
inline constexpr int kMaxTorusSteps = 200;

inline GeneratedMesh generate_sphere(const SurfaceModel& surf, const GenSpec& spec)
{
    std::mt19937_64 rng(spec.seed);
    RawMesh raw = icosahedron(random_rotation(rng));
    for(auto& p : raw.positions)
        p = Point3{} + p.as_vector() * surf.major_radius();
    const double target = spec.epsilon * surf.reach();
    for(std::size_t level = 0;; ++level)
    {
        if(max_radius_of(raw) <= target)
        {
            GeneratedMesh g{finish(raw, surf), {}, {}, level, 0};
            if(try_perturb(g, surf, spec))
            {
                require_uniform(g.perturbed, spec);
                return g;
            }
        }
        if(level == kMaxSphereLevel)
            throw UnachievableSpec("sphere needs more than " + std::to_string(kMaxSphereLevel) +
                                   " subdivision levels");
        raw = subdivide(raw, surf);
    }
}

inline GeneratedMesh generate_torus(const SurfaceModel& surf, const GenSpec& spec)
{
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const double R = surf.major_radius(), r = surf.minor_radius();
    const double target = spec.epsilon * surf.reach();
    const double two_pi = 2 * std::numbers::pi;
    // Start from square cells whose diagonal is the target diameter; the
    // widest u-step sits on the outer equator.
    const double side = target * std::numbers::sqrt2;
    const double a = (spec.grading - 1) / (spec.grading + 1);
    double nu = std::ceil(two_pi * (R + r) * (1 + a) / side);
    double nv = std::ceil(two_pi * r / side);
    const double u_phase = U(rng) * two_pi, v_phase = U(rng) * two_pi;
    for(int step = 0; step < kMaxTorusSteps; ++step)
    {
        const std::size_t iu = std::max<std::size_t>(3, std::size_t(nu));
        const std::size_t iv = std::max<std::size_t>(3, std::size_t(nv));
        RawMesh raw = torus_grid(surf, iu, iv, spec.grading, u_phase / double(iu), v_phase / double(iv));
        if(max_radius_of(raw) <= target)
        {
            GeneratedMesh g{finish(raw, surf), {}, {}, iu, iv};
            if(try_perturb(g, surf, spec))
            {
                require_uniform(g.perturbed, spec);
                return g;
            }
        }
        nu = std::ceil(nu * 1.05);
        nv = std::ceil(nv * 1.05);
    }
    throw UnachievableSpec("torus grid did not meet the density target");
}

} // namespace detail

/// Builds an (epsilon, delta)-dense mesh of `surf` and, when spec.perturb_flips
/// is positive, its perturbation. With k > 0 the resolution is the smallest
/// that both meets epsilon and leaves room for k density-preserving flips.
inline GeneratedMesh generate(const SurfaceModel& surf, const GenSpec& spec)
{
    detail::validate_spec(spec);
    GeneratedMesh g = surf.kind() == SurfaceKind::sphere ? detail::generate_sphere(surf, spec)
                                                         : detail::generate_torus(surf, spec);
    return g;
}

inline TriangleMesh make_dense_mesh(const SurfaceModel& surf, const GenSpec& spec)
{
    return generate(surf, spec).mesh;
}

inline PerturbResult make_perturbed_mesh(const SurfaceModel& surf, const GenSpec& spec)
{
    GeneratedMesh g = generate(surf, spec);
    return {std::move(g.perturbed), std::move(g.perturbation)};
}

} // namespace flipmesh

#endif
