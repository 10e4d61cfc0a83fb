#ifndef FLIPMESH_TESTS_FIXTURES_HPP
#define FLIPMESH_TESTS_FIXTURES_HPP

#include <flipmesh/flipmesh.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace fixtures {

using namespace flipmesh;

inline TriangleMesh tetrahedron()
{
    const std::vector<Point3> p{{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
    return build_mesh(p, {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}});
}

/// Regular octahedron inscribed in the unit sphere; vertex 4 is +z.
inline std::vector<Point3> octahedron_points()
{
    return {{1, 0, 0}, {0, 1, 0}, {-1, 0, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
}

inline std::vector<std::array<Index, 3>> octahedron_faces()
{
    return {{0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}, {1, 0, 5}, {2, 1, 5}, {3, 2, 5}, {0, 3, 5}};
}

inline TriangleMesh octahedron() { return build_mesh(octahedron_points(), octahedron_faces()); }

/// Octahedron with its top vertex pulled down to height z; below 1 it sits
/// inside the diametric balls of the lower faces.
inline TriangleMesh pulled_octahedron(double z)
{
    auto p = octahedron_points();
    p[4] = {0, 0, z};
    return build_mesh(p, octahedron_faces());
}

/// Closed convex mesh containing the planar quad p=(0,0,0), q=(1,0,0),
/// r=(0.5,0.8,0), s=(0.5,-0.1,0) as faces pqr (index 20) and qps (index 21).
/// Only these two faces are locally stabbed; flipping pq leaves a Gabriel mesh.
struct QuadFixture
{
    static constexpr Index p = 0, q = 1, r = 2, s = 3;
    static constexpr Index face_pqr = 20, face_qps = 21;

    static std::vector<Point3> points()
    {
        return {{0.0, 0.0, 0.0},
                {1.0, 0.0, 0.0},
                {0.5, 0.8, 0.0},
                {0.5, -0.1, 0.0},
                {1.115931, 1.531918, -0.844403},
                {0.024147, 1.440992, -1.019261},
                {-0.788889, 0.771751, -1.108496},
                {-0.846911, -0.080333, -1.147282},
                {-0.115931, -1.097542, -1.023487},
                {0.975853, -1.39271, -1.108064},
                {1.788889, -0.418817, -0.985838},
                {1.846911, 0.842477, -0.924587},
                {0.5, 0.35, -4.041634}};
    }

    static std::vector<std::array<Index, 3>> faces()
    {
        return {{6, 12, 7}, {6, 5, 12}, {6, 7, 0},  {8, 0, 7},  {8, 7, 12},  {8, 12, 9},
                {10, 11, 1}, {10, 1, 9}, {10, 12, 11}, {10, 9, 12}, {3, 9, 1},  {3, 8, 9},
                {3, 0, 8},  {2, 5, 6},  {2, 6, 0},  {2, 1, 11}, {4, 2, 11}, {4, 5, 2},
                {4, 11, 12}, {4, 12, 5}, {0, 1, 2},  {1, 0, 3}};
    }

    static TriangleMesh mesh() { return build_mesh(points(), faces()); }

    /// Edge index of pq in m.
    static Index edge_pq(const TriangleMesh& m)
    {
        for(Index e = 0; e < m.num_edges(); ++e)
        {
            const auto [a, b] = m.edge_vertices(e);
            if((a.index == p && b.index == q) || (a.index == q && b.index == p))
                return e;
        }
        return kNoIndex;
    }
};

/// Hand-rolled generators for property tests.
class Gen
{
public:
    explicit Gen(std::uint64_t seed) : m_rng(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(m_rng); }
    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(m_rng); }
    std::uint64_t raw() { return m_rng(); }

    Point3 point(double extent = 10) { return {uniform(-extent, extent), uniform(-extent, extent), uniform(-extent, extent)}; }
    Vec3 vector(double extent = 10) { return point(extent).as_vector(); }

    Triangle triangle(double extent = 10)
    {
        for(;;)
        {
            Triangle t{point(extent), point(extent), point(extent)};
            if(!is_degenerate(t) && aspect_ratio(t) < 20)
                return t;
        }
    }

    Vec3 unit_vector()
    {
        for(;;)
        {
            const Vec3 v = vector(1);
            const double n = norm(v);
            if(n > 0.1 && n <= 1)
                return v / n;
        }
    }

    /// Sphere or torus mesh with random epsilon in [lo, hi) and optional
    /// perturbation.
    GeneratedMesh surface_mesh(bool torus, double epsilon, std::size_t perturb)
    {
        const SurfaceModel s = torus ? SurfaceModel::torus(2, 0.5) : SurfaceModel::sphere(1);
        GenSpec spec{epsilon, 0, raw(), perturb, torus ? 1.5 : 1.0};
        return generate(s, spec);
    }

    std::mt19937_64& engine() { return m_rng; }

private:
    std::mt19937_64 m_rng;
};

/// Random flips accepted only when check_flip allows them.
inline std::size_t random_legal_flips(TriangleMesh& m, std::size_t count, Gen& g)
{
    std::size_t done = 0;
    for(std::size_t attempt = 0; attempt < 20 * count && done < count; ++attempt)
    {
        const EdgeHandle e = m.edge(Index(g.index(m.num_edges())));
        if(m.check_flip(e) == FlipRejection::None)
        {
            m.flip_edge(e);
            ++done;
        }
    }
    return done;
}

inline std::filesystem::path temp_dir(const std::string& name)
{
    const char* base = std::getenv("FLIPMESH_TEST_TMP");
    std::filesystem::path dir = base ? std::filesystem::path(base) : std::filesystem::temp_directory_path() / "flipmesh_tests";
    dir /= name;
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace fixtures

#endif
