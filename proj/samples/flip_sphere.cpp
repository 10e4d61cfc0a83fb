// Perturb a dense sphere mesh, flip it back to Gabriel, and print what happened.

#include <flipmesh/flipmesh.hpp>

#include <cstdio>
#include <cstdlib>

using namespace flipmesh;

int main(int argc, char** argv)
{
    const double epsilon = argc > 1 ? std::atof(argv[1]) : 0.05;
    const std::size_t k = argc > 2 ? std::size_t(std::atol(argv[2])) : 20;

    const SurfaceModel sphere = SurfaceModel::sphere(1);
    const GeneratedMesh g = generate(sphere, {epsilon, 0, 7, k, 1});
    TriangleMesh m = g.perturbed;
    std::printf("level %zu: %zu vertices, %zu faces, %zu flippable edges\n", g.resolution, m.num_vertices(),
                m.num_faces(), flippable_edges(m).size());

    const FlipLog log = mesh_flip(m, {}, [](const FlipRecord& r) {
        std::printf("  flip (%u,%u) -> (%u,%u): max radius %.6f -> %.6f\n", r.pqrs[0], r.pqrs[1], r.pqrs[2],
                    r.pqrs[3], r.old_max(), r.new_max());
    });
    std::printf("%s after %llu flips\n", to_string(log.status), (unsigned long long)log.flips);

    const ConformanceReport gabriel = gabriel_check(m);
    const DensityReport d = density_report(m, sphere);
    std::printf("gabriel: %s, epsilon %.5f, delta %.4f, max dihedral %.4f rad\n", gabriel.pass() ? "yes" : "no",
                d.epsilon, d.delta, d.max_dihedral);
    return gabriel.pass() ? 0 : 1;
}
