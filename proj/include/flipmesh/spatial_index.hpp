#ifndef FLIPMESH_SPATIAL_INDEX_HPP
#define FLIPMESH_SPATIAL_INDEX_HPP

#include "geometry.hpp"
#include "halfedge_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <unordered_map>
#include <vector>

namespace flipmesh {

/// Largest face circumradius; +inf if any face is degenerate.
inline double max_circumradius(const TriangleMesh& m)
{
    double r = 0;
    for(Index f = 0; f < m.num_faces(); ++f)
        r = std::max(r, circumradius_or_inf(m.triangle(f)));
    return r;
}

/// Uniform grid over the vertex bounding box, cell size twice the largest
/// circumradius it was built for. Vertices are stored cell-sorted (CSR), each
/// in exactly one cell. Vertices never move, so a grid built for a larger
/// radius stays correct; only its selectivity degrades.
class SpatialIndex
{
public:
    /// Upper bound on cells per vertex; the cell size grows to respect it.
    static constexpr double kMaxCellsPerVertex = 8.0;

    SpatialIndex() = default;
    SpatialIndex(std::span<const Point3> points, double max_radius) { build(points, max_radius); }
    explicit SpatialIndex(const TriangleMesh& m) { build(m.positions(), max_circumradius(m)); }

    void build(std::span<const Point3> points, double max_radius)
    {
        m_built_for = max_radius;
        m_lo = {std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
                std::numeric_limits<double>::max()};
        Point3 hi{-m_lo.x, -m_lo.y, -m_lo.z};
        for(const Point3& p : points)
        {
            m_lo = {std::min(m_lo.x, p.x), std::min(m_lo.y, p.y), std::min(m_lo.z, p.z)};
            hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
        }
        if(points.empty())
            m_lo = hi = {};
        const Vec3 extent = hi - m_lo;
        const double longest = std::max({extent.x, extent.y, extent.z, 1e-300});
        double cell = 2.0 * max_radius;
        if(!(cell > 0) || !std::isfinite(cell))
            cell = longest;
        const double budget = std::max(1.0, kMaxCellsPerVertex * double(points.size()));
        auto count_cells = [&](double c) {
            return (std::floor(extent.x / c) + 1) * (std::floor(extent.y / c) + 1) *
                   (std::floor(extent.z / c) + 1);
        };
        while(count_cells(cell) > budget)
            cell *= 1.25;
        m_cell = cell;
        m_dims = {static_cast<long>(std::floor(extent.x / cell)) + 1,
                  static_cast<long>(std::floor(extent.y / cell)) + 1,
                  static_cast<long>(std::floor(extent.z / cell)) + 1};
        const std::size_t ncells = std::size_t(m_dims[0] * m_dims[1] * m_dims[2]);

        std::vector<std::size_t> cell_of(points.size());
        m_start.assign(ncells + 1, 0);
        for(std::size_t i = 0; i < points.size(); ++i)
        {
            cell_of[i] = linear(coord(points[i]));
            ++m_start[cell_of[i] + 1];
        }
        for(std::size_t c = 0; c < ncells; ++c)
            m_start[c + 1] += m_start[c];
        m_ids.assign(points.size(), 0);
        std::vector<std::size_t> fill(m_start.begin(), m_start.end() - 1);
        for(std::size_t i = 0; i < points.size(); ++i)
            m_ids[fill[cell_of[i]]++] = Index(i);
    }

    /// Rebuilds once the largest circumradius has halved since the last build.
    bool refresh(std::span<const Point3> points, double current_max_radius)
    {
        if(current_max_radius > 0.5 * m_built_for)
            return false;
        build(points, current_max_radius);
        return true;
    }

    double cell_size() const { return m_cell; }
    double built_for_radius() const { return m_built_for; }
    std::size_t num_cells() const { return m_start.empty() ? 0 : m_start.size() - 1; }
    std::span<const Index> cell(std::size_t c) const
    {
        return {m_ids.data() + m_start[c], m_ids.data() + m_start[c + 1]};
    }

    /// Visits every vertex whose cell overlaps the bounding box of b: a
    /// superset of the vertices inside b.
    template <class Visit>
    void for_each_candidate(const Ball& b, Visit&& visit) const
    {
        if(m_ids.empty())
            return;
        long lo[3], hi[3];
        const double c[3] = {b.center.x - m_lo.x, b.center.y - m_lo.y, b.center.z - m_lo.z};
        for(int k = 0; k < 3; ++k)
        {
            lo[k] = std::max(0L, static_cast<long>(std::floor((c[k] - b.radius) / m_cell)));
            hi[k] = std::min(m_dims[k] - 1, static_cast<long>(std::floor((c[k] + b.radius) / m_cell)));
            if(lo[k] > hi[k])
                return;
        }
        for(long z = lo[2]; z <= hi[2]; ++z)
            for(long y = lo[1]; y <= hi[1]; ++y)
            {
                const std::size_t row = std::size_t((z * m_dims[1] + y) * m_dims[0]);
                const std::size_t b0 = m_start[row + lo[0]], b1 = m_start[row + hi[0] + 1];
                for(std::size_t i = b0; i < b1; ++i)
                    visit(m_ids[i]);
            }
    }

    std::vector<Index> query(const Ball& b) const
    {
        std::vector<Index> out;
        for_each_candidate(b, [&](Index v) { out.push_back(v); });
        return out;
    }

private:
    std::array<long, 3> coord(Point3 p) const
    {
        std::array<long, 3> c{static_cast<long>(std::floor((p.x - m_lo.x) / m_cell)),
                              static_cast<long>(std::floor((p.y - m_lo.y) / m_cell)),
                              static_cast<long>(std::floor((p.z - m_lo.z) / m_cell))};
        for(int k = 0; k < 3; ++k)
            c[k] = std::clamp(c[k], 0L, m_dims[k] - 1);
        return c;
    }
    std::size_t linear(const std::array<long, 3>& c) const
    {
        return std::size_t((c[2] * m_dims[1] + c[1]) * m_dims[0] + c[0]);
    }

    Point3 m_lo;
    double m_cell = 1;
    double m_built_for = 0;
    std::array<long, 3> m_dims{1, 1, 1};
    std::vector<std::size_t> m_start;
    std::vector<Index> m_ids;
};

/// Smallest distance between two distinct points. `cell` must be at least the
/// answer (any known pair distance works, e.g. the shortest mesh edge).
inline double closest_pair_distance(std::span<const Point3> pts, double cell)
{
    if(pts.size() < 2)
        return std::numeric_limits<double>::infinity();
    if(!(cell > 0))
        return 0;
    struct KeyHash
    {
        std::size_t operator()(const std::array<std::int64_t, 3>& k) const
        {
            std::uint64_t h = 1469598103934665603ull;
            for(auto v : k)
                h = (h ^ std::uint64_t(v)) * 1099511628211ull;
            return std::size_t(h);
        }
    };
    std::unordered_map<std::array<std::int64_t, 3>, std::vector<Index>, KeyHash> grid;
    grid.reserve(pts.size());
    auto key = [cell](Point3 p) {
        return std::array<std::int64_t, 3>{std::int64_t(std::floor(p.x / cell)),
                                           std::int64_t(std::floor(p.y / cell)),
                                           std::int64_t(std::floor(p.z / cell))};
    };
    for(Index i = 0; i < pts.size(); ++i)
        grid[key(pts[i])].push_back(i);
    double best2 = cell * cell;
    bool found = false;
    for(Index i = 0; i < pts.size(); ++i)
    {
        const auto k = key(pts[i]);
        for(std::int64_t dz = -1; dz <= 1; ++dz)
            for(std::int64_t dy = -1; dy <= 1; ++dy)
                for(std::int64_t dx = -1; dx <= 1; ++dx)
                {
                    auto it = grid.find({k[0] + dx, k[1] + dy, k[2] + dz});
                    if(it == grid.end())
                        continue;
                    for(Index j : it->second)
                    {
                        if(j <= i)
                            continue;
                        const double d2 = squared_distance(pts[i], pts[j]);
                        if(d2 <= best2)
                        {
                            best2 = d2;
                            found = true;
                        }
                    }
                }
    }
    return found ? std::sqrt(best2) : cell;
}

} // namespace flipmesh

#endif
