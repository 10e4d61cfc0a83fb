#ifndef FLIPMESH_FLIP_ENGINE_HPP
#define FLIPMESH_FLIP_ENGINE_HPP

#include "error.hpp"
#include "geometry.hpp"
#include "halfedge_mesh.hpp"
#include "stab_predicates.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <numbers>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace flipmesh {

enum class FlipMode
{
    full,         // flip edges incident to locally stabbed faces
    conservative, // flip edges incident to locally beta-stabbed faces
};

enum class FlipOrder
{
    largest_radius_first,
    fifo,
};

enum class FlipStatus
{
    converged,
    cap_reached,
    guard_stalled,
};

inline const char* to_string(FlipMode m) { return m == FlipMode::full ? "full" : "conservative"; }
inline const char* to_string(FlipOrder o)
{
    return o == FlipOrder::fifo ? "fifo" : "largest_radius_first";
}
inline const char* to_string(FlipStatus s)
{
    switch(s)
    {
    case FlipStatus::converged: return "converged";
    case FlipStatus::cap_reached: return "cap_reached";
    case FlipStatus::guard_stalled: return "guard_stalled";
    }
    return "?";
}

struct FlipConfig
{
    FlipMode mode = FlipMode::full;
    double beta = 0;                   // conservative mode only
    std::uint64_t max_flips = 0;       // 0 selects the default 10 * E^2
    bool monitor_lexicographic = true;
    double tolerance = kStabTolerance;
    FlipOrder order = FlipOrder::largest_radius_first;
    std::size_t debug_rescan_interval = 0; // 0 disables the periodic global cross-check
    bool keep_records = true;

    double effective_beta() const { return mode == FlipMode::full ? 0.0 : beta; }
};

struct FlipLog
{
    FlipStatus status = FlipStatus::converged;
    std::vector<FlipRecord> records;
    std::uint64_t flips = 0;
    std::uint64_t rejected_edge_exists = 0;
    std::uint64_t rejected_would_degenerate = 0;
    double max_dihedral = 0;             // largest pre-flip dihedral angle among executed flips
    std::uint64_t radius_lemma_checked = 0;   // flips with pre-flip dihedral < pi/2
    std::uint64_t radius_lemma_exceptions = 0;
    std::uint64_t max_radius_increases = 0;   // flips that raised the largest circumradius
    std::uint64_t monitor_checks = 0;
    double initial_max_radius = 0;
    double final_max_radius = 0;
    std::uint64_t max_flips = 0;
    FlipMode mode = FlipMode::full;
    double beta = 0;
    FlipOrder order = FlipOrder::largest_radius_first;
};

/// Thrown when a flip fails to decrease the sorted radius sequence
/// lexicographically.
class MonitorViolation : public Error
{
public:
    MonitorViolation(const FlipRecord& rec, std::uint64_t flip_number)
        : Error("flip #" + std::to_string(flip_number) + " of edge (" + std::to_string(rec.pqrs[0]) +
                ", " + std::to_string(rec.pqrs[1]) + ") -> (" + std::to_string(rec.pqrs[2]) + ", " +
                std::to_string(rec.pqrs[3]) + ") did not decrease the radius sequence: old radii " +
                std::to_string(rec.old_radii[0]) + ", " + std::to_string(rec.old_radii[1]) +
                "; new radii " + std::to_string(rec.new_radii[0]) + ", " +
                std::to_string(rec.new_radii[1])),
          record(rec), flip_number(flip_number)
    {}
    FlipRecord record;
    std::uint64_t flip_number;
};

/// Face circumradii sorted in descending order.
inline std::vector<double> radius_sequence(const TriangleMesh& m)
{
    std::vector<double> r(m.num_faces());
    for(Index f = 0; f < m.num_faces(); ++f)
        r[f] = circumradius_or_inf(m.triangle(f));
    std::sort(r.begin(), r.end(), std::greater<>());
    return r;
}

/// Strict lexicographic order on descending radius sequences.
inline bool lexicographically_smaller(const std::vector<double>& a, const std::vector<double>& b)
{
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

/// A flip swaps two radii for two others and leaves the rest of the sequence
/// alone, so the whole sorted sequence decreases iff the sorted new pair is
/// lexicographically below the sorted old pair.
inline bool flip_decreases_sequence(const FlipRecord& rec)
{
    const double o1 = rec.old_max(), o2 = std::min(rec.old_radii[0], rec.old_radii[1]);
    const double n1 = rec.new_max(), n2 = std::min(rec.new_radii[0], rec.new_radii[1]);
    return n1 < o1 || (n1 == o1 && n2 < o2);
}

/// Radius-decrease bound checked for flips whose faces meet at a dihedral
/// angle below pi/2.
inline constexpr double kRadiusLemmaSlack = 1e-9;

inline bool satisfies_radius_bound(const FlipRecord& rec)
{
    return rec.new_max() <= rec.old_max() * (1.0 + kRadiusLemmaSlack);
}

namespace detail {

class EdgeQueue
{
public:
    EdgeQueue(FlipOrder order, std::size_t num_edges) : m_order(order), m_stamp(num_edges, 0) {}

    void push(Index e, double key)
    {
        const std::uint32_t stamp = ++m_stamp[e];
        if(m_order == FlipOrder::fifo)
            m_fifo.push_back({key, m_seq++, e, stamp});
        else
            m_heap.push({key, m_seq++, e, stamp});
    }

    /// Next live entry, or kNoIndex when exhausted.
    Index pop()
    {
        while(!empty_raw())
        {
            Entry top;
            if(m_order == FlipOrder::fifo)
            {
                top = m_fifo.front();
                m_fifo.pop_front();
            }
            else
            {
                top = m_heap.top();
                m_heap.pop();
            }
            if(top.stamp != m_stamp[top.edge])
                continue;
            ++m_stamp[top.edge];
            return top.edge;
        }
        return kNoIndex;
    }

private:
    struct Entry
    {
        double key;
        std::uint64_t seq;
        Index edge;
        std::uint32_t stamp;
        bool operator<(const Entry& o) const
        {
            if(key != o.key)
                return key < o.key; // max-heap on key
            return seq > o.seq;
        }
    };
    bool empty_raw() const { return m_order == FlipOrder::fifo ? m_fifo.empty() : m_heap.empty(); }

    FlipOrder m_order;
    std::vector<std::uint32_t> m_stamp;
    std::deque<Entry> m_fifo;
    std::priority_queue<Entry> m_heap;
    std::uint64_t m_seq = 0;
};

} // namespace detail

/// MeshFlip: repeatedly flips an edge whose opposite apex stabs (the
/// beta-lens of) an incident face until none is left, the flip budget runs
/// out, or every remaining candidate is refused by the topology/degeneracy
/// guards. `on_flip` sees each record as it happens.
inline FlipLog mesh_flip(TriangleMesh& m, const FlipConfig& cfg,
                         const std::function<void(const FlipRecord&)>& on_flip = {})
{
    if(cfg.beta < 0)
        throw Error("beta must be nonnegative");
    const double beta = cfg.effective_beta();
    const double tau = cfg.tolerance;
    const std::size_t ne = m.num_edges();

    FlipLog log;
    log.mode = cfg.mode;
    log.beta = beta;
    log.order = cfg.order;
    log.max_flips = cfg.max_flips ? cfg.max_flips : 10ull * ne * ne;

    std::vector<double> face_radius(m.num_faces());
    for(Index f = 0; f < m.num_faces(); ++f)
        face_radius[f] = circumradius_or_inf(m.triangle(f));
    std::multiset<double> radii;
    if(cfg.monitor_lexicographic)
        radii.insert(face_radius.begin(), face_radius.end());
    log.initial_max_radius = face_radius.empty() ? 0 : *std::max_element(face_radius.begin(), face_radius.end());

    detail::EdgeQueue queue(cfg.order, ne);
    std::vector<char> in_queue(ne, 0);
    std::vector<char> rejected(ne, 0);
    // Edges refused with EdgeExists, keyed by the vertex pair that blocked them.
    std::unordered_map<std::uint64_t, std::vector<Index>> blocked_by;

    auto edge_key = [&](Index e) {
        const auto [fa, fb] = m.edge_faces(e);
        return std::max(face_radius[fa], face_radius[fb]);
    };
    auto consider = [&](Index e) {
        if(is_flippable(m, e, beta, tau))
        {
            queue.push(e, edge_key(e));
            in_queue[e] = 1;
        }
        else
        {
            in_queue[e] = 0;
        }
    };

    for(Index e = 0; e < ne; ++e)
        consider(e);

    auto rescan = [&] {
        for(Index e = 0; e < ne; ++e)
            if(is_flippable(m, e, beta, tau) && !in_queue[e] && !rejected[e])
                throw std::logic_error("flippable edge " + std::to_string(e) +
                                       " missing from the work queue");
    };

    for(;;)
    {
        const Index e = queue.pop();
        if(e == kNoIndex)
            break;
        in_queue[e] = 0;
        if(!is_flippable(m, e, beta, tau))
            continue;

        const FlipRejection why = m.check_flip(m.edge(e));
        if(why != FlipRejection::None)
        {
            rejected[e] = 1;
            if(why == FlipRejection::EdgeExists)
            {
                ++log.rejected_edge_exists;
                const auto [r, s] = m.opposite_vertices(e);
                blocked_by[detail::undirected_key(r.index, s.index)].push_back(e);
            }
            else
            {
                ++log.rejected_would_degenerate;
            }
            continue;
        }
        if(log.flips >= log.max_flips)
        {
            log.status = FlipStatus::cap_reached;
            break;
        }

        const auto [p, q] = m.edge_vertices(e);
        const auto [fa, fb] = m.edge_faces(e);
        const std::array<double, 2> cached_old{face_radius[fa], face_radius[fb]};
        const FlipRecord rec = m.flip_edge(m.edge(e));
        rejected[e] = 0;
        ++log.flips;
        face_radius[fa] = rec.new_radii[0];
        face_radius[fb] = rec.new_radii[1];

        if(rec.dihedral_before == rec.dihedral_before)
            log.max_dihedral = std::max(log.max_dihedral, rec.dihedral_before);
        if(rec.dihedral_before < std::numbers::pi / 2)
        {
            ++log.radius_lemma_checked;
            if(!satisfies_radius_bound(rec))
                ++log.radius_lemma_exceptions;
        }
        if(cfg.monitor_lexicographic)
        {
            ++log.monitor_checks;
            const double before = *radii.rbegin();
            for(double r : cached_old)
                radii.erase(radii.find(r));
            radii.insert(rec.new_radii.begin(), rec.new_radii.end());
            if(*radii.rbegin() > before)
                ++log.max_radius_increases;
            if(!flip_decreases_sequence(rec))
            {
                log.records.push_back(rec);
                throw MonitorViolation(rec, log.flips);
            }
        }
        if(cfg.keep_records)
            log.records.push_back(rec);
        if(on_flip)
            on_flip(rec);

        // Only edges whose incident faces changed can change status.
        const HalfEdge h0 = 2 * e;
        for(HalfEdge h : {h0, m.next(h0), m.prev(h0), m.next(m.twin(h0)), m.prev(m.twin(h0))})
            consider(TriangleMesh::edge_of(h));

        if(auto it = blocked_by.find(detail::undirected_key(p.index, q.index)); it != blocked_by.end())
        {
            for(Index b : it->second)
                if(rejected[b])
                {
                    rejected[b] = 0;
                    consider(b);
                }
            blocked_by.erase(it);
        }

        if(cfg.debug_rescan_interval && log.flips % cfg.debug_rescan_interval == 0)
            rescan();
    }

    if(log.status != FlipStatus::cap_reached)
    {
        for(Index e = 0; e < ne; ++e)
            if(rejected[e] && is_flippable(m, e, beta, tau))
            {
                log.status = FlipStatus::guard_stalled;
                break;
            }
    }
    log.final_max_radius = face_radius.empty() ? 0 : *std::max_element(face_radius.begin(), face_radius.end());
    return log;
}

inline FlipLog mesh_flip_conservative(TriangleMesh& m, double beta, FlipConfig cfg = {},
                                      const std::function<void(const FlipRecord&)>& on_flip = {})
{
    cfg.mode = FlipMode::conservative;
    cfg.beta = beta;
    return mesh_flip(m, cfg, on_flip);
}

} // namespace flipmesh

#endif
