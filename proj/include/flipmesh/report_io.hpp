#ifndef FLIPMESH_REPORT_IO_HPP
#define FLIPMESH_REPORT_IO_HPP

#include "analysis.hpp"
#include "flip_engine.hpp"
#include "halfedge_mesh.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <string>

namespace flipmesh {

namespace detail {

/// JSON has no infinities or NaN; they become null.
inline nlohmann::ordered_json real(double v)
{
    return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

inline std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace detail

inline nlohmann::ordered_json to_json(const DensityReport& r)
{
    return {{"type", "density"},
            {"epsilon", detail::real(r.epsilon)},
            {"delta", detail::real(r.delta)},
            {"max_aspect_ratio", detail::real(r.max_aspect_ratio)},
            {"max_dihedral", detail::real(r.max_dihedral)},
            {"max_normal_angle", detail::real(r.max_normal_angle)},
            {"orientation_consistent", r.orientation_consistent},
            {"gamma_used", detail::real(r.gamma_used)},
            {"max_circumradius", detail::real(r.max_circumradius)},
            {"min_vertex_distance", detail::real(r.min_vertex_distance)},
            {"max_surface_distance", detail::real(r.max_surface_distance)},
            {"vertices", r.num_vertices},
            {"faces", r.num_faces}};
}

inline nlohmann::ordered_json to_json(const ConformanceReport& r)
{
    nlohmann::ordered_json v = nlohmann::ordered_json::array();
    for(const auto& x : r.violations)
        v.push_back({{"face", x.face}, {"witness", x.witness}, {"depth", detail::real(x.depth)}});
    return {{"type", "conformance"},
            {"mode", to_string(r.mode)},
            {"alpha", detail::real(r.alpha)},
            {"pass", r.pass()},
            {"faces_checked", r.faces_checked},
            {"faces_vacuous", r.faces_vacuous},
            {"violations", v}};
}

inline nlohmann::ordered_json to_json(const NormalBoundAudit& a)
{
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for(const auto& c : a.checks)
        checks.push_back({{"name", c.name},
                          {"observed", detail::real(c.observed)},
                          {"bound", detail::real(c.bound)},
                          {"pass", c.pass}});
    return {{"type", "normal_bounds"},
            {"epsilon", detail::real(a.epsilon)},
            {"applicable", a.applicable},
            {"pass", a.pass()},
            {"checks", checks}};
}

inline nlohmann::ordered_json to_json(const FlipRecord& r)
{
    return {{"edge", r.edge.index},
            {"p", r.pqrs[0]},
            {"q", r.pqrs[1]},
            {"r", r.pqrs[2]},
            {"s", r.pqrs[3]},
            {"old_radii", {detail::real(r.old_radii[0]), detail::real(r.old_radii[1])}},
            {"new_radii", {detail::real(r.new_radii[0]), detail::real(r.new_radii[1])}},
            {"dihedral_before", detail::real(r.dihedral_before)}};
}

/// Summary fields of a flip run; records are streamed separately.
inline nlohmann::ordered_json to_json(const FlipLog& log)
{
    return {{"type", "flip_summary"},
            {"status", to_string(log.status)},
            {"mode", to_string(log.mode)},
            {"beta", detail::real(log.beta)},
            {"order", to_string(log.order)},
            {"flips", log.flips},
            {"max_flips", log.max_flips},
            {"rejected_edge_exists", log.rejected_edge_exists},
            {"rejected_would_degenerate", log.rejected_would_degenerate},
            {"max_dihedral", detail::real(log.max_dihedral)},
            {"radius_lemma_checked", log.radius_lemma_checked},
            {"radius_lemma_exceptions", log.radius_lemma_exceptions},
            {"max_radius_increases", log.max_radius_increases},
            {"monitor_checks", log.monitor_checks},
            {"initial_max_radius", detail::real(log.initial_max_radius)},
            {"final_max_radius", detail::real(log.final_max_radius)}};
}

inline std::string to_text(const FlipRecord& r, std::uint64_t n)
{
    return "flip " + std::to_string(n) + " edge " + std::to_string(r.edge.index) + " (" +
           std::to_string(r.pqrs[0]) + "," + std::to_string(r.pqrs[1]) + ")->(" +
           std::to_string(r.pqrs[2]) + "," + std::to_string(r.pqrs[3]) + ") old " +
           detail::fmt(r.old_radii[0]) + " " + detail::fmt(r.old_radii[1]) + " new " +
           detail::fmt(r.new_radii[0]) + " " + detail::fmt(r.new_radii[1]) + " dihedral " +
           detail::fmt(r.dihedral_before) + "\n";
}

/// One "key value" line per scalar field, violations and checks as indented
/// rows.
inline std::string to_text(const nlohmann::ordered_json& j, const std::string& indent = "")
{
    std::string out;
    for(auto it = j.begin(); it != j.end(); ++it)
    {
        const auto& v = it.value();
        if(v.is_array())
        {
            out += indent + it.key() + " " + std::to_string(v.size()) + "\n";
            for(const auto& row : v)
                out += indent + "  " + row.dump() + "\n";
        }
        else if(v.is_number_float())
        {
            out += indent + it.key() + " " + detail::fmt(v.get<double>()) + "\n";
        }
        else if(v.is_string())
        {
            out += indent + it.key() + " " + v.get<std::string>() + "\n";
        }
        else
        {
            out += indent + it.key() + " " + v.dump() + "\n";
        }
    }
    return out;
}

} // namespace flipmesh

#endif
