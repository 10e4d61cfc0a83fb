#ifndef FLIPMESH_TOOLS_CLI_HPP
#define FLIPMESH_TOOLS_CLI_HPP

#include <flipmesh/flipmesh.hpp>
#include <flipmesh/report_io.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

namespace flipmesh::cli {

enum ExitCode
{
    kOk = 0,
    kCheckFailed = 1,
    kUsage = 2,
    kRuntime = 3,
};

/// Flag values that fail semantic validation (after CLI11 parsing).
class UsageError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

inline SurfaceModel parse_surface(const std::string& s)
{
    const auto colon = s.find(':');
    if(colon == std::string::npos)
        throw UsageError("--surface expects sphere:R or torus:R,r");
    const std::string kind = s.substr(0, colon);
    const std::string args = s.substr(colon + 1);
    auto number = [&](const std::string& t) {
        std::size_t used = 0;
        double v = 0;
        try
        {
            v = std::stod(t, &used);
        }
        catch(const std::exception&)
        {
            used = 0;
        }
        if(used != t.size() || t.empty() || !std::isfinite(v))
            throw UsageError("bad number '" + t + "' in --surface");
        return v;
    };
    try
    {
        if(kind == "sphere")
            return SurfaceModel::sphere(number(args));
        if(kind == "torus")
        {
            const auto comma = args.find(',');
            if(comma == std::string::npos)
                throw UsageError("--surface torus expects torus:R,r");
            return SurfaceModel::torus(number(args.substr(0, comma)), number(args.substr(comma + 1)));
        }
    }
    catch(const InvalidSurface& e)
    {
        throw UsageError(e.what());
    }
    throw UsageError("unknown surface kind '" + kind + "'");
}

/// 2 sin(24 epsilon): the uniformity threshold paired with epsilon in the
/// Gabriel convergence theorem.
inline double auto_delta(double epsilon) { return 2 * std::sin(24 * epsilon); }

/// Writes to a sibling temporary and renames it into place.
inline void write_atomic(const std::string& path, const std::string& text)
{
    const std::string tmp = path + ".tmp";
    write_text_file(tmp, text);
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if(ec)
        throw Error("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
}

inline MeshFormat output_format(const std::string& flag, const std::string& path)
{
    if(flag == "off")
        return MeshFormat::off;
    if(flag == "obj")
        return MeshFormat::obj;
    return format_from_path(path).value_or(MeshFormat::off);
}

inline std::string render(const nlohmann::ordered_json& j, const std::string& log)
{
    return log == "json" ? j.dump() + "\n" : to_text(j);
}

inline TriangleMesh load(const std::string& path)
{
    return read_mesh(path).to_mesh();
}

struct Options
{
    std::string surface;
    double epsilon = 0;
    std::string delta = "0";
    std::uint64_t seed = 0;
    std::size_t perturb = 0;
    double grading = 1;
    std::optional<double> gamma;
    double beta = 0;
    double alpha = 0;
    std::string mode = "full";
    std::uint64_t max_flips = 0;
    std::string monitor = "on";
    std::string order = "largest";
    std::string in, out;
    std::string format = "auto";
    std::string log = "text";
    std::string log_file;
    std::string report;
    std::string summary;
    double tolerance = kStabTolerance;
};

inline int cmd_generate(const Options& o, std::ostream& out)
{
    const SurfaceModel surf = parse_surface(o.surface);
    if(!(o.epsilon > 0) || !std::isfinite(o.epsilon))
        throw UsageError("--epsilon must be positive");
    if(!(o.grading >= 1))
        throw UsageError("--grading must be at least 1");
    double delta = 0;
    if(o.delta == "auto")
    {
        delta = auto_delta(o.epsilon);
        if(!(delta >= 0 && delta < 1))
            throw UnachievableSpec("--delta auto gives 2 sin(24 epsilon) = " + detail::fmt(delta) +
                                   ", which is not below 1; use epsilon < pi/144");
    }
    else
    {
        std::size_t used = 0;
        try
        {
            delta = std::stod(o.delta, &used);
        }
        catch(const std::exception&)
        {
            used = 0;
        }
        if(used != o.delta.size() || !(delta >= 0) || !(delta < 1))
            throw UsageError("--delta must be 'auto' or a number in [0, 1)");
    }
    if(o.out.empty())
        throw UsageError("--out is required");

    GenSpec spec{o.epsilon, delta, o.seed, o.perturb, o.grading};
    GeneratedMesh g = generate(surf, spec);
    write_atomic(o.out, format_mesh(g.perturbed, output_format(o.format, o.out)));

    nlohmann::ordered_json rep = to_json(density_report(g.perturbed, surf, o.gamma));
    rep["surface"] = surf.describe();
    rep["target_epsilon"] = o.epsilon;
    rep["target_delta"] = delta;
    rep["seed"] = o.seed;
    rep["perturb_flips"] = g.perturbation.size();
    rep["resolution"] = g.resolution;
    const std::string text = render(rep, o.log);
    if(!o.report.empty())
        write_atomic(o.report, text);
    out << text;
    return kOk;
}

inline int cmd_flip(const Options& o, std::ostream& out)
{
    if(o.in.empty() || o.out.empty())
        throw UsageError("--in and --out are required");
    if(!(o.beta >= 0))
        throw UsageError("--beta must be nonnegative");
    FlipConfig cfg;
    cfg.mode = o.mode == "conservative" ? FlipMode::conservative : FlipMode::full;
    if(cfg.mode == FlipMode::conservative && !(o.beta > 0))
        throw UsageError("--mode conservative needs --beta > 0");
    cfg.beta = o.beta;
    cfg.max_flips = o.max_flips;
    cfg.monitor_lexicographic = o.monitor == "on";
    cfg.order = o.order == "fifo" ? FlipOrder::fifo : FlipOrder::largest_radius_first;
    cfg.tolerance = o.tolerance;
    cfg.keep_records = false;

    TriangleMesh m = load(o.in);
    std::ofstream log_file;
    if(!o.log_file.empty())
    {
        log_file.open(o.log_file, std::ios::trunc);
        if(!log_file)
            throw Error("cannot open '" + o.log_file + "' for writing");
    }
    std::ostream& stream = o.log_file.empty() ? out : log_file;
    std::uint64_t n = 0;
    auto on_flip = [&](const FlipRecord& r) {
        ++n;
        if(o.log == "json")
        {
            auto j = to_json(r);
            j["flip"] = n;
            stream << j.dump() << '\n';
        }
        else
        {
            stream << to_text(r, n);
        }
        stream.flush();
    };

    const MeshFormat fmt = output_format(o.format, o.out);
    FlipLog log;
    try
    {
        log = mesh_flip(m, cfg, on_flip);
    }
    catch(const MonitorViolation&)
    {
        write_atomic(o.out + ".partial", format_mesh(m, fmt));
        throw;
    }
    const bool done = log.status == FlipStatus::converged;
    write_atomic(done ? o.out : o.out + ".partial", format_mesh(m, fmt));

    nlohmann::ordered_json j = to_json(log);
    j["output"] = done ? o.out : o.out + ".partial";
    const std::string text = render(j, o.log);
    if(!o.summary.empty())
        write_atomic(o.summary, text);
    out << text;
    return done ? kOk : kRuntime;
}

inline int cmd_check(const Options& o, std::ostream& out)
{
    if(o.in.empty())
        throw UsageError("--in is required");
    if(!(o.alpha >= 0))
        throw UsageError("--alpha must be nonnegative");
    const TriangleMesh m = load(o.in);
    const ConformanceReport rep = alpha_gabriel_check(m, o.alpha, o.tolerance);
    const std::string text = render(to_json(rep), o.log);
    if(!o.report.empty())
        write_atomic(o.report, text);
    out << text;
    return rep.pass() ? kOk : kCheckFailed;
}

inline int cmd_report(const Options& o, std::ostream& out)
{
    if(o.in.empty())
        throw UsageError("--in is required");
    const SurfaceModel surf = parse_surface(o.surface);
    if(o.gamma && !(*o.gamma > 0))
        throw UsageError("--gamma must be positive");
    const TriangleMesh m = load(o.in);
    const DensityReport d = density_report(m, surf, o.gamma);
    const NormalBoundAudit a = normal_bound_audit(m, surf, o.gamma);
    nlohmann::ordered_json j;
    j["type"] = "report";
    j["surface"] = surf.describe();
    j["density"] = to_json(d);
    j["normal_bounds"] = to_json(a);
    std::string text;
    if(o.log == "json")
        text = j.dump() + "\n";
    else
        text = to_text(to_json(d)) + to_text(to_json(a));
    if(!o.report.empty())
        write_atomic(o.report, text);
    out << text;
    const bool ok = d.orientation_consistent && (!a.applicable || a.pass());
    return ok ? kOk : kCheckFailed;
}

/// Runs one invocation; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Edge-flip remeshing toward Gabriel triangulations of sampled surfaces", "flipmesh"};
    app.require_subcommand(1);
    Options o;
    const std::vector<std::string> logs{"json", "text"};

    auto* gen = app.add_subcommand("generate", "Generate a dense mesh of an analytic surface");
    gen->add_option("--surface", o.surface, "sphere:R or torus:R,r")->required();
    gen->add_option("--epsilon", o.epsilon, "Target circumradius / reach")->required();
    gen->add_option("--delta", o.delta, "Uniformity floor in [0,1) or 'auto'");
    gen->add_option("--seed", o.seed, "Random seed");
    gen->add_option("--perturb", o.perturb, "Number of stab-creating flips to apply");
    gen->add_option("--grading", o.grading, "Torus u-spacing ratio (>= 1)");
    gen->add_option("--gamma", o.gamma, "Reach override for the report");
    gen->add_option("--out", o.out, "Output mesh path")->required();
    gen->add_option("--format", o.format, "off, obj or auto")->check(CLI::IsMember({"off", "obj", "auto"}));
    gen->add_option("--log", o.log, "Report format")->check(CLI::IsMember(logs));
    gen->add_option("--report", o.report, "Also write the report here");

    auto* flip = app.add_subcommand("flip", "Run MeshFlip on a mesh");
    flip->add_option("--in", o.in, "Input mesh")->required();
    flip->add_option("--out", o.out, "Output mesh")->required();
    flip->add_option("--mode", o.mode, "full or conservative")->check(CLI::IsMember({"full", "conservative"}));
    flip->add_option("--beta", o.beta, "Lens offset for conservative mode");
    flip->add_option("--max-flips", o.max_flips, "Flip budget (0 = 10 E^2)");
    flip->add_option("--monitor", o.monitor, "Lexicographic radius monitor")->check(CLI::IsMember({"on", "off"}));
    flip->add_option("--order", o.order, "largest or fifo")->check(CLI::IsMember({"largest", "fifo"}));
    flip->add_option("--tolerance", o.tolerance, "Relative stab tolerance")->check(CLI::NonNegativeNumber);
    flip->add_option("--format", o.format, "off, obj or auto")->check(CLI::IsMember({"off", "obj", "auto"}));
    flip->add_option("--log", o.log, "Record and summary format")->check(CLI::IsMember(logs));
    flip->add_option("--log-file", o.log_file, "Stream flip records here instead of stdout");
    flip->add_option("--summary", o.summary, "Also write the summary here");

    auto* check = app.add_subcommand("check", "Gabriel / alpha-Gabriel conformance");
    check->add_option("--in", o.in, "Input mesh")->required();
    check->add_option("--alpha", o.alpha, "Shrink amount (0 = Gabriel)");
    check->add_option("--tolerance", o.tolerance, "Relative tolerance")->check(CLI::NonNegativeNumber);
    check->add_option("--log", o.log, "Report format")->check(CLI::IsMember(logs));
    check->add_option("--report", o.report, "Also write the report here");

    auto* report = app.add_subcommand("report", "Density report and normal-bound audit");
    report->add_option("--in", o.in, "Input mesh")->required();
    report->add_option("--surface", o.surface, "sphere:R or torus:R,r")->required();
    report->add_option("--gamma", o.gamma, "Reach override");
    report->add_option("--log", o.log, "Report format")->check(CLI::IsMember(logs));
    report->add_option("--report", o.report, "Also write the report here");

    try
    {
        app.parse(argc, argv);
    }
    catch(const CLI::ParseError& e)
    {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try
    {
        if(gen->parsed())
            return cmd_generate(o, out);
        if(flip->parsed())
            return cmd_flip(o, out);
        if(check->parsed())
            return cmd_check(o, out);
        return cmd_report(o, out);
    }
    catch(const UsageError& e)
    {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    }
    catch(const std::exception& e)
    {
        err << "error: " << e.what() << "\n";
        return kRuntime;
    }
}

} // namespace flipmesh::cli

#endif
