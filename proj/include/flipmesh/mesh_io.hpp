#ifndef FLIPMESH_MESH_IO_HPP
#define FLIPMESH_MESH_IO_HPP

#include "error.hpp"
#include "geometry.hpp"
#include "halfedge_mesh.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace flipmesh {

enum class MeshFormat
{
    off,
    obj,
};

inline const char* to_string(MeshFormat f) { return f == MeshFormat::off ? "off" : "obj"; }

/// Raw file contents with 0-based indices; feed to build_mesh.
struct MeshFile
{
    MeshFormat format = MeshFormat::off;
    std::vector<Point3> positions;
    std::vector<std::array<Index, 3>> triangles;

    TriangleMesh to_mesh() const { return build_mesh(positions, triangles); }
};

namespace detail {

struct Token
{
    std::string_view text;
    std::size_t column = 0; // 1-based
};

inline std::vector<Token> tokenize(std::string_view line)
{
    std::vector<Token> out;
    std::size_t i = 0;
    while(i < line.size())
    {
        while(i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
            ++i;
        if(i >= line.size() || line[i] == '#')
            break;
        const std::size_t b = i;
        while(i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#')
            ++i;
        out.push_back({line.substr(b, i - b), b + 1});
    }
    return out;
}

inline double parse_real(const Token& t, std::size_t line)
{
    double v = 0;
    const char* b = t.text.data();
    const char* e = b + t.text.size();
    if(b != e && *b == '+')
        ++b;
    const auto [p, ec] = std::from_chars(b, e, v);
    if(ec != std::errc() || p != e)
        throw ParseError("expected a number, found '" + std::string(t.text) + "'", line, t.column);
    if(!std::isfinite(v))
        throw ParseError("non-finite coordinate '" + std::string(t.text) + "'", line, t.column);
    return v;
}

inline long long parse_integer(std::string_view s, const Token& t, std::size_t line)
{
    long long v = 0;
    const char* b = s.data();
    const char* e = b + s.size();
    const auto [p, ec] = std::from_chars(b, e, v);
    if(ec != std::errc() || p != e || s.empty())
        throw ParseError("expected an integer, found '" + std::string(t.text) + "'", line, t.column);
    return v;
}

inline std::vector<std::string_view> split_lines(std::string_view text)
{
    std::vector<std::string_view> lines;
    std::size_t b = 0;
    while(b <= text.size())
    {
        std::size_t e = text.find('\n', b);
        if(e == std::string_view::npos)
            e = text.size();
        lines.push_back(text.substr(b, e - b));
        b = e + 1;
    }
    return lines;
}

inline void append_real(std::string& out, double v)
{
    char buf[32];
    const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
    out.append(buf, std::size_t(n));
}

} // namespace detail

inline MeshFile parse_off(std::string_view text)
{
    MeshFile mf;
    mf.format = MeshFormat::off;
    const auto lines = detail::split_lines(text);
    std::size_t ln = 0;
    // Next line with content; returns its tokens and sets ln to its 1-based number.
    std::size_t cursor = 0;
    auto next_tokens = [&]() -> std::vector<detail::Token> {
        while(cursor < lines.size())
        {
            auto toks = detail::tokenize(lines[cursor++]);
            ln = cursor;
            if(!toks.empty())
                return toks;
        }
        throw ParseError("unexpected end of file", lines.size(), 1);
    };

    auto toks = next_tokens();
    if(toks[0].text != "OFF")
        throw ParseError("expected 'OFF' header", ln, toks[0].column);
    if(toks.size() == 1)
        toks = next_tokens();
    else
        toks.erase(toks.begin());
    if(toks.size() != 3)
        throw ParseError("expected vertex, face and edge counts", ln, toks[0].column);
    const long long nv = detail::parse_integer(toks[0].text, toks[0], ln);
    const long long nf = detail::parse_integer(toks[1].text, toks[1], ln);
    if(nv < 0 || nf < 0 || nv >= kNoIndex || nf >= kNoIndex)
        throw ParseError("counts out of range", ln, toks[0].column);

    mf.positions.reserve(std::size_t(nv));
    for(long long i = 0; i < nv; ++i)
    {
        toks = next_tokens();
        if(toks.size() != 3)
            throw ParseError("expected 3 coordinates, found " + std::to_string(toks.size()), ln,
                             toks[std::min<std::size_t>(toks.size(), 3) - 1].column);
        mf.positions.push_back({detail::parse_real(toks[0], ln), detail::parse_real(toks[1], ln),
                                detail::parse_real(toks[2], ln)});
    }
    mf.triangles.reserve(std::size_t(nf));
    for(long long i = 0; i < nf; ++i)
    {
        toks = next_tokens();
        const long long n = detail::parse_integer(toks[0].text, toks[0], ln);
        if(n != 3)
            throw NonTriangleFace(ln, toks[0].column, std::size_t(std::max(0LL, n)));
        if(toks.size() < 4)
            throw ParseError("face lists fewer indices than its count", ln, toks.back().column);
        std::array<Index, 3> t{};
        for(int k = 0; k < 3; ++k)
        {
            const auto& tok = toks[std::size_t(k) + 1];
            const long long idx = detail::parse_integer(tok.text, tok, ln);
            if(idx < 0 || idx >= nv)
                throw IndexOutOfRange("vertex index " + std::to_string(idx) + " out of range", ln,
                                      tok.column);
            t[std::size_t(k)] = Index(idx);
        }
        // Trailing tokens after the three indices are per-face colors.
        mf.triangles.push_back(t);
    }
    while(cursor < lines.size())
    {
        toks = detail::tokenize(lines[cursor++]);
        if(!toks.empty())
            throw ParseError("unexpected content after the last face", cursor, toks[0].column);
    }
    return mf;
}

inline MeshFile parse_obj(std::string_view text)
{
    MeshFile mf;
    mf.format = MeshFormat::obj;
    struct Pending
    {
        long long idx;
        std::size_t line, column;
    };
    std::vector<std::array<Pending, 3>> faces;
    const auto lines = detail::split_lines(text);
    for(std::size_t i = 0; i < lines.size(); ++i)
    {
        const std::size_t ln = i + 1;
        const auto toks = detail::tokenize(lines[i]);
        if(toks.empty())
            continue;
        const auto key = toks[0].text;
        if(key == "v")
        {
            if(toks.size() != 4 && toks.size() != 5)
                throw ParseError("vertex needs 3 coordinates", ln, toks[0].column);
            mf.positions.push_back({detail::parse_real(toks[1], ln), detail::parse_real(toks[2], ln),
                                    detail::parse_real(toks[3], ln)});
        }
        else if(key == "f")
        {
            if(toks.size() != 4)
                throw NonTriangleFace(ln, toks[0].column, toks.size() - 1);
            std::array<Pending, 3> f{};
            for(int k = 0; k < 3; ++k)
            {
                const auto& tok = toks[std::size_t(k) + 1];
                const auto slash = tok.text.find('/');
                const long long raw = detail::parse_integer(tok.text.substr(0, slash), tok, ln);
                // Negative indices count back from the latest vertex.
                const long long idx = raw < 0 ? (long long)mf.positions.size() + raw : raw - 1;
                if(raw == 0 || idx < 0)
                    throw IndexOutOfRange("vertex index " + std::to_string(raw) + " out of range", ln,
                                          tok.column);
                f[std::size_t(k)] = {idx, ln, tok.column};
            }
            faces.push_back(f);
        }
        else if(key == "vn" || key == "vt" || key == "g" || key == "o" || key == "s" ||
                key == "usemtl" || key == "mtllib" || key == "l" || key == "vp")
        {
            continue;
        }
        else
        {
            throw ParseError("unknown record '" + std::string(key) + "'", ln, toks[0].column);
        }
    }
    mf.triangles.reserve(faces.size());
    for(const auto& f : faces)
    {
        std::array<Index, 3> t{};
        for(int k = 0; k < 3; ++k)
        {
            const auto& p = f[std::size_t(k)];
            if(p.idx >= (long long)mf.positions.size())
                throw IndexOutOfRange("vertex index " + std::to_string(p.idx + 1) + " out of range",
                                      p.line, p.column);
            t[std::size_t(k)] = Index(p.idx);
        }
        mf.triangles.push_back(t);
    }
    return mf;
}

inline std::string format_off(std::span<const Point3> positions,
                              std::span<const std::array<Index, 3>> triangles)
{
    std::string out = "OFF\n" + std::to_string(positions.size()) + " " +
                      std::to_string(triangles.size()) + " 0\n";
    for(const Point3& p : positions)
    {
        detail::append_real(out, p.x);
        out += ' ';
        detail::append_real(out, p.y);
        out += ' ';
        detail::append_real(out, p.z);
        out += '\n';
    }
    for(const auto& t : triangles)
        out += "3 " + std::to_string(t[0]) + " " + std::to_string(t[1]) + " " + std::to_string(t[2]) + "\n";
    return out;
}

inline std::string format_obj(std::span<const Point3> positions,
                              std::span<const std::array<Index, 3>> triangles)
{
    std::string out;
    for(const Point3& p : positions)
    {
        out += "v ";
        detail::append_real(out, p.x);
        out += ' ';
        detail::append_real(out, p.y);
        out += ' ';
        detail::append_real(out, p.z);
        out += '\n';
    }
    for(const auto& t : triangles)
        out += "f " + std::to_string(t[0] + 1) + " " + std::to_string(t[1] + 1) + " " +
               std::to_string(t[2] + 1) + "\n";
    return out;
}

inline std::string format_mesh(const TriangleMesh& m, MeshFormat f)
{
    const auto tris = m.triangles();
    return f == MeshFormat::off ? format_off(m.positions(), tris) : format_obj(m.positions(), tris);
}

inline MeshFile parse_mesh(std::string_view text, MeshFormat f)
{
    return f == MeshFormat::off ? parse_off(text) : parse_obj(text);
}

/// Format from the file extension (.off or .obj, case-insensitive).
inline std::optional<MeshFormat> format_from_path(const std::string& path)
{
    const auto dot = path.rfind('.');
    if(dot == std::string::npos)
        return std::nullopt;
    std::string ext = path.substr(dot + 1);
    for(char& c : ext)
        c = char(std::tolower(static_cast<unsigned char>(c)));
    if(ext == "off")
        return MeshFormat::off;
    if(ext == "obj")
        return MeshFormat::obj;
    return std::nullopt;
}

inline std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if(!in)
        throw Error("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if(!out)
        throw Error("cannot open '" + path + "' for writing");
    out.write(text.data(), std::streamsize(text.size()));
    if(!out)
        throw Error("failed writing '" + path + "'");
}

inline MeshFile read_mesh(const std::string& path, std::optional<MeshFormat> format = std::nullopt)
{
    const auto f = format ? format : format_from_path(path);
    if(!f)
        throw Error("cannot tell the mesh format of '" + path + "'; use .off or .obj");
    return parse_mesh(read_text_file(path), *f);
}

inline void write_mesh(const TriangleMesh& m, const std::string& path, MeshFormat format)
{
    write_text_file(path, format_mesh(m, format));
}

} // namespace flipmesh

#endif
