#ifndef FLIPMESH_ERROR_HPP
#define FLIPMESH_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace flipmesh {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class DegenerateTriangle : public Error
{
public:
    DegenerateTriangle() : Error("degenerate triangle (area below threshold)") {}
};

class NegativeRadius : public Error
{
public:
    NegativeRadius() : Error("shrink amount exceeds ball radius") {}
};

class CoincidentCenters : public Error
{
public:
    CoincidentCenters() : Error("bisector undefined for coincident ball centers") {}
};

enum class MeshErrorKind
{
    IndexOutOfRange,
    RepeatedVertex,
    UnreferencedVertex,
    DuplicateFace,
    NonManifoldEdge,
    InconsistentOrientation,
    OpenBoundary,
};

inline const char* to_string(MeshErrorKind kind)
{
    switch(kind)
    {
    case MeshErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case MeshErrorKind::RepeatedVertex: return "RepeatedVertex";
    case MeshErrorKind::UnreferencedVertex: return "UnreferencedVertex";
    case MeshErrorKind::DuplicateFace: return "DuplicateFace";
    case MeshErrorKind::NonManifoldEdge: return "NonManifoldEdge";
    case MeshErrorKind::InconsistentOrientation: return "InconsistentOrientation";
    case MeshErrorKind::OpenBoundary: return "OpenBoundary";
    }
    return "?";
}

/// Raised by build_mesh when the input is not a closed oriented 2-manifold.
class MeshError : public Error
{
public:
    MeshError(MeshErrorKind kind, const std::string& what)
        : Error(std::string(to_string(kind)) + ": " + what), m_kind(kind)
    {}
    MeshErrorKind kind() const noexcept { return m_kind; }

private:
    MeshErrorKind m_kind;
};

enum class FlipRejection
{
    None,
    EdgeExists,
    WouldDegenerate,
    InvalidHandle,
};

inline const char* to_string(FlipRejection r)
{
    switch(r)
    {
    case FlipRejection::None: return "None";
    case FlipRejection::EdgeExists: return "EdgeExists";
    case FlipRejection::WouldDegenerate: return "WouldDegenerate";
    case FlipRejection::InvalidHandle: return "InvalidHandle";
    }
    return "?";
}

class FlipError : public Error
{
public:
    explicit FlipError(FlipRejection reason)
        : Error(std::string("edge flip rejected: ") + to_string(reason)), m_reason(reason)
    {}
    FlipRejection reason() const noexcept { return m_reason; }

private:
    FlipRejection m_reason;
};

class InvalidSurface : public Error
{
public:
    using Error::Error;
};

class VertexOffSurface : public Error
{
public:
    VertexOffSurface(std::size_t vertex, double distance)
        : Error("vertex " + std::to_string(vertex) + " is " + std::to_string(distance) +
                " away from the reference surface"),
          vertex(vertex), distance(distance)
    {}
    std::size_t vertex;
    double distance;
};

class UnachievableSpec : public Error
{
public:
    using Error::Error;
};

class CannotPerturb : public Error
{
public:
    using Error::Error;
};

class ParseError : public Error
{
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                what),
          line(line), column(column)
    {}
    std::size_t line;
    std::size_t column;
};

class NonTriangleFace : public ParseError
{
public:
    NonTriangleFace(std::size_t line, std::size_t column, std::size_t corners)
        : ParseError("face with " + std::to_string(corners) + " corners (only triangles are "
                     "accepted)", line, column)
    {}
};

class IndexOutOfRange : public ParseError
{
public:
    using ParseError::ParseError;
};

} // namespace flipmesh

#endif
