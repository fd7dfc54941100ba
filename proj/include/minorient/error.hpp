#pragma once

#include <stdexcept>
#include <string>

namespace minorient {

enum class ErrorKind {
    // structural / precondition
    SelfEdge,
    ConflictingMarks,
    UnknownVertex,
    DuplicateVertex,
    InvalidToken,
    OverlappingSets,
    EmptySet,
    NotAncestral,
    NotBiDirected,
    NotAdjacent,
    HasBiDirectedEdge,
    OrderViolatesBoundaryOrder,
    VertexSetMismatch,
    TooLarge,
    IndexMismatch,
    NotInModelCone,
    SupportViolation,
    // input documents
    ParseError,
    AsymmetricMatrix,
    RaggedRows,
    // numerics
    NotPositiveDefinite,
    MaxIterExceeded,
};

const char* to_string(ErrorKind kind) noexcept;

/// Broad grouping used by the command-line front end to choose an exit code.
enum class ErrorCategory { Parse, Precondition, Numerical };

ErrorCategory category(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Parse failure with a 1-based source position.
class ParseError : public Error {
public:
    ParseError(ErrorKind kind, std::size_t line, std::size_t column, const std::string& message)
        : Error(kind, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

} // namespace minorient
