#ifndef SMALLPOLY_ERRORS_HPP
#define SMALLPOLY_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace smallpoly {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A polygon violates one of the ConvexPolygon invariants.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Argument outside the domain of a closed-form construction (e.g. n < 3).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Diameter graph does not have the odd-cycle-plus-pendants shape.
class StructureError : public Error {
public:
    enum class Kind { EdgeCount, CycleCount, EvenCycle, DeepPendant };

    StructureError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

inline const char* to_string(StructureError::Kind k) {
    switch (k) {
    case StructureError::Kind::EdgeCount: return "edge-count";
    case StructureError::Kind::CycleCount: return "cycle-count";
    case StructureError::Kind::EvenCycle: return "even-cycle";
    case StructureError::Kind::DeepPendant: return "deep-pendant";
    }
    return "unknown";
}

/// Angle configuration whose cycle does not close.
class InfeasibilityError : public Error {
public:
    using Error::Error;
};

/// Chained unit vectors do not land in convex position.
class RealizationError : public Error {
public:
    using Error::Error;
};

/// star_init could not produce a convex start for the requested topology.
class ConstructionError : public Error {
public:
    using Error::Error;
};

/// Non-finite value in an objective or gradient evaluation.
class NumericError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, int line, int field)
        : Error(what + " (line " + std::to_string(line) + ", field " + std::to_string(field) + ")"),
          line_(line), field_(field) {}

    int line() const noexcept { return line_; }
    int field() const noexcept { return field_; }

private:
    int line_;
    int field_;
};

/// Well-formed input whose contents break the polygon file schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

} // namespace smallpoly

#endif // SMALLPOLY_ERRORS_HPP
