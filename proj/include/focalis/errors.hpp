#pragma once

#include <stdexcept>
#include <string>

namespace focalis {

// Coarse classification used by the CLI to pick an exit code.
enum class ErrorCategory { Parse, Geometry, Io };

class Error : public std::runtime_error {
public:
    Error(ErrorCategory cat, const std::string& what) : std::runtime_error(what), cat_(cat) {}
    ErrorCategory category() const { return cat_; }

private:
    ErrorCategory cat_;
};

struct DivisionByZeroJet : Error {
    explicit DivisionByZeroJet(const std::string& w = "jet division by zero constant term")
        : Error(ErrorCategory::Geometry, w) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& w) : Error(ErrorCategory::Geometry, w) {}
};

struct CompositionOffsetError : Error {
    explicit CompositionOffsetError(const std::string& w = "jet composition requires zero inner constant term")
        : Error(ErrorCategory::Geometry, w) {}
};

struct NotInvertibleJet : Error {
    explicit NotInvertibleJet(const std::string& w = "jet reversion requires nonzero linear coefficient")
        : Error(ErrorCategory::Geometry, w) {}
};

struct InsufficientOrder : Error {
    explicit InsufficientOrder(const std::string& w) : Error(ErrorCategory::Geometry, w) {}
};

class ParseError : public Error {
public:
    ParseError(int line, int col, const std::string& what)
        : Error(ErrorCategory::Parse,
                "parse error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + what),
          line_(line),
          col_(col) {}
    int line() const { return line_; }
    int col() const { return col_; }

private:
    int line_;
    int col_;
};

struct DimensionError : Error {
    explicit DimensionError(const std::string& w, ErrorCategory cat = ErrorCategory::Geometry)
        : Error(cat, w) {}
};

struct UnknownBuiltin : Error {
    explicit UnknownBuiltin(const std::string& name)
        : Error(ErrorCategory::Parse, "unknown builtin curve: " + name) {}
};

struct SingularParametrization : Error {
    explicit SingularParametrization(const std::string& w) : Error(ErrorCategory::Geometry, w) {}
};

struct NotGoodCurve : Error {
    explicit NotGoodCurve(const std::string& w) : Error(ErrorCategory::Geometry, w) {}
};

struct FlatteningPoint : Error {
    explicit FlatteningPoint(const std::string& w = "osculating hypersphere center is at infinity (flattening)")
        : Error(ErrorCategory::Geometry, w) {}
};

struct IllConditionedSystem : Error {
    explicit IllConditionedSystem(const std::string& w) : Error(ErrorCategory::Geometry, w) {}
};

struct CurvatureZero : Error {
    explicit CurvatureZero(const std::string& w) : Error(ErrorCategory::Geometry, w) {}
};

struct VertexPoint : Error {
    explicit VertexPoint(const std::string& w = "focal curve is stationary here (vertex), frame undefined")
        : Error(ErrorCategory::Geometry, w) {}
};

struct IoError : Error {
    explicit IoError(const std::string& w) : Error(ErrorCategory::Io, w) {}
};

}  // namespace focalis
