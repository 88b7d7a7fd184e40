#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace superfg {

enum class ErrorKind {
    CatalogMismatch,
    NotInvertible,
    ParityError,
    JetOrderOverflow,
    DimensionMismatch,
    WrongSector,
    NormalCheckFailed,
    StructuralFailure,
    CommutationScreen,
    SyntaxError,
    UnknownGenerator,
    UnknownScenario,
    InsufficientUnits,
    ZeroBodyDivision,
    ConfigError,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

// `which` names the offending object, e.g. "g" or "b" for curvature errors.
class NotInvertible : public Error {
public:
    NotInvertible(std::string which, const std::string& what)
        : Error(ErrorKind::NotInvertible, what), which_(std::move(which)) {}
    const std::string& which() const { return which_; }

private:
    std::string which_;
};

// An error tied to a position in model-file text.
class LocatedError : public Error {
public:
    LocatedError(ErrorKind kind, int line, int col, const std::string& what)
        : Error(kind, "line " + std::to_string(line) + ", col " + std::to_string(col) + ": " + what),
          line_(line), col_(col) {}
    int line() const { return line_; }
    int col() const { return col_; }

private:
    int line_, col_;
};

class SyntaxError : public LocatedError {
public:
    SyntaxError(int line, int col, const std::string& what, std::vector<std::string> expected = {})
        : LocatedError(ErrorKind::SyntaxError, line, col, what + expected_suffix(expected)),
          expected_(std::move(expected)) {}
    const std::vector<std::string>& expected() const { return expected_; }

private:
    static std::string expected_suffix(const std::vector<std::string>& e) {
        if (e.empty()) return "";
        std::string s = " (expected ";
        for (size_t k = 0; k < e.size(); ++k) s += (k ? ", " : "") + e[k];
        return s + ")";
    }
    std::vector<std::string> expected_;
};

} // namespace superfg
