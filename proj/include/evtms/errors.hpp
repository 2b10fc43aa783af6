#ifndef EVTMS_ERRORS_HPP
#define EVTMS_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace evtms {

/// Base class for everything thrown by the engine.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A numeric argument lies outside its admissible range
/// (mass, support pair, clamp value, kernel, frame size).
struct DomainError : Error {
    using Error::Error;
};

/// The requested operation would leave the database structurally invalid
/// (bad one-of membership, self-supporting justification, ...).
struct StructuralError : Error {
    using Error::Error;
};

/// Totally conflicting evidence: the combination normalizer vanished, or
/// the empty environment was derived to be inconsistent.
struct ConflictError : Error {
    using Error::Error;
};

/// Syntax error in a problem description, with a source position and the
/// token classes that would have been accepted there.
struct ParseError : Error {
    ParseError(int line, int column, const std::string& message,
               std::vector<std::string> expected_tokens = {})
        : Error(render(line, column, message, expected_tokens)),
          line(line),
          column(column),
          expected(std::move(expected_tokens)) {}

    int line;
    int column;
    std::vector<std::string> expected;

private:
    static std::string render(int line, int column, const std::string& message,
                              const std::vector<std::string>& expected) {
        std::string s = std::to_string(line) + ":" + std::to_string(column) + ": " + message;
        if (!expected.empty()) {
            s += " (expected ";
            for (std::size_t i = 0; i < expected.size(); ++i) {
                if (i) s += ", ";
                s += expected[i];
            }
            s += ")";
        }
        return s;
    }
};

/// A well-formed program that cannot be mapped onto the database; the
/// message names the offending statement.
struct CompileError : Error {
    using Error::Error;
};

}  // namespace evtms

#endif
