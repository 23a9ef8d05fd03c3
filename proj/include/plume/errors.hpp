#ifndef PLUME_ERRORS_HPP
#define PLUME_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace plume {

/// Malformed text in an input file; carries the 1-based line and column of
/// the offending token.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, int col, const std::string& what)
        : std::runtime_error("parse error at line " + std::to_string(line) + ", column " +
                             std::to_string(col) + ": " + what),
          line_(line), col_(col) {}

    int line() const { return line_; }
    int col() const { return col_; }

private:
    int line_;
    int col_;
};

/// Well-formed tokens arranged inconsistently (dimension mismatches,
/// missing sections, contradictory headers).
class StructuralError : public std::runtime_error {
public:
    explicit StructuralError(const std::string& what)
        : std::runtime_error("structural error: " + what) {}
};

} // namespace plume

#endif
