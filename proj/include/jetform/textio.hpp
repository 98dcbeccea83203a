#pragma once

#include "jetform/diffpoly.hpp"

#include <stdexcept>
#include <string>

namespace jetform {

/// Parse failure with 1-based source position.
class SyntaxError : public std::runtime_error {
  public:
    SyntaxError(const std::string& what, int line, int column)
        : std::runtime_error(what + " (line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ")"),
          line_(line), column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

  private:
    int line_;
    int column_;
};

/// Parses the expression grammar:
///   expr   := [sign] term ((+|-) term)*
///   term   := factor ((*|/) factor)*
///   factor := atom [^ nat]
///   atom   := nat | i | name | name_x1x2... | sin(name) | cos(name) | (expr)
/// Division requires a constant divisor. Jets use the subscript run form
/// u_x1x1x2; sin/cos accept only a bare trig field.
DiffPoly parse_expr(const std::string& src, const ContextPtr& ctx);

/// Deterministic rendering in ascending monomial order; parse(print(f)) == f.
std::string print_expr(const DiffPoly& f);

} // namespace jetform
