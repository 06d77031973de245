#pragma once

#include <stdexcept>
#include <string>

#include "laprat/fnmodel.hpp"

namespace laprat {

struct SourceSpan {
    int line = 1;    // 1-based
    int column = 1;  // 1-based
    int length = 1;
};

enum class ParseErrorKind { Syntax, NotRepresentable, BadInterval, Overlap };

struct ParseError : std::runtime_error {
    ParseErrorKind kind;
    SourceSpan span;

    ParseError(ParseErrorKind k, SourceSpan s, const std::string& message)
        : std::runtime_error(message), kind(k), span(s) {}
};

// Text format for piecewise functions:
//   fn    := "piecewise" "{" piece+ "}" | expr
//   piece := "[" bound "," bound ")" ":" expr ";"    (last bound "inf")
// Expressions are sums of products of numbers, t, pi, e, ln(..), sqrt(..),
// exp(affine), sin(affine), cos(affine), parentheses, integer powers and
// unary minus; constants fold at parse time.
PiecewiseExpPoly parse(const std::string& text);

// Canonical rendering; round-trips through parse (17 significant digits).
std::string format(const PiecewiseExpPoly& f);

}  // namespace laprat
