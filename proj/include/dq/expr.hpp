#pragma once
#include <string>

#include "dq/poly.hpp"

namespace dq {

// Parses the polynomial micro-grammar: integer coefficients, variables x1..xd,
// operators + - * ^, parentheses.  Example: "2*x1^2 - x1*x2 + 3".
Poly parse_poly(const std::string& text, int dim);

}  // namespace dq
