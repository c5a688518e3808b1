#pragma once

#include "stochlab/common.hpp"

namespace stochlab {

/// Parses the restricted scenario-expression grammar over the variable r:
/// numbers, r, + - * /, ^ (right-assoc), parentheses, exp/log/sqrt/sinh/cosh.
/// Throws ConfigError on malformed input.
RealFn parse_expr(const std::string& text);

/// Parse and evaluate once (convenience for tests).
double eval_expr(const std::string& text, double r);

}  // namespace stochlab
