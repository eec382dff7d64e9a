#pragma once

// Closed-form integration over one variable for the class
//   polynomial(v) * [one of exp(a), sin(a), cos(a)],  a affine in v,
// with factors free of v treated as constants. Powers of v paired with a
// kernel must be integers in 0..8 (integration by parts depth).

#include "varmech/expr.hpp"

namespace varmech {

inline constexpr int max_parts_depth = 8;

/// Antiderivative with integration constant 0. v^-1 integrates to ln(v).
/// Throws UnsupportedIntegrandError outside the class.
[[nodiscard]] Expr antiderivative(const Expr& e, const Variable& v);

/// Integral over s in [0, 1]. Divergent powers (s^p, p <= -1) are rejected.
/// Powers of products containing s are split, which is valid for s > 0.
[[nodiscard]] Expr unit_interval_integral(const Expr& e, const Variable& s);

}  // namespace varmech
