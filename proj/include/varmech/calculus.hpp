#pragma once

#include <string>
#include <vector>

#include "varmech/expr.hpp"

namespace varmech {

/// d/dt by the chain rule over t and every coordinate-family variable in e,
/// including the acceleration -> jerk term. Throws JerkInInputError when e
/// already contains third derivatives.
[[nodiscard]] Expr total_time_derivative(const Expr& e);

/// E_i = d/dt(dL/dx_i') - dL/dx_i for each named coordinate (index = position + 1).
[[nodiscard]] std::vector<Expr> euler_lagrange(const Expr& lagrangian, const std::vector<std::string>& coordinates);

/// Coordinates named x1..xn.
[[nodiscard]] std::vector<std::string> default_coordinate_names(int n);

}  // namespace varmech
