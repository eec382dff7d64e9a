#pragma once

#include <string>
#include <vector>

#include "varmech/expr.hpp"

namespace varmech {

/// n second-order equations F_i(t, x, x', x'') = 0 in named coordinates.
struct OdeSystem {
    std::vector<std::string> coordinates;
    std::vector<std::string> parameters;
    std::vector<Expr> equations;

    [[nodiscard]] int n() const noexcept { return static_cast<int>(coordinates.size()); }

    /// 1-based coordinate index; order 0..3.
    [[nodiscard]] Variable coordinate(int index, int order = 0) const;

    /// Throws JerkInInputError, or Error on size/index mismatches.
    void validate() const;
};

}  // namespace varmech
