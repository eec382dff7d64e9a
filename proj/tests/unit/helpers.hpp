#pragma once

#include <string>
#include <vector>

#include <doctest.h>

#include "varmech/numeric.hpp"
#include "varmech/parser.hpp"

namespace varmech::test {

inline SystemFile context(std::vector<std::string> coords, std::vector<std::string> params = {})
{
    SystemFile f;
    f.n = static_cast<int>(coords.size());
    f.coordinates = std::move(coords);
    f.parameters = std::move(params);
    return f;
}

/// Parses with coordinates x1..x3 and parameters a, b, c, w unless given.
inline Expr ex(const std::string& text, std::vector<std::string> coords = {"x1", "x2", "x3"},
               std::vector<std::string> params = {"a", "b", "c", "w"})
{
    return parse_expression(text, context(std::move(coords), std::move(params)), ParseOptions{true});
}

inline OdeSystem system(std::vector<std::string> coords, std::vector<std::string> params,
                        std::vector<std::string> equations)
{
    SystemFile f = context(std::move(coords), std::move(params));
    f.equations = std::move(equations);
    return build_system(f);
}

inline bool proven_zero(const Expr& e) { return normalize(e).is_zero(); }

inline std::string str(const Expr& e) { return to_string(normalize(e)); }

inline Variable x(int i, int order = 0) { return Variable::coordinate(i, "x" + std::to_string(i), order); }

}  // namespace varmech::test
