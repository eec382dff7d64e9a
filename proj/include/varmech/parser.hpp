#pragma once

// Expression text and system documents.
//
// Grammar (lowest to highest precedence):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?          exponent must fold to a rational
//   primary := number | ident prime* | kernel '(' expr ')' | '(' expr ')'
// Numbers are exact: "0.5" is 1/2. Primes mark time derivatives of
// coordinates: x1' is a velocity, x1'' an acceleration.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "varmech/expr.hpp"
#include "varmech/system.hpp"

namespace varmech {

struct SystemFile {
    int n = 0;
    std::vector<std::string> coordinates;
    std::vector<std::string> parameters;
    std::vector<std::string> equations;
    std::optional<std::string> lagrangian;
};

struct ParseOptions {
    /// Accept x1''' (third derivatives). Off for user input; reports may
    /// contain jerk terms and re-parse with this on.
    bool allow_jerk = false;
};

[[nodiscard]] Expr parse_expression(std::string_view text, const SystemFile& context, ParseOptions options = {});

[[nodiscard]] bool is_identifier(std::string_view s) noexcept;

/// Parses and validates the JSON system document (schema errors -> SchemaError).
[[nodiscard]] SystemFile read_system_file(std::string_view document);

/// Document with `equations` -> OdeSystem. Parse errors name the equation.
[[nodiscard]] OdeSystem load_system(std::string_view document);
[[nodiscard]] OdeSystem build_system(const SystemFile& file);

/// Document with `lagrangian` -> parsed Lagrangian.
[[nodiscard]] Expr load_lagrangian(const SystemFile& file);

}  // namespace varmech
