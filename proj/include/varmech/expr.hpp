#pragma once

// Immutable symbolic expressions over time, coordinates and their time
// derivatives (up to third order), and named parameters.

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "varmech/errors.hpp"

namespace varmech {

using Rational = mpq_class;

/// Variable kinds, listed in the order used for canonical sorting.
enum class VarKind : std::uint8_t { parameter, time, coordinate, velocity, acceleration, jerk };

struct Variable {
    VarKind kind = VarKind::parameter;
    int index = 0;     // 1-based coordinate index; 0 for time and parameters
    std::string name;  // parameter name, coordinate base name, or "t"

    static Variable time();
    static Variable parameter(std::string name);
    /// Member of the coordinate family: order 0 = x, 1 = x', 2 = x'', 3 = x'''.
    static Variable coordinate(int index, std::string name, int order = 0);

    [[nodiscard]] bool is_coordinate_family() const noexcept;
    [[nodiscard]] int order() const;
    [[nodiscard]] Variable with_order(int order) const;

    friend auto operator<=>(const Variable&, const Variable&) = default;
    friend bool operator==(const Variable&, const Variable&) = default;
};

[[nodiscard]] std::string to_string(const Variable& v);

enum class NodeKind : std::uint8_t { constant, symbol, sum, product, power, kernel };
enum class Kernel : std::uint8_t { exp, sin, cos, ln, sqrt };

[[nodiscard]] const char* kernel_name(Kernel k) noexcept;

struct Node;

class Expr {
public:
    Expr();  // the constant 0
    Expr(int value);  // NOLINT(google-explicit-constructor)
    Expr(Rational value);  // NOLINT(google-explicit-constructor)
    explicit Expr(Variable v);

    static Expr sum(std::vector<Expr> terms);
    static Expr product(std::vector<Expr> factors);
    static Expr power(Expr base, Rational exponent);
    static Expr apply(Kernel k, Expr argument);

    [[nodiscard]] NodeKind kind() const noexcept;
    [[nodiscard]] const Rational& value() const;
    [[nodiscard]] const Variable& variable() const;
    [[nodiscard]] std::span<const Expr> operands() const;
    [[nodiscard]] const Expr& base() const;
    [[nodiscard]] const Rational& exponent() const;
    [[nodiscard]] Kernel kernel() const;
    [[nodiscard]] const Expr& argument() const;

    [[nodiscard]] bool is_constant() const noexcept { return kind() == NodeKind::constant; }
    [[nodiscard]] bool is_zero() const noexcept;
    [[nodiscard]] bool is_one() const noexcept;
    [[nodiscard]] bool is_normalized() const noexcept;

    /// Sorted, duplicate-free set of variables occurring in the tree.
    [[nodiscard]] const std::vector<Variable>& variables() const noexcept;
    [[nodiscard]] bool depends_on(const Variable& v) const;
    [[nodiscard]] bool depends_on_kind(VarKind k) const;

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a);
    Expr& operator+=(const Expr& o) { return *this = *this + o; }
    Expr& operator-=(const Expr& o) { return *this = *this - o; }
    Expr& operator*=(const Expr& o) { return *this = *this * o; }

    // internal
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    [[nodiscard]] const Node& node() const noexcept { return *node_; }
    [[nodiscard]] const Node* identity() const noexcept { return node_.get(); }

private:
    std::shared_ptr<const Node> node_;
};

[[nodiscard]] inline Expr var(const Variable& v) { return Expr(v); }
[[nodiscard]] Expr pow(const Expr& base, const Rational& exponent);
[[nodiscard]] Expr exp(const Expr& a);
[[nodiscard]] Expr sin(const Expr& a);
[[nodiscard]] Expr cos(const Expr& a);
[[nodiscard]] Expr ln(const Expr& a);
[[nodiscard]] Expr sqrt(const Expr& a);

/// Total order on trees; on normalized trees it is the canonical order.
[[nodiscard]] int compare(const Expr& a, const Expr& b);
[[nodiscard]] inline bool same(const Expr& a, const Expr& b) { return compare(a, b) == 0; }

struct ExprLess {
    bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

/// Canonical form: a polynomial over atoms (variables, kernel applications,
/// and non-expandable powers) with exact rational coefficients, products of
/// sums expanded, exponentials merged, deterministic ordering.
[[nodiscard]] Expr normalize(const Expr& e);

/// Partial derivative treating every Variable as independent. Normalized.
[[nodiscard]] Expr differentiate(const Expr& e, const Variable& v);

[[nodiscard]] Expr substitute(const Expr& e, const Variable& target, const Expr& replacement);
/// Simultaneous substitution.
[[nodiscard]] Expr substitute(const Expr& e, const std::map<Variable, Expr>& replacements);

/// Rendering in the input grammar; re-parses to an equivalent expression.
[[nodiscard]] std::string to_string(const Expr& e);
[[nodiscard]] std::string to_string(const Rational& r);

}  // namespace varmech
