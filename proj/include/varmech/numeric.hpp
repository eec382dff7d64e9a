#pragma once

// Pointwise evaluation and the seeded identity test backing every
// "holds identically" decision in the library.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>

#include "varmech/expr.hpp"

namespace varmech {

using Point = std::map<Variable, double>;

/// IEEE double evaluation by structural recursion.
/// Throws EvaluationDomainError (ln/sqrt of non-positive values, division by
/// zero, fractional powers of negatives, overflow) or UnassignedVariableError.
[[nodiscard]] double evaluate(const Expr& e, const Point& p);

struct ZeroTestSettings {
    std::size_t samples = 100;
    std::uint64_t seed = 42;
    double tol = 1e-9;
};

enum class ZeroKind { proven_zero, numerically_zero, nonzero };

[[nodiscard]] const char* to_string(ZeroKind k) noexcept;

struct ZeroVerdict {
    ZeroKind kind = ZeroKind::proven_zero;
    double max_abs = 0.0;          // largest |value| over the samples
    double scale = 0.0;            // largest |term| over the samples
    std::optional<Point> witness;  // first sample exceeding the threshold

    [[nodiscard]] bool holds() const noexcept { return kind != ZeroKind::nonzero; }
};

/// ProvenZero when the normal form is the literal 0; otherwise evaluates at
/// `samples` points drawn uniformly from [-2, 2] per variable. A sample that
/// lands on a singularity is redrawn up to 10 times before giving up.
[[nodiscard]] ZeroVerdict is_zero(const Expr& e, const ZeroTestSettings& settings = {});

/// Deterministic uniform draws in [lo, hi); independent of the standard
/// library's distribution implementations.
class SampleStream {
public:
    explicit SampleStream(std::uint64_t seed) : state_(seed) {}
    double uniform(double lo, double hi);
    std::uint64_t next();

private:
    std::uint64_t state_;
};

}  // namespace varmech
