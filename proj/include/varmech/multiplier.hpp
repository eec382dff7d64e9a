#pragma once

// Jacobi last multiplier for one-dimensional systems q(t) x'' + p(t, x, x') = 0.
// With G = p / q, a factor Lambda satisfying dLambda/dt = Lambda dG/dx' makes
// Lambda * (x'' + G) pass H3. Only dG/dx' depending on t alone (or constant)
// is handled: then Lambda = exp(int dG/dx' dt).

#include <optional>

#include "varmech/construct.hpp"

namespace varmech {

struct MultiplierResult {
    Expr lambda;
    OdeSystem modified;  // Lambda * F / q
    Expr h3_residual;
    ZeroVerdict h3_verdict;
    std::optional<LagrangianResult> construction;
};

/// Throws NotOneDimensionalError, VelocityStructureUnsupportedError,
/// IntegrationUnsupportedError.
[[nodiscard]] MultiplierResult jacobi_multiplier(const OdeSystem& sys, const ZeroTestSettings& settings = {});

/// jacobi_multiplier followed by construct on the modified system; the
/// validation is recorded as via_multiplier.
[[nodiscard]] MultiplierResult multiplier_then_construct(const OdeSystem& sys, const ZeroTestSettings& settings = {});

}  // namespace varmech
