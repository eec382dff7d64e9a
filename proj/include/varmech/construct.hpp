#pragma once

// Constructs a Lagrangian L = G0 + sum_i H_i x_i' + H0 for a system that
// satisfies the Helmholtz conditions:
//   1. G0(t, x, x') with velocity Hessian Q, from two exact-form integrations
//      over velocity space;
//   2. the residual equations for H_i, H0 are affine in velocities with
//      coefficients phi_ik (space-space) and theta_i (time-space);
//   3. H_i from the homotopy formula in coordinate space at fixed t, then H0
//      from the exact form dH0/dx_i = dH_i/dt - theta_i;
//   4. the result is accepted only if its Euler-Lagrange equations reproduce
//      the input.
// L is determined up to a total derivative df(t, x)/dt.

#include <string>
#include <vector>

#include "varmech/helmholtz.hpp"

namespace varmech {

/// Potential F of the exact form sum_i f_i d(vars_i), integrated along the
/// straight line from `reference` (where F vanishes). Throws NotExactError
/// or UnsupportedIntegrandError.
[[nodiscard]] Expr integrate_exact_form(const std::vector<Expr>& f, const std::vector<Variable>& vars,
                                        const std::vector<Rational>& reference, const ZeroTestSettings& settings = {});

/// Same potential along the axis-ordered path: vars_1 first, then vars_2, ...
[[nodiscard]] Expr integrate_exact_form_staircase(const std::vector<Expr>& f, const std::vector<Variable>& vars,
                                                  const std::vector<Rational>& reference,
                                                  const ZeroTestSettings& settings = {});

/// All zeros, or all ones when the expressions are singular at the origin of `vars`.
[[nodiscard]] std::vector<Rational> choose_reference(const std::vector<Expr>& exprs, const std::vector<Variable>& vars,
                                                     const ZeroTestSettings& settings = {});

struct VelocityPotential {
    std::vector<Expr> R;  // dG0/dx_i'
    Expr G0;
    std::vector<Rational> reference;  // velocity reference point
};

[[nodiscard]] VelocityPotential velocity_gradient(const AccelDecomposition& dec, const ZeroTestSettings& settings = {});

struct CompatibilityData {
    std::vector<std::string> coordinates;
    std::vector<std::vector<Expr>> phi;  // antisymmetric, over (t, x)
    std::vector<Expr> theta;             // over (t, x)
    std::vector<DiagnosticCheck> closure;
};

/// phi_ik = 1/2 (dP_i/dx_k' - dP_k/dx_i') + d2G0/dx_k'dx_i - d2G0/dx_k dx_i'
/// theta_i = P_i + dG0/dx_i - d2G0/dt dx_i' - sum_j d2G0/dx_i dx_j' x_j'
///           + 1/2 sum_j (dP_j/dx_i' - dP_i/dx_j') x_j'
/// Throws VelocityDependentResidueError or ClosureFailureError.
[[nodiscard]] CompatibilityData compatibility(const AccelDecomposition& dec, const Expr& G0,
                                              const ZeroTestSettings& settings = {});

struct Potentials {
    std::vector<Expr> H;
    Expr H0;
    std::vector<Rational> reference;  // coordinate reference point
};

/// H with dH_i/dx_k - dH_k/dx_i = phi_ik and dH_i/dt - dH0/dx_i = theta_i,
/// verified by substitution before returning (PostconditionFailureError).
[[nodiscard]] Potentials solve_potentials(const CompatibilityData& c, const ZeroTestSettings& settings = {});

enum class MatchMode { exact, via_multiplier };

[[nodiscard]] const char* to_string(MatchMode m) noexcept;

struct Validation {
    MatchMode mode = MatchMode::exact;
    std::vector<Expr> residuals;  // E_i - F_i
    std::vector<ZeroVerdict> verdicts;
};

struct LagrangianResult {
    Expr L;
    Expr G0;
    std::vector<Expr> H;
    Expr H0;
    std::vector<Rational> velocity_reference;
    std::vector<Rational> coordinate_reference;
    Validation validation;
};

inline constexpr const char* gauge_note = "unique only up to adding df(t,x)/dt";

/// Runs check -> decompose -> velocity_gradient -> compatibility ->
/// solve_potentials and validates EL(L) against the equations. Throws
/// ConditionsFailedError when the Helmholtz conditions fail and
/// ValidationFailureError when the round trip does not close.
[[nodiscard]] LagrangianResult construct(const OdeSystem& sys, const ZeroTestSettings& settings = {});

}  // namespace varmech
