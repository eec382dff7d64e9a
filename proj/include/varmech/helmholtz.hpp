#pragma once

// Helmholtz conditions for a system F_i(t, x, x', x'') = 0:
//   H1  dF_i/dx_j'' = dF_j/dx_i''
//   H2  dF_i/dx_j - dF_j/dx_i = 1/2 d/dt (dF_i/dx_j' - dF_j/dx_i')
//   H3  dF_i/dx_j' + dF_j/dx_i' = 2 d/dt (dF_j/dx_i'')
// Residuals are LHS - RHS. d/dt of acceleration-dependent terms introduces
// jerk variables; residuals must vanish identically in those too.

#include <string>
#include <vector>

#include "varmech/numeric.hpp"
#include "varmech/system.hpp"

namespace varmech {

/// F_i = P_i + sum_j Q_ij x_j''.
struct AccelDecomposition {
    std::vector<std::string> coordinates;
    std::vector<Expr> P;
    std::vector<std::vector<Expr>> Q;
    bool symmetric = false;

    [[nodiscard]] int n() const noexcept { return static_cast<int>(coordinates.size()); }
    [[nodiscard]] Variable coordinate(int index, int order = 0) const;
};

/// Throws NonlinearAccelerationError when some d2F_i/dx_j''dx_k'' is not zero.
[[nodiscard]] AccelDecomposition decompose(const OdeSystem& sys, const ZeroTestSettings& settings = {});

enum class Condition { H1, H2, H3 };

[[nodiscard]] const char* to_string(Condition c) noexcept;

struct ResidualCheck {
    Condition condition = Condition::H1;
    int i = 0;
    int j = 0;
    Expr residual;
    ZeroVerdict verdict;
};

enum class Outcome { pass, pass_with_caveat, fail };

[[nodiscard]] const char* to_string(Outcome o) noexcept;

struct HelmholtzReport {
    int n = 0;
    ZeroTestSettings settings;
    bool h1_vacuous = false;  // n == 1
    bool h2_vacuous = false;
    std::vector<ResidualCheck> checks;  // H1 pairs, then H2, then H3
    Outcome outcome = Outcome::pass;

    [[nodiscard]] bool passed() const noexcept { return outcome != Outcome::fail; }
    [[nodiscard]] std::vector<ResidualCheck> of(Condition c) const;
};

[[nodiscard]] Expr h1_residual(const OdeSystem& sys, int i, int j);
[[nodiscard]] Expr h2_residual(const OdeSystem& sys, int i, int j);
[[nodiscard]] Expr h3_residual(const OdeSystem& sys, int i, int j);

/// H1 and H2 for i < j, H3 for i <= j. Deterministic given the settings.
[[nodiscard]] HelmholtzReport check(const OdeSystem& sys, const ZeroTestSettings& settings = {});

struct DiagnosticCheck {
    std::string name;          // velocity_symmetry | acceleration_coefficients | cyclic_p_identity
    std::vector<int> indices;  // 1-based
    Expr residual;
    ZeroVerdict verdict;
};

struct DiagnosticReport {
    std::vector<DiagnosticCheck> checks;
    [[nodiscard]] bool all_zero() const noexcept;
};

/// Conditions on P and Q implied by H2 once F is linear in accelerations:
///   velocity_symmetry          dQ_ik/dx_j' - dQ_jk/dx_i'
///   acceleration_coefficients  dQ_ik/dx_j - dQ_jk/dx_i - 1/2 (d2P_i/dx_j'dx_k' - d2P_j/dx_i'dx_k')
///   cyclic_p_identity          the velocity-linear P identity after cyclic summation
/// Requires dec.symmetric.
[[nodiscard]] DiagnosticReport derived_conditions(const AccelDecomposition& dec, const ZeroTestSettings& settings = {});

}  // namespace varmech
