#include "varmech/multiplier.hpp"

#include "varmech/integrate.hpp"

namespace varmech {

namespace {

bool independent_of(const Expr& e, const Variable& v, const ZeroTestSettings& settings)
{
    return is_zero(differentiate(e, v), settings).holds();
}

}  // namespace

MultiplierResult jacobi_multiplier(const OdeSystem& sys, const ZeroTestSettings& settings)
{
    if (sys.n() != 1) {
        throw NotOneDimensionalError(sys.n());
    }
    const AccelDecomposition dec = decompose(sys, settings);
    const Variable x = sys.coordinate(1, 0);
    const Variable v = sys.coordinate(1, 1);
    const Expr& q = dec.Q[0][0];
    if (is_zero(q, settings).holds()) {
        throw VelocityStructureUnsupportedError("equation has no acceleration term");
    }
    if (!independent_of(q, x, settings) || !independent_of(q, v, settings)) {
        throw VelocityStructureUnsupportedError("acceleration coefficient " + to_string(q) +
                                                " depends on the coordinate or velocity");
    }
    const Expr inv_q = pow(q, Rational(-1));
    const Expr G = normalize(dec.P[0] * inv_q);
    const Expr g = differentiate(G, v);
    if (!independent_of(g, x, settings) || !independent_of(g, v, settings)) {
        throw VelocityStructureUnsupportedError("dG/d" + to_string(v) + " = " + to_string(g) +
                                                " depends on the coordinate or velocity");
    }
    Expr integral;
    try {
        integral = antiderivative(g, Variable::time());
    } catch (const UnsupportedIntegrandError& e) {
        throw IntegrationUnsupportedError(e.what());
    }

    MultiplierResult out;
    out.lambda = normalize(exp(integral));
    out.modified = sys;
    out.modified.equations[0] = normalize(out.lambda * sys.equations[0] * inv_q);
    out.h3_residual = h3_residual(out.modified, 1, 1);
    out.h3_verdict = is_zero(out.h3_residual, settings);
    if (!out.h3_verdict.holds()) {
        throw PostconditionFailureError("multiplied equation still fails H3: residual " + to_string(out.h3_residual));
    }
    return out;
}

MultiplierResult multiplier_then_construct(const OdeSystem& sys, const ZeroTestSettings& settings)
{
    MultiplierResult out = jacobi_multiplier(sys, settings);
    LagrangianResult built = construct(out.modified, settings);
    built.validation.mode = MatchMode::via_multiplier;
    out.construction = std::move(built);
    return out;
}

}  // namespace varmech
