#include "varmech/construct.hpp"

#include "varmech/calculus.hpp"
#include "varmech/integrate.hpp"

namespace varmech {

namespace {

const Variable& path_parameter()
{
    static const Variable s = Variable::parameter("s$");
    return s;
}

void require_exact(const std::vector<Expr>& f, const std::vector<Variable>& vars, const ZeroTestSettings& settings)
{
    if (f.size() != vars.size()) {
        throw Error("exact form needs one component per variable");
    }
    for (std::size_t i = 0; i < f.size(); ++i) {
        for (std::size_t j = i + 1; j < f.size(); ++j) {
            const Expr r = normalize(differentiate(f[i], vars[j]) - differentiate(f[j], vars[i]));
            if (!is_zero(r, settings).holds()) {
                throw NotExactError(static_cast<int>(i) + 1, static_cast<int>(j) + 1, to_string(r));
            }
        }
    }
}

Expr displacement(const Variable& v, const Rational& ref) { return var(v) - Expr(ref); }

std::vector<Variable> family(const std::vector<std::string>& names, int order)
{
    std::vector<Variable> out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        out.push_back(Variable::coordinate(static_cast<int>(i) + 1, names[i], order));
    }
    return out;
}

std::size_t singular_samples(const std::vector<Expr>& exprs, const std::vector<Variable>& vars,
                             const Rational& value, const ZeroTestSettings& settings)
{
    constexpr std::size_t probes = 8;
    std::map<Variable, Expr> at;
    for (const auto& v : vars) {
        at.emplace(v, Expr(value));
    }
    SampleStream stream(settings.seed);
    std::size_t failures = 0;
    for (std::size_t k = 0; k < probes; ++k) {
        bool failed = false;
        for (const auto& e : exprs) {
            try {
                const Expr restricted = substitute(e, at);
                Point p;
                for (const auto& v : restricted.variables()) {
                    p.emplace(v, stream.uniform(-2.0, 2.0));
                }
                (void)evaluate(restricted, p);
            } catch (const EvaluationDomainError&) {
                failed = true;
            }
        }
        failures += failed ? 1 : 0;
    }
    return failures;
}

std::vector<Expr> drop_velocities(std::vector<Expr> exprs, const std::vector<Variable>& velocities)
{
    std::map<Variable, Expr> zero;
    for (const auto& v : velocities) {
        zero.emplace(v, Expr(0));
    }
    for (auto& e : exprs) {
        e = substitute(e, zero);
    }
    return exprs;
}

}  // namespace

Expr integrate_exact_form(const std::vector<Expr>& f, const std::vector<Variable>& vars,
                          const std::vector<Rational>& reference, const ZeroTestSettings& settings)
{
    require_exact(f, vars, settings);
    const Variable& s = path_parameter();
    std::map<Variable, Expr> along;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        along.emplace(vars[i], Expr(reference[i]) + var(s) * displacement(vars[i], reference[i]));
    }
    std::vector<Expr> terms;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        terms.push_back(displacement(vars[i], reference[i]) * unit_interval_integral(substitute(f[i], along), s));
    }
    return normalize(Expr::sum(std::move(terms)));
}

Expr integrate_exact_form_staircase(const std::vector<Expr>& f, const std::vector<Variable>& vars,
                                    const std::vector<Rational>& reference, const ZeroTestSettings& settings)
{
    require_exact(f, vars, settings);
    const Variable& s = path_parameter();
    std::vector<Expr> terms;
    for (std::size_t k = 0; k < vars.size(); ++k) {
        std::map<Variable, Expr> leg;
        leg.emplace(vars[k], Expr(reference[k]) + var(s) * displacement(vars[k], reference[k]));
        for (std::size_t m = k + 1; m < vars.size(); ++m) {
            leg.emplace(vars[m], Expr(reference[m]));
        }
        terms.push_back(displacement(vars[k], reference[k]) * unit_interval_integral(substitute(f[k], leg), s));
    }
    return normalize(Expr::sum(std::move(terms)));
}

std::vector<Rational> choose_reference(const std::vector<Expr>& exprs, const std::vector<Variable>& vars,
                                       const ZeroTestSettings& settings)
{
    const std::size_t at_origin = singular_samples(exprs, vars, Rational(0), settings);
    if (at_origin != 0 && singular_samples(exprs, vars, Rational(1), settings) < at_origin) {
        return std::vector<Rational>(vars.size(), Rational(1));
    }
    return std::vector<Rational>(vars.size(), Rational(0));
}

VelocityPotential velocity_gradient(const AccelDecomposition& dec, const ZeroTestSettings& settings)
{
    const auto velocities = family(dec.coordinates, 1);
    std::vector<Expr> all_q;
    for (const auto& row : dec.Q) {
        all_q.insert(all_q.end(), row.begin(), row.end());
    }
    VelocityPotential out;
    out.reference = choose_reference(all_q, velocities, settings);
    for (const auto& row : dec.Q) {
        out.R.push_back(integrate_exact_form(row, velocities, out.reference, settings));
    }
    out.G0 = integrate_exact_form(out.R, velocities, out.reference, settings);
    return out;
}

CompatibilityData compatibility(const AccelDecomposition& dec, const Expr& G0, const ZeroTestSettings& settings)
{
    const int n = dec.n();
    const auto x = family(dec.coordinates, 0);
    const auto v = family(dec.coordinates, 1);
    const Variable t = Variable::time();
    const Expr half(Rational(1, 2));
    auto P = [&](int i) -> const Expr& { return dec.P[static_cast<std::size_t>(i)]; };
    auto d = [](const Expr& e, const Variable& a) { return differentiate(e, a); };

    CompatibilityData out;
    out.coordinates = dec.coordinates;
    out.phi.assign(static_cast<std::size_t>(n), std::vector<Expr>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i) {
        for (int k = i + 1; k < n; ++k) {
            const Expr phi = normalize(half * (d(P(i), v[k]) - d(P(k), v[i])) + d(d(G0, v[k]), x[i]) -
                                       d(d(G0, x[k]), v[i]));
            out.phi[i][k] = phi;
            out.phi[k][i] = normalize(-phi);
        }
    }
    for (int i = 0; i < n; ++i) {
        std::vector<Expr> terms{P(i), d(G0, x[i]), -d(d(G0, t), v[i])};
        for (int j = 0; j < n; ++j) {
            terms.push_back(-(d(d(G0, x[i]), v[j]) * var(v[j])));
            terms.push_back(half * (d(P(j), v[i]) - d(P(i), v[j])) * var(v[j]));
        }
        out.theta.push_back(normalize(Expr::sum(std::move(terms))));
    }

    // Both families must be free of velocities before potentials exist.
    auto require_velocity_free = [&](const Expr& e, const std::string& what) {
        for (const auto& vl : v) {
            const Expr dv = d(e, vl);
            if (!is_zero(dv, settings).holds()) {
                throw VelocityDependentResidueError(what + " depends on " + to_string(vl) + ": " + to_string(e));
            }
        }
    };
    for (int i = 0; i < n; ++i) {
        for (int k = i + 1; k < n; ++k) {
            require_velocity_free(out.phi[i][k], "phi_" + std::to_string(i + 1) + std::to_string(k + 1));
        }
        require_velocity_free(out.theta[i], "theta_" + std::to_string(i + 1));
    }
    for (auto& row : out.phi) {
        row = drop_velocities(row, v);
    }
    out.theta = drop_velocities(out.theta, v);

    auto record = [&](const std::string& which, std::vector<int> idx, const Expr& residual) {
        DiagnosticCheck c{which, std::move(idx), normalize(residual), {}};
        c.verdict = is_zero(c.residual, settings);
        if (!c.verdict.holds()) {
            throw ClosureFailureError(which, c.indices, to_string(c.residual));
        }
        out.closure.push_back(std::move(c));
    };
    for (int i = 0; i < n; ++i) {
        for (int k = i + 1; k < n; ++k) {
            record("time_space", {i + 1, k + 1},
                   d(out.phi[i][k], t) - d(out.theta[i], x[k]) + d(out.theta[k], x[i]));
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            for (int l = j + 1; l < n; ++l) {
                record("space_space", {i + 1, j + 1, l + 1},
                       d(out.phi[i][j], x[l]) + d(out.phi[j][l], x[i]) + d(out.phi[l][i], x[j]));
            }
        }
    }
    return out;
}

Potentials solve_potentials(const CompatibilityData& c, const ZeroTestSettings& settings)
{
    const int n = static_cast<int>(c.coordinates.size());
    const auto x = family(c.coordinates, 0);
    const Variable t = Variable::time();
    const Variable& s = path_parameter();

    std::vector<Expr> sources = c.theta;
    for (const auto& row : c.phi) {
        sources.insert(sources.end(), row.begin(), row.end());
    }
    Potentials out;
    out.reference = choose_reference(sources, x, settings);
    const auto& ref = out.reference;

    // Homotopy in coordinate space at fixed t:
    //   H_i = sum_k (x_k - r_k) * int_0^1 s phi_ik(t, r + s (x - r)) ds
    std::map<Variable, Expr> along;
    for (int k = 0; k < n; ++k) {
        along.emplace(x[k], Expr(ref[k]) + var(s) * displacement(x[k], ref[k]));
    }
    for (int i = 0; i < n; ++i) {
        std::vector<Expr> terms;
        for (int k = 0; k < n; ++k) {
            if (c.phi[i][k].is_zero()) {
                continue;
            }
            terms.push_back(displacement(x[k], ref[k]) *
                            unit_interval_integral(var(s) * substitute(c.phi[i][k], along), s));
        }
        out.H.push_back(normalize(Expr::sum(std::move(terms))));
    }
    std::vector<Expr> grad_h0;
    for (int i = 0; i < n; ++i) {
        grad_h0.push_back(normalize(differentiate(out.H[i], t) - c.theta[i]));
    }
    out.H0 = integrate_exact_form(grad_h0, x, ref, settings);

    auto verify = [&](const std::string& what, const Expr& residual) {
        const ZeroVerdict verdict = is_zero(residual, settings);
        if (!verdict.holds()) {
            throw PostconditionFailureError("potential equation " + what + " not satisfied: residual " +
                                            to_string(normalize(residual)));
        }
    };
    for (int i = 0; i < n; ++i) {
        for (int k = i + 1; k < n; ++k) {
            verify("dH" + std::to_string(i + 1) + "/dx" + std::to_string(k + 1),
                   differentiate(out.H[i], x[k]) - differentiate(out.H[k], x[i]) - c.phi[i][k]);
        }
        verify("dH" + std::to_string(i + 1) + "/dt",
               differentiate(out.H[i], t) - differentiate(out.H0, x[i]) - c.theta[i]);
    }
    return out;
}

const char* to_string(MatchMode m) noexcept
{
    return m == MatchMode::exact ? "exact" : "via_multiplier";
}

LagrangianResult construct(const OdeSystem& sys, const ZeroTestSettings& settings)
{
    const HelmholtzReport report = check(sys, settings);
    if (!report.passed()) {
        throw ConditionsFailedError("system fails the Helmholtz conditions; no Lagrangian exists");
    }
    const AccelDecomposition dec = decompose(sys, settings);
    const VelocityPotential vel = velocity_gradient(dec, settings);
    const CompatibilityData compat = compatibility(dec, vel.G0, settings);
    const Potentials pot = solve_potentials(compat, settings);

    LagrangianResult result;
    result.G0 = vel.G0;
    result.H = pot.H;
    result.H0 = pot.H0;
    result.velocity_reference = vel.reference;
    result.coordinate_reference = pot.reference;
    std::vector<Expr> parts{vel.G0, pot.H0};
    for (int i = 0; i < sys.n(); ++i) {
        parts.push_back(pot.H[static_cast<std::size_t>(i)] * var(sys.coordinate(i + 1, 1)));
    }
    result.L = normalize(Expr::sum(std::move(parts)));

    const auto el = euler_lagrange(result.L, sys.coordinates);
    bool ok = true;
    for (int i = 0; i < sys.n(); ++i) {
        Expr r = normalize(el[static_cast<std::size_t>(i)] - sys.equations[static_cast<std::size_t>(i)]);
        ZeroVerdict verdict = is_zero(r, settings);
        ok = ok && verdict.holds();
        result.validation.residuals.push_back(std::move(r));
        result.validation.verdicts.push_back(std::move(verdict));
    }
    if (!ok) {
        std::vector<std::string> text;
        for (const auto& r : result.validation.residuals) {
            text.push_back(to_string(r));
        }
        throw ValidationFailureError(std::move(text));
    }
    return result;
}

}  // namespace varmech
