#include "varmech/helmholtz.hpp"

#include "varmech/calculus.hpp"

namespace varmech {

namespace {

Variable coord(const std::vector<std::string>& names, int index, int order)
{
    return Variable::coordinate(index, names.at(static_cast<std::size_t>(index) - 1), order);
}

const Expr& eq(const OdeSystem& sys, int i) { return sys.equations.at(static_cast<std::size_t>(i) - 1); }

}  // namespace

Variable AccelDecomposition::coordinate(int index, int order) const { return coord(coordinates, index, order); }

AccelDecomposition decompose(const OdeSystem& sys, const ZeroTestSettings& settings)
{
    sys.validate();
    const int n = sys.n();
    AccelDecomposition dec;
    dec.coordinates = sys.coordinates;
    dec.Q.assign(static_cast<std::size_t>(n), std::vector<Expr>(static_cast<std::size_t>(n)));
    for (int i = 1; i <= n; ++i) {
        const Expr& f = eq(sys, i);
        std::vector<Expr> accel_part;
        for (int j = 1; j <= n; ++j) {
            const Variable aj = sys.coordinate(j, 2);
            Expr q = differentiate(f, aj);
            for (int k = j; k <= n; ++k) {
                if (!is_zero(differentiate(q, sys.coordinate(k, 2)), settings).holds()) {
                    throw NonlinearAccelerationError(i, j, k);
                }
            }
            accel_part.push_back(q * var(aj));
            dec.Q[static_cast<std::size_t>(i) - 1][static_cast<std::size_t>(j) - 1] = std::move(q);
        }
        dec.P.push_back(normalize(f - Expr::sum(std::move(accel_part))));
    }
    dec.symmetric = true;
    for (int i = 1; i <= n && dec.symmetric; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            const Expr diff = dec.Q[static_cast<std::size_t>(i) - 1][static_cast<std::size_t>(j) - 1] -
                              dec.Q[static_cast<std::size_t>(j) - 1][static_cast<std::size_t>(i) - 1];
            if (!is_zero(diff, settings).holds()) {
                dec.symmetric = false;
                break;
            }
        }
    }
    return dec;
}

const char* to_string(Condition c) noexcept
{
    switch (c) {
    case Condition::H1: return "H1";
    case Condition::H2: return "H2";
    case Condition::H3: return "H3";
    }
    return "?";
}

const char* to_string(Outcome o) noexcept
{
    switch (o) {
    case Outcome::pass: return "pass";
    case Outcome::pass_with_caveat: return "pass_with_caveat";
    case Outcome::fail: return "fail";
    }
    return "?";
}

std::vector<ResidualCheck> HelmholtzReport::of(Condition c) const
{
    std::vector<ResidualCheck> out;
    for (const auto& r : checks) {
        if (r.condition == c) {
            out.push_back(r);
        }
    }
    return out;
}

Expr h1_residual(const OdeSystem& sys, int i, int j)
{
    return normalize(differentiate(eq(sys, i), sys.coordinate(j, 2)) - differentiate(eq(sys, j), sys.coordinate(i, 2)));
}

Expr h2_residual(const OdeSystem& sys, int i, int j)
{
    const Expr& fi = eq(sys, i);
    const Expr& fj = eq(sys, j);
    const Expr lhs = differentiate(fi, sys.coordinate(j)) - differentiate(fj, sys.coordinate(i));
    const Expr inner = normalize(differentiate(fi, sys.coordinate(j, 1)) - differentiate(fj, sys.coordinate(i, 1)));
    return normalize(lhs - Expr(Rational(1, 2)) * total_time_derivative(inner));
}

Expr h3_residual(const OdeSystem& sys, int i, int j)
{
    const Expr& fi = eq(sys, i);
    const Expr& fj = eq(sys, j);
    const Expr lhs = differentiate(fi, sys.coordinate(j, 1)) + differentiate(fj, sys.coordinate(i, 1));
    return normalize(lhs - Expr(2) * total_time_derivative(differentiate(fj, sys.coordinate(i, 2))));
}

HelmholtzReport check(const OdeSystem& sys, const ZeroTestSettings& settings)
{
    sys.validate();
    HelmholtzReport report;
    report.n = sys.n();
    report.settings = settings;
    report.h1_vacuous = report.n == 1;
    report.h2_vacuous = report.n == 1;

    auto add = [&](Condition c, int i, int j, Expr residual) {
        ResidualCheck rc{c, i, j, std::move(residual), {}};
        rc.verdict = is_zero(rc.residual, settings);
        report.checks.push_back(std::move(rc));
    };
    for (int i = 1; i <= report.n; ++i) {
        for (int j = i + 1; j <= report.n; ++j) {
            add(Condition::H1, i, j, h1_residual(sys, i, j));
        }
    }
    for (int i = 1; i <= report.n; ++i) {
        for (int j = i + 1; j <= report.n; ++j) {
            add(Condition::H2, i, j, h2_residual(sys, i, j));
        }
    }
    for (int i = 1; i <= report.n; ++i) {
        for (int j = i; j <= report.n; ++j) {
            add(Condition::H3, i, j, h3_residual(sys, i, j));
        }
    }
    report.outcome = Outcome::pass;
    for (const auto& rc : report.checks) {
        if (rc.verdict.kind == ZeroKind::nonzero) {
            report.outcome = Outcome::fail;
            break;
        }
        if (rc.verdict.kind == ZeroKind::numerically_zero) {
            report.outcome = Outcome::pass_with_caveat;
        }
    }
    return report;
}

bool DiagnosticReport::all_zero() const noexcept
{
    for (const auto& c : checks) {
        if (!c.verdict.holds()) {
            return false;
        }
    }
    return true;
}

DiagnosticReport derived_conditions(const AccelDecomposition& dec, const ZeroTestSettings& settings)
{
    if (!dec.symmetric) {
        throw Error("derived conditions need a symmetric acceleration matrix");
    }
    const int n = dec.n();
    auto Q = [&](int i, int k) -> const Expr& {
        return dec.Q[static_cast<std::size_t>(i) - 1][static_cast<std::size_t>(k) - 1];
    };
    auto P = [&](int i) -> const Expr& { return dec.P[static_cast<std::size_t>(i) - 1]; };
    auto x = [&](int i) { return dec.coordinate(i, 0); };
    auto v = [&](int i) { return dec.coordinate(i, 1); };
    const Variable t = Variable::time();
    const Expr half(Rational(1, 2));

    DiagnosticReport report;
    auto add = [&](std::string name, std::vector<int> idx, const Expr& residual) {
        DiagnosticCheck c{std::move(name), std::move(idx), normalize(residual), {}};
        c.verdict = is_zero(c.residual, settings);
        report.checks.push_back(std::move(c));
    };

    for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            for (int k = 1; k <= n; ++k) {
                add("velocity_symmetry", {i, j, k}, differentiate(Q(i, k), v(j)) - differentiate(Q(j, k), v(i)));
            }
        }
    }
    for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            for (int k = 1; k <= n; ++k) {
                const Expr p_term = differentiate(differentiate(P(i), v(j)), v(k)) -
                                    differentiate(differentiate(P(j), v(i)), v(k));
                add("acceleration_coefficients", {i, j, k},
                    differentiate(Q(i, k), x(j)) - differentiate(Q(j, k), x(i)) - half * p_term);
            }
        }
    }
    for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            std::vector<Expr> bracket{differentiate(differentiate(P(i), v(j)), t),
                                      -differentiate(differentiate(P(j), v(i)), t)};
            for (int k = 1; k <= n; ++k) {
                const Expr coeff = differentiate(differentiate(P(i), v(k)), x(j)) -
                                   differentiate(differentiate(P(k), v(i)), x(j)) +
                                   differentiate(differentiate(P(k), v(j)), x(i)) -
                                   differentiate(differentiate(P(j), v(k)), x(i));
                bracket.push_back(coeff * var(v(k)));
            }
            add("cyclic_p_identity", {i, j},
                differentiate(P(j), x(i)) - differentiate(P(i), x(j)) + half * Expr::sum(std::move(bracket)));
        }
    }
    return report;
}

}  // namespace varmech
