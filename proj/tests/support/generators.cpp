#include "generators.hpp"

#include "varmech/calculus.hpp"

namespace varmech::testing {

namespace {

long uniform_int(Rng& rng, long lo, long hi)
{
    return std::uniform_int_distribution<long>(lo, hi)(rng);
}

long nonzero_int(Rng& rng, long bound)
{
    long c = 0;
    while (c == 0) {
        c = uniform_int(rng, -bound, bound);
    }
    return c;
}

Expr monomial(Rng& rng, const std::vector<Variable>& vars, int degree)
{
    std::vector<Expr> factors;
    for (int d = 0; d < degree; ++d) {
        factors.push_back(var(vars[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(vars.size()) - 1))]));
    }
    return Expr::product(std::move(factors));
}

Expr affine(Rng& rng, const std::vector<Variable>& vars)
{
    std::vector<Expr> terms{Expr(Rational(uniform_int(rng, -2, 2), 2))};
    for (const auto& v : vars) {
        if (uniform_int(rng, 0, 1) == 1) {
            terms.push_back(Expr(Rational(nonzero_int(rng, 2), 2)) * var(v));
        }
    }
    return Expr::sum(std::move(terms));
}

}  // namespace

Expr random_polynomial(Rng& rng, const std::vector<Variable>& vars, int max_degree, int max_terms)
{
    std::vector<Expr> terms;
    const long count = uniform_int(rng, 1, max_terms);
    for (long k = 0; k < count; ++k) {
        const int degree = static_cast<int>(uniform_int(rng, 0, max_degree));
        terms.push_back(Expr(nonzero_int(rng, 3)) * monomial(rng, vars, degree));
    }
    return normalize(Expr::sum(std::move(terms)));
}

Expr random_expression(Rng& rng, const std::vector<Variable>& vars, int depth)
{
    if (depth <= 0 || uniform_int(rng, 0, 5) == 0) {
        if (uniform_int(rng, 0, 3) == 0) {
            return Expr(Rational(nonzero_int(rng, 5), static_cast<long>(uniform_int(rng, 1, 3))));
        }
        return var(vars[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(vars.size()) - 1))]);
    }
    auto sub = [&] { return random_expression(rng, vars, depth - 1); };
    // Positive, bounded-below argument for ln, sqrt and negative powers.
    auto positive = [&] {
        const Expr u = sub();
        return Expr(1) + u * u;
    };
    switch (uniform_int(rng, 0, 9)) {
    case 0:
    case 1: return sub() + sub();
    case 2:
    case 3: return sub() * sub();
    case 4: return pow(sub(), Rational(uniform_int(rng, 2, 3)));
    case 5: return pow(positive(), Rational(-static_cast<long>(uniform_int(rng, 1, 2))));
    case 6: return exp(Expr(Rational(1, 4)) * sin(sub()));
    case 7: return uniform_int(rng, 0, 1) ? sin(sub()) : cos(sub());
    case 8: return ln(positive());
    default: return sqrt(positive());
    }
}

std::vector<Variable> phase_variables(int n, bool with_velocities)
{
    std::vector<Variable> vars{Variable::time()};
    for (int i = 1; i <= n; ++i) {
        vars.push_back(Variable::coordinate(i, "x" + std::to_string(i)));
    }
    if (with_velocities) {
        for (int i = 1; i <= n; ++i) {
            vars.push_back(Variable::coordinate(i, "x" + std::to_string(i), 1));
        }
    }
    return vars;
}

RandomLagrangian random_lagrangian(Rng& rng)
{
    const int n = static_cast<int>(uniform_int(rng, 1, 3));
    RandomLagrangian out;
    out.coordinates = default_coordinate_names(n);
    std::vector<std::vector<long>> A(n, std::vector<long>(n));
    for (auto& row : A) {
        for (auto& a : row) {
            a = uniform_int(rng, -2, 2);
        }
    }
    out.M.assign(n, std::vector<long>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            long m = i == j ? 1 : 0;
            for (int k = 0; k < n; ++k) {
                m += A[k][i] * A[k][j];
            }
            out.M[i][j] = m;
        }
    }
    const auto tx = phase_variables(n, false);
    std::vector<Expr> terms;
    for (int i = 0; i < n; ++i) {
        const Expr vi = var(Variable::coordinate(i + 1, out.coordinates[i], 1));
        for (int j = 0; j < n; ++j) {
            const Expr vj = var(Variable::coordinate(j + 1, out.coordinates[j], 1));
            terms.push_back(Expr(Rational(out.M[i][j], 2)) * vi * vj);
        }
        terms.push_back(random_polynomial(rng, tx, 3) * vi);
    }
    terms.push_back(random_polynomial(rng, tx, 3));
    out.L = normalize(Expr::sum(std::move(terms)));
    return out;
}

OdeSystem system_of(const Expr& L, const std::vector<std::string>& coordinates)
{
    OdeSystem sys;
    sys.coordinates = coordinates;
    sys.equations = euler_lagrange(L, coordinates);
    return sys;
}

Expr random_gauge(Rng& rng, const std::vector<std::string>& coordinates)
{
    return random_polynomial(rng, phase_variables(static_cast<int>(coordinates.size()), false), 3);
}

RandomForm random_exact_form(Rng& rng)
{
    const int n = static_cast<int>(uniform_int(rng, 2, 4));
    RandomForm out;
    for (int i = 1; i <= n; ++i) {
        out.vars.push_back(Variable::coordinate(i, "x" + std::to_string(i)));
    }
    Expr kernel;
    const Expr arg = affine(rng, out.vars);
    switch (uniform_int(rng, 0, 2)) {
    case 0: kernel = exp(arg); break;
    case 1: kernel = sin(arg); break;
    default: kernel = cos(arg); break;
    }
    Expr F = random_polynomial(rng, out.vars, 3) + random_polynomial(rng, out.vars, 2, 3) * kernel;
    std::map<Variable, Expr> origin;
    for (const auto& v : out.vars) {
        origin.emplace(v, Expr(0));
    }
    F = normalize(F - substitute(F, origin));
    out.potential = F;
    for (const auto& v : out.vars) {
        out.f.push_back(differentiate(F, v));
    }
    return out;
}

RandomForm random_curled_form(Rng& rng)
{
    RandomForm out = random_exact_form(rng);
    const long n = static_cast<long>(out.vars.size());
    const auto i = static_cast<std::size_t>(uniform_int(rng, 0, n - 1));
    auto j = static_cast<std::size_t>(uniform_int(rng, 0, n - 2));
    if (j >= i) {
        ++j;
    }
    out.f[i] = normalize(out.f[i] + Expr(nonzero_int(rng, 3)) * var(out.vars[j]));
    out.potential = Expr();
    return out;
}

}  // namespace varmech::testing
