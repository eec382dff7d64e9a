#include "varmech/integrate.hpp"

#include <optional>

namespace varmech {

namespace {

struct TermShape {
    std::vector<Expr> constant_factors;  // free of v
    Rational v_power = 0;
    std::optional<Expr> kernel;  // exp/sin/cos of an affine argument
    std::optional<Expr> affine;  // (a + c v)^p or ln(a + c v), base a sum
};

[[noreturn]] void unsupported(const Expr& term, const std::string& why)
{
    throw UnsupportedIntegrandError("cannot integrate '" + to_string(term) + "' in closed form: " + why);
}

bool is_affine_sum(const Expr& e, const Variable& v)
{
    return e.kind() == NodeKind::sum && !differentiate(e, v).depends_on(v);
}

bool is_integrable_kernel(const Expr& f)
{
    return f.kind() == NodeKind::kernel &&
           (f.kernel() == Kernel::exp || f.kernel() == Kernel::sin || f.kernel() == Kernel::cos);
}

void classify_factor(const Expr& term, const Expr& f, const Variable& v, bool split_products, TermShape& shape)
{
    if (!f.depends_on(v)) {
        shape.constant_factors.push_back(f);
        return;
    }
    if (f.kind() == NodeKind::symbol) {
        shape.v_power += 1;
        return;
    }
    if (f.kind() == NodeKind::power && f.base().kind() == NodeKind::symbol) {
        shape.v_power += f.exponent();
        return;
    }
    if (split_products && f.kind() == NodeKind::power && f.base().kind() == NodeKind::product) {
        for (const auto& inner : f.base().operands()) {
            classify_factor(term, normalize(pow(inner, f.exponent())), v, split_products, shape);
        }
        return;
    }
    if (is_integrable_kernel(f)) {
        if (shape.kernel) {
            unsupported(term, "more than one transcendental factor depends on " + to_string(v));
        }
        shape.kernel = f;
        return;
    }
    const bool affine_power = f.kind() == NodeKind::power && is_affine_sum(f.base(), v);
    const bool affine_log = f.kind() == NodeKind::kernel && f.kernel() == Kernel::ln && is_affine_sum(f.argument(), v);
    if (affine_power || affine_log) {
        if (shape.affine) {
            unsupported(term, "more than one non-polynomial factor depends on " + to_string(v));
        }
        shape.affine = f;
        return;
    }
    unsupported(term, "factor '" + to_string(f) + "' is outside the closed-form class");
}

TermShape shape_of(const Expr& term, const Variable& v, bool split_products)
{
    TermShape shape;
    if (term.kind() == NodeKind::product) {
        for (const auto& f : term.operands()) {
            classify_factor(term, f, v, split_products, shape);
        }
    } else {
        classify_factor(term, term, v, split_products, shape);
    }
    return shape;
}

// Integral of v^k * K(a) with a = a0 + c v, by repeated integration by parts.
Expr kernel_moment(Kernel kernel, const Expr& arg, const Expr& c, const Variable& v, int k)
{
    const Expr x = var(v);
    const Expr inv_c = pow(c, Rational(-1));
    if (kernel == Kernel::exp) {
        std::vector<Expr> terms;
        Rational falling(1);  // k!/(k-m)!
        for (int m = 0; m <= k; ++m) {
            if (m > 0) {
                falling *= (k - m + 1);
            }
            const Rational sign = (m % 2 == 0) ? Rational(1) : Rational(-1);
            terms.push_back(Expr(sign * falling) * pow(x, Rational(k - m)) * pow(c, Rational(-(m + 1))));
        }
        return exp(arg) * Expr::sum(std::move(terms));
    }
    // S(k) = -v^k cos(a)/c + k/c C(k-1),  C(k) = v^k sin(a)/c - k/c S(k-1)
    const bool is_sin = kernel == Kernel::sin;
    const Expr lead = is_sin ? -(pow(x, Rational(k)) * cos(arg) * inv_c) : pow(x, Rational(k)) * sin(arg) * inv_c;
    if (k == 0) {
        return lead;
    }
    const Expr rest = kernel_moment(is_sin ? Kernel::cos : Kernel::sin, arg, c, v, k - 1);
    return is_sin ? lead + Expr(k) * inv_c * rest : lead - Expr(k) * inv_c * rest;
}

Expr integrate_term(const Expr& term, const Variable& v, bool definite)
{
    const TermShape shape = shape_of(term, v, definite);
    const Expr constant = Expr::product(shape.constant_factors);
    const Expr x = var(v);
    if (shape.affine) {
        // Only a lone (a + c v)^p or ln(a + c v) is handled.
        if (shape.kernel || shape.v_power != 0) {
            unsupported(term, "product of a power of " + to_string(v) + " with a shifted power or logarithm");
        }
        const Expr& f = *shape.affine;
        const bool is_log = f.kind() == NodeKind::kernel;
        const Expr u = is_log ? f.argument() : f.base();
        const Expr inv_c = pow(differentiate(u, v), Rational(-1));
        if (is_log) {
            return constant * inv_c * (u * ln(u) - u);
        }
        if (f.exponent() == -1) {
            return constant * inv_c * ln(u);
        }
        const Rational p1 = f.exponent() + 1;
        return constant * inv_c * Expr(Rational(1 / p1)) * pow(u, p1);
    }
    if (!shape.kernel) {
        if (shape.v_power == -1) {
            if (definite) {
                unsupported(term, "integral diverges at 0");
            }
            return constant * ln(x);
        }
        if (definite && shape.v_power < -1) {
            unsupported(term, "integral diverges at 0");
        }
        const Rational p1 = shape.v_power + 1;
        return constant * Expr(Rational(1 / p1)) * pow(x, p1);
    }
    const Expr& kernel = *shape.kernel;
    const Expr& arg = kernel.argument();
    const Expr c = differentiate(arg, v);
    if (c.depends_on(v)) {
        unsupported(term, "argument of " + std::string(kernel_name(kernel.kernel())) + " is not affine in " +
                              to_string(v));
    }
    if (shape.v_power.get_den() != 1 || shape.v_power < 0 || shape.v_power > max_parts_depth) {
        unsupported(term, "power of " + to_string(v) + " must be an integer in 0.." + std::to_string(max_parts_depth));
    }
    return constant * kernel_moment(kernel.kernel(), arg, c, v, static_cast<int>(shape.v_power.get_num().get_si()));
}

Expr integrate(const Expr& e, const Variable& v, bool definite)
{
    const Expr n = normalize(e);
    std::vector<Expr> parts;
    if (n.kind() == NodeKind::sum) {
        for (const auto& t : n.operands()) {
            parts.push_back(integrate_term(t, v, definite));
        }
    } else if (!n.is_zero()) {
        parts.push_back(integrate_term(n, v, definite));
    }
    return normalize(Expr::sum(std::move(parts)));
}

}  // namespace

Expr antiderivative(const Expr& e, const Variable& v) { return integrate(e, v, false); }

Expr unit_interval_integral(const Expr& e, const Variable& s)
{
    const Expr primitive = integrate(e, s, true);
    return normalize(substitute(primitive, s, Expr(1)) - substitute(primitive, s, Expr(0)));
}

}  // namespace varmech
