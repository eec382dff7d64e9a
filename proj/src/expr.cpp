#include "varmech/expr.hpp"

#include <algorithm>
#include <cassert>
#include <optional>
#include <sstream>
#include <utility>

namespace varmech {

// ---------------------------------------------------------------------------
// Variables

Variable Variable::time() { return Variable{VarKind::time, 0, "t"}; }

Variable Variable::parameter(std::string name) { return Variable{VarKind::parameter, 0, std::move(name)}; }

Variable Variable::coordinate(int index, std::string name, int order)
{
    if (order < 0 || order > 3) {
        throw Error("coordinate derivative order out of range: " + std::to_string(order));
    }
    return Variable{static_cast<VarKind>(static_cast<int>(VarKind::coordinate) + order), index, std::move(name)};
}

bool Variable::is_coordinate_family() const noexcept { return kind >= VarKind::coordinate; }

int Variable::order() const
{
    if (!is_coordinate_family()) {
        throw Error("variable '" + name + "' has no derivative order");
    }
    return static_cast<int>(kind) - static_cast<int>(VarKind::coordinate);
}

Variable Variable::with_order(int new_order) const { return coordinate(index, name, new_order); }

std::string to_string(const Variable& v)
{
    if (!v.is_coordinate_family()) {
        return v.name;
    }
    return v.name + std::string(static_cast<std::size_t>(v.order()), '\'');
}

const char* kernel_name(Kernel k) noexcept
{
    switch (k) {
    case Kernel::exp: return "exp";
    case Kernel::sin: return "sin";
    case Kernel::cos: return "cos";
    case Kernel::ln: return "ln";
    case Kernel::sqrt: return "sqrt";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Nodes

struct Node {
    NodeKind kind = NodeKind::constant;
    bool normalized = false;
    Rational value;             // constant
    Variable variable;          // symbol
    std::vector<Expr> operands; // sum, product; [base] for power; [argument] for kernel
    Rational exponent;          // power
    Kernel kernel = Kernel::exp;
    std::vector<Variable> vars;
};

namespace {

std::vector<Variable> merge_vars(const std::vector<Expr>& children)
{
    std::vector<Variable> out;
    for (const auto& c : children) {
        const auto& cv = c.variables();
        if (cv.empty()) {
            continue;
        }
        if (out.empty()) {
            out = cv;
            continue;
        }
        std::vector<Variable> merged;
        merged.reserve(out.size() + cv.size());
        std::set_union(out.begin(), out.end(), cv.begin(), cv.end(), std::back_inserter(merged));
        out = std::move(merged);
    }
    return out;
}

Expr make_constant(Rational value)
{
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::constant;
    n->normalized = true;
    n->value = std::move(value);
    n->value.canonicalize();
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr make_nary(NodeKind kind, std::vector<Expr> operands, bool normalized)
{
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->normalized = normalized;
    n->vars = merge_vars(operands);
    n->operands = std::move(operands);
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr make_power(Expr base, Rational exponent, bool normalized)
{
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::power;
    n->normalized = normalized;
    n->vars = base.variables();
    n->operands.push_back(std::move(base));
    n->exponent = std::move(exponent);
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr make_kernel(Kernel k, Expr arg, bool normalized)
{
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::kernel;
    n->normalized = normalized;
    n->kernel = k;
    n->vars = arg.variables();
    n->operands.push_back(std::move(arg));
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

const Expr& zero_constant()
{
    static const Expr z = make_constant(Rational(0));
    return z;
}

}  // namespace

Expr::Expr() : node_(zero_constant().node_) {}

Expr::Expr(int value) : Expr(Rational(value)) {}

Expr::Expr(Rational value) : node_(make_constant(std::move(value)).node_) {}

Expr::Expr(Variable v)
{
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::symbol;
    n->normalized = true;
    n->vars = {v};
    n->variable = std::move(v);
    node_ = std::move(n);
}

Expr Expr::sum(std::vector<Expr> terms)
{
    if (terms.empty()) {
        return Expr(0);
    }
    if (terms.size() == 1) {
        return std::move(terms.front());
    }
    return make_nary(NodeKind::sum, std::move(terms), false);
}

Expr Expr::product(std::vector<Expr> factors)
{
    if (factors.empty()) {
        return Expr(1);
    }
    if (factors.size() == 1) {
        return std::move(factors.front());
    }
    return make_nary(NodeKind::product, std::move(factors), false);
}

Expr Expr::power(Expr base, Rational exponent)
{
    if (exponent == 1) {
        return base;
    }
    return make_power(std::move(base), std::move(exponent), false);
}

Expr Expr::apply(Kernel k, Expr argument) { return make_kernel(k, std::move(argument), false); }

NodeKind Expr::kind() const noexcept { return node_->kind; }

const Rational& Expr::value() const
{
    assert(kind() == NodeKind::constant);
    return node_->value;
}

const Variable& Expr::variable() const
{
    assert(kind() == NodeKind::symbol);
    return node_->variable;
}

std::span<const Expr> Expr::operands() const { return node_->operands; }

const Expr& Expr::base() const
{
    assert(kind() == NodeKind::power);
    return node_->operands.front();
}

const Rational& Expr::exponent() const
{
    assert(kind() == NodeKind::power);
    return node_->exponent;
}

Kernel Expr::kernel() const
{
    assert(kind() == NodeKind::kernel);
    return node_->kernel;
}

const Expr& Expr::argument() const
{
    assert(kind() == NodeKind::kernel);
    return node_->operands.front();
}

bool Expr::is_zero() const noexcept { return is_constant() && sgn(node_->value) == 0; }

bool Expr::is_one() const noexcept { return is_constant() && node_->value == 1; }

bool Expr::is_normalized() const noexcept { return node_->normalized; }

const std::vector<Variable>& Expr::variables() const noexcept { return node_->vars; }

bool Expr::depends_on(const Variable& v) const
{
    return std::binary_search(node_->vars.begin(), node_->vars.end(), v);
}

bool Expr::depends_on_kind(VarKind k) const
{
    return std::any_of(node_->vars.begin(), node_->vars.end(), [k](const Variable& v) { return v.kind == k; });
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::sum({a, Expr::product({Expr(-1), b})}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::product({a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::product({a, Expr::power(b, Rational(-1))}); }
Expr operator-(const Expr& a) { return Expr::product({Expr(-1), a}); }

Expr pow(const Expr& base, const Rational& exponent) { return Expr::power(base, exponent); }
Expr exp(const Expr& a) { return Expr::apply(Kernel::exp, a); }
Expr sin(const Expr& a) { return Expr::apply(Kernel::sin, a); }
Expr cos(const Expr& a) { return Expr::apply(Kernel::cos, a); }
Expr ln(const Expr& a) { return Expr::apply(Kernel::ln, a); }
Expr sqrt(const Expr& a) { return Expr::apply(Kernel::sqrt, a); }

// ---------------------------------------------------------------------------
// Ordering

namespace {

int rank(const Expr& e)
{
    switch (e.kind()) {
    case NodeKind::constant: return 0;
    case NodeKind::symbol:
        switch (e.variable().kind) {
        case VarKind::parameter: return 1;
        case VarKind::time: return 2;
        case VarKind::coordinate: return 7;
        case VarKind::velocity: return 8;
        case VarKind::acceleration: return 9;
        case VarKind::jerk: return 10;
        }
        return 11;
    case NodeKind::kernel: return 3;
    case NodeKind::sum: return 4;
    case NodeKind::product: return 5;
    case NodeKind::power: return 6;
    }
    return 12;
}

template <typename T>
int three_way(const T& a, const T& b)
{
    if (a < b) {
        return -1;
    }
    if (b < a) {
        return 1;
    }
    return 0;
}

}  // namespace

int compare(const Expr& a, const Expr& b)
{
    if (a.identity() == b.identity()) {
        return 0;
    }
    const int ra = rank(a);
    const int rb = rank(b);
    if (ra != rb) {
        return ra < rb ? -1 : 1;
    }
    switch (a.kind()) {
    case NodeKind::constant: return three_way(a.value(), b.value());
    case NodeKind::symbol: {
        const auto c = a.variable() <=> b.variable();
        return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case NodeKind::kernel:
        if (a.kernel() != b.kernel()) {
            return a.kernel() < b.kernel() ? -1 : 1;
        }
        return compare(a.argument(), b.argument());
    case NodeKind::power:
        if (const int c = compare(a.base(), b.base()); c != 0) {
            return c;
        }
        return three_way(a.exponent(), b.exponent());
    case NodeKind::sum:
    case NodeKind::product: {
        const auto ao = a.operands();
        const auto bo = b.operands();
        const std::size_t n = std::min(ao.size(), bo.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (const int c = compare(ao[i], bo[i]); c != 0) {
                return c;
            }
        }
        return three_way(ao.size(), bo.size());
    }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// Normalization: expressions are converted to a polynomial over canonical
// factors (base^exponent) and rebuilt.

namespace {

struct Factor {
    Expr base;
    Rational exponent;
};

using Monomial = std::vector<Factor>;

int compare_factor(const Factor& a, const Factor& b)
{
    if (const int c = compare(a.base, b.base); c != 0) {
        return c;
    }
    return three_way(a.exponent, b.exponent);
}

// Terms are listed with the "largest" trailing factor first, so that
// accelerations lead velocities, which lead coordinates, and constants trail.
struct MonomialOrder {
    bool operator()(const Monomial& a, const Monomial& b) const
    {
        auto ia = a.rbegin();
        auto ib = b.rbegin();
        for (; ia != a.rend() && ib != b.rend(); ++ia, ++ib) {
            if (const int c = compare_factor(*ia, *ib); c != 0) {
                return c > 0;
            }
        }
        return a.size() > b.size();
    }
};

using Poly = std::map<Monomial, Rational, MonomialOrder>;

Poly to_poly(const Expr& e);
Poly factor_poly(const Expr& base, const Rational& exponent);
Expr from_poly(const Poly& p);
Poly poly_mul(const Poly& a, const Poly& b);

void add_term(Poly& p, const Monomial& m, const Rational& c)
{
    if (sgn(c) == 0) {
        return;
    }
    auto [it, inserted] = p.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (sgn(it->second) == 0) {
            p.erase(it);
        }
    }
}

Poly poly_constant(const Rational& c)
{
    Poly p;
    add_term(p, {}, c);
    return p;
}

Poly poly_atom(const Expr& base, const Rational& exponent)
{
    Poly p;
    p.emplace(Monomial{Factor{base, exponent}}, Rational(1));
    return p;
}

void poly_add_into(Poly& acc, const Poly& b)
{
    for (const auto& [m, c] : b) {
        add_term(acc, m, c);
    }
}

Poly poly_scale(const Poly& a, const Rational& s)
{
    Poly out;
    if (sgn(s) == 0) {
        return out;
    }
    for (const auto& [m, c] : a) {
        out.emplace(m, c * s);
    }
    return out;
}

bool is_integer(const Rational& r) { return r.get_den() == 1; }

bool is_positive_integer(const Rational& r) { return is_integer(r) && sgn(r) > 0; }

Rational rational_pow(const Rational& base, long k)
{
    Rational result(1);
    Rational b = base;
    const bool invert = k < 0;
    unsigned long n = static_cast<unsigned long>(invert ? -k : k);
    while (n != 0) {
        if ((n & 1U) != 0U) {
            result *= b;
        }
        b *= b;
        n >>= 1U;
    }
    if (invert) {
        result = 1 / result;
    }
    result.canonicalize();
    return result;
}

// Exact b-th root of a non-negative integer, if one exists.
bool exact_root(const mpz_class& value, unsigned long degree, mpz_class& out)
{
    return mpz_root(out.get_mpz_t(), value.get_mpz_t(), degree) != 0;
}

Poly constant_power(const Rational& c, const Rational& p)
{
    if (is_integer(p)) {
        if (sgn(c) == 0) {
            if (sgn(p) > 0) {
                return {};
            }
            return poly_atom(Expr(c), p);  // division by zero; kept as an atom
        }
        return poly_constant(rational_pow(c, p.get_num().get_si()));
    }
    if (sgn(c) <= 0) {
        if (sgn(c) == 0 && sgn(p) > 0) {
            return {};
        }
        return poly_atom(Expr(c), p);
    }
    // c^(a/b) with c > 0: exact when numerator and denominator are perfect b-th powers.
    const Rational raised = rational_pow(c, p.get_num().get_si());
    const unsigned long degree = p.get_den().get_ui();
    mpz_class num_root;
    mpz_class den_root;
    if (exact_root(raised.get_num(), degree, num_root) && exact_root(raised.get_den(), degree, den_root)) {
        return poly_constant(Rational(num_root, den_root));
    }
    return poly_atom(Expr(c), p);
}

// Splits a normalized non-sum term into coefficient and canonical factors.
std::pair<Rational, Monomial> decompose_term(const Expr& e)
{
    switch (e.kind()) {
    case NodeKind::constant: return {e.value(), {}};
    case NodeKind::symbol:
    case NodeKind::kernel:
    case NodeKind::sum: return {Rational(1), Monomial{Factor{e, Rational(1)}}};
    case NodeKind::power: return {Rational(1), Monomial{Factor{e.base(), e.exponent()}}};
    case NodeKind::product: {
        Rational coef(1);
        Monomial m;
        for (const auto& f : e.operands()) {
            if (f.is_constant()) {
                coef = f.value();
            } else if (f.kind() == NodeKind::power) {
                m.push_back(Factor{f.base(), f.exponent()});
            } else {
                m.push_back(Factor{f, Rational(1)});
            }
        }
        return {coef, m};
    }
    }
    return {Rational(0), {}};
}

Expr factor_expr(const Factor& f)
{
    if (f.exponent == 1) {
        return f.base;
    }
    return make_power(f.base, f.exponent, true);
}

Expr term_expr(const Rational& coef, const Monomial& m)
{
    if (m.empty()) {
        return Expr(coef);
    }
    if (coef == 1 && m.size() == 1) {
        return factor_expr(m.front());
    }
    std::vector<Expr> ops;
    ops.reserve(m.size() + 1);
    if (coef != 1) {
        ops.emplace_back(coef);
    }
    for (const auto& f : m) {
        ops.push_back(factor_expr(f));
    }
    return make_nary(NodeKind::product, std::move(ops), true);
}

Expr from_poly(const Poly& p)
{
    if (p.empty()) {
        return Expr(0);
    }
    if (p.size() == 1) {
        return term_expr(p.begin()->second, p.begin()->first);
    }
    std::vector<Expr> terms;
    terms.reserve(p.size());
    for (const auto& [m, c] : p) {
        terms.push_back(term_expr(c, m));
    }
    return make_nary(NodeKind::sum, std::move(terms), true);
}

bool is_exp(const Expr& e) { return e.kind() == NodeKind::kernel && e.kernel() == Kernel::exp; }

// Whether base^exponent may stand as a factor of a canonical monomial.
bool is_canonical_factor(const Expr& base, const Rational& exponent)
{
    switch (base.kind()) {
    case NodeKind::symbol: return true;
    case NodeKind::kernel: return !is_exp(base) || exponent == 1;
    case NodeKind::constant: return !is_integer(exponent) || (sgn(base.value()) == 0 && sgn(exponent) < 0);
    case NodeKind::sum: return !is_positive_integer(exponent);
    case NodeKind::product:
    case NodeKind::power: return !is_integer(exponent);
    }
    return false;
}

Poly monomial_product(const Monomial& a, const Monomial& b)
{
    std::vector<Factor> all;
    all.reserve(a.size() + b.size());
    std::vector<Expr> exp_args;
    for (const auto* side : {&a, &b}) {
        for (const auto& f : *side) {
            if (is_exp(f.base)) {
                exp_args.push_back(f.exponent == 1 ? f.base.argument()
                                                   : Expr::product({Expr(f.exponent), f.base.argument()}));
            } else {
                all.push_back(f);
            }
        }
    }
    std::sort(all.begin(), all.end(), [](const Factor& x, const Factor& y) { return compare(x.base, y.base) < 0; });

    Monomial simple;
    std::vector<Factor> deferred;
    for (std::size_t i = 0; i < all.size();) {
        Factor merged = all[i];
        std::size_t j = i + 1;
        for (; j < all.size() && compare(all[j].base, merged.base) == 0; ++j) {
            merged.exponent += all[j].exponent;
        }
        i = j;
        if (sgn(merged.exponent) == 0) {
            continue;
        }
        if (is_canonical_factor(merged.base, merged.exponent)) {
            simple.push_back(std::move(merged));
        } else {
            deferred.push_back(std::move(merged));
        }
    }
    if (!exp_args.empty()) {
        Expr combined = exp_args.size() == 1 ? exp_args.front() : Expr::sum(std::move(exp_args));
        combined = normalize(combined);
        if (!combined.is_zero()) {
            Factor ef{make_kernel(Kernel::exp, combined, true), Rational(1)};
            auto pos = std::lower_bound(simple.begin(), simple.end(), ef, [](const Factor& x, const Factor& y) {
                return compare(x.base, y.base) < 0;
            });
            simple.insert(pos, std::move(ef));
        }
    }

    Poly result;
    result.emplace(std::move(simple), Rational(1));
    for (const auto& f : deferred) {
        result = poly_mul(result, factor_poly(f.base, f.exponent));
    }
    return result;
}

Poly poly_mul(const Poly& a, const Poly& b)
{
    Poly out;
    for (const auto& [ma, ca] : a) {
        for (const auto& [mb, cb] : b) {
            const Rational c = ca * cb;
            if (ma.empty()) {
                add_term(out, mb, c);
            } else if (mb.empty()) {
                add_term(out, ma, c);
            } else {
                for (const auto& [m, k] : monomial_product(ma, mb)) {
                    add_term(out, m, c * k);
                }
            }
        }
    }
    return out;
}

Poly poly_pow(Poly base, unsigned long n)
{
    Poly result = poly_constant(Rational(1));
    while (n != 0) {
        if ((n & 1U) != 0U) {
            result = poly_mul(result, base);
        }
        n >>= 1U;
        if (n != 0) {
            base = poly_mul(base, base);
        }
    }
    return result;
}

// base is normalized.
Poly factor_poly(const Expr& base, const Rational& exponent)
{
    if (sgn(exponent) == 0) {
        return poly_constant(Rational(1));
    }
    switch (base.kind()) {
    case NodeKind::constant: return constant_power(base.value(), exponent);
    case NodeKind::symbol: return poly_atom(base, exponent);
    case NodeKind::kernel: {
        if (!is_exp(base) || exponent == 1) {
            return poly_atom(base, exponent);
        }
        const Expr arg = normalize(Expr::product({Expr(exponent), base.argument()}));
        if (arg.is_zero()) {
            return poly_constant(Rational(1));
        }
        return poly_atom(make_kernel(Kernel::exp, arg, true), Rational(1));
    }
    case NodeKind::sum: {
        if (is_positive_integer(exponent)) {
            return poly_pow(to_poly(base), exponent.get_num().get_ui());
        }
        const Poly p = to_poly(base);
        const Rational lead = p.begin()->second;
        if (lead == 1 || (!is_integer(exponent) && sgn(lead) < 0)) {
            return poly_atom(base, exponent);
        }
        const Expr scaled = from_poly(poly_scale(p, 1 / Rational(lead)));
        return poly_mul(constant_power(lead, exponent), poly_atom(scaled, exponent));
    }
    case NodeKind::product:
    case NodeKind::power: {
        auto [coef, m] = decompose_term(base);
        if (is_integer(exponent)) {
            Poly result = constant_power(coef, exponent);
            for (const auto& f : m) {
                result = poly_mul(result, factor_poly(f.base, f.exponent * exponent));
            }
            return result;
        }
        if (sgn(coef) < 0) {
            return poly_atom(base, exponent);
        }
        Poly result = constant_power(coef, exponent);
        if (m.size() == 1) {
            const Factor& f = m.front();
            const bool even = is_integer(f.exponent) && mpz_even_p(f.exponent.get_num().get_mpz_t()) != 0;
            if (even) {
                return poly_mul(result, poly_atom(factor_expr(f), exponent));
            }
            return poly_mul(result, factor_poly(f.base, f.exponent * exponent));
        }
        return poly_mul(result, poly_atom(term_expr(Rational(1), m), exponent));
    }
    }
    return {};
}

Poly kernel_poly(Kernel k, const Expr& raw_arg)
{
    const Expr arg = normalize(raw_arg);
    switch (k) {
    case Kernel::exp:
        if (arg.is_zero()) {
            return poly_constant(Rational(1));
        }
        break;
    case Kernel::sin:
        if (arg.is_zero()) {
            return {};
        }
        break;
    case Kernel::cos:
        if (arg.is_zero()) {
            return poly_constant(Rational(1));
        }
        break;
    case Kernel::ln:
        if (arg.is_one()) {
            return {};
        }
        if (is_exp(arg)) {
            return to_poly(arg.argument());
        }
        break;
    case Kernel::sqrt: return factor_poly(arg, Rational(1, 2));
    }
    return poly_atom(make_kernel(k, arg, true), Rational(1));
}

Poly to_poly(const Expr& e)
{
    if (e.is_normalized()) {
        Poly p;
        if (e.kind() == NodeKind::sum) {
            for (const auto& t : e.operands()) {
                auto [c, m] = decompose_term(t);
                p.emplace(std::move(m), std::move(c));
            }
        } else {
            auto [c, m] = decompose_term(e);
            add_term(p, m, c);
        }
        return p;
    }
    switch (e.kind()) {
    case NodeKind::constant: return poly_constant(e.value());
    case NodeKind::symbol: return poly_atom(e, Rational(1));
    case NodeKind::sum: {
        Poly acc;
        for (const auto& t : e.operands()) {
            poly_add_into(acc, to_poly(t));
        }
        return acc;
    }
    case NodeKind::product: {
        Poly acc = poly_constant(Rational(1));
        for (const auto& f : e.operands()) {
            acc = poly_mul(acc, to_poly(f));
            if (acc.empty()) {
                break;
            }
        }
        return acc;
    }
    case NodeKind::power: {
        // (b^q)^p and (b*c)^p with integer p are flattened before the base is
        // normalized, so that 1/(x + 1)^2 meets (x + 1)^-2 and not an expansion.
        const Expr& b = e.base();
        const Rational& p = e.exponent();
        if (is_integer(p) && !b.is_normalized()) {
            if (b.kind() == NodeKind::power) {
                return to_poly(Expr::power(b.base(), b.exponent() * p));
            }
            if (b.kind() == NodeKind::product) {
                Poly acc = poly_constant(Rational(1));
                for (const auto& f : b.operands()) {
                    acc = poly_mul(acc, to_poly(Expr::power(f, p)));
                }
                return acc;
            }
        }
        return factor_poly(normalize(b), p);
    }
    case NodeKind::kernel: return kernel_poly(e.kernel(), e.argument());
    }
    return {};
}

// Denominator cancellation. Terms carrying B^-k for a polynomial sum B are
// brought over B^K, and B is divided out of the numerator as often as it
// goes exactly. This is what makes results such as (exp(c) - 1)/c from
// straight-line integrals cancel against their polynomial counterparts.

bool is_polynomial_sum(const Expr& b)
{
    if (b.kind() != NodeKind::sum) {
        return false;
    }
    for (const auto& t : b.operands()) {
        for (const auto& f : decompose_term(t).second) {
            if (f.base.kind() != NodeKind::symbol || !is_positive_integer(f.exponent)) {
                return false;
            }
        }
    }
    return true;
}

// Exponent of z in m; false when z occurs with a negative or fractional power.
bool degree_of(const Monomial& m, const Expr& z, long& degree)
{
    degree = 0;
    for (const auto& f : m) {
        if (compare(f.base, z) == 0) {
            if (!is_integer(f.exponent) || sgn(f.exponent) < 0) {
                return false;
            }
            degree = f.exponent.get_num().get_si();
        }
    }
    return true;
}

bool poly_degree(const Poly& p, const Expr& z, long& degree)
{
    degree = -1;
    for (const auto& [m, c] : p) {
        long d = 0;
        if (!degree_of(m, z, d)) {
            return false;
        }
        degree = std::max(degree, d);
    }
    return true;
}

Poly coefficient(const Poly& p, const Expr& z, long degree)
{
    Poly out;
    for (const auto& [m, c] : p) {
        long d = 0;
        if (degree_of(m, z, d) && d == degree) {
            Monomial rest;
            for (const auto& f : m) {
                if (compare(f.base, z) != 0) {
                    rest.push_back(f);
                }
            }
            add_term(out, rest, c);
        }
    }
    return out;
}

// Exact quotient n / b, where b is a polynomial in symbols only.
std::optional<Poly> exact_divide(const Poly& n, const Poly& b)
{
    if (b.empty()) {
        return std::nullopt;
    }
    if (b.size() == 1 && b.begin()->first.empty()) {
        return poly_scale(n, 1 / b.begin()->second);
    }
    // Main variable: the largest symbol occurring in b.
    Expr z;
    bool found = false;
    for (const auto& [m, c] : b) {
        for (const auto& f : m) {
            if (!found || compare(f.base, z) > 0) {
                z = f.base;
                found = true;
            }
        }
    }
    long d = 0;
    poly_degree(b, z, d);
    const Poly lead = coefficient(b, z, d);
    Poly remainder = n;
    Poly quotient;
    while (!remainder.empty()) {
        long e = 0;
        if (!poly_degree(remainder, z, e) || e < d) {
            return std::nullopt;
        }
        const auto t = exact_divide(coefficient(remainder, z, e), lead);
        if (!t) {
            return std::nullopt;
        }
        Poly step = e > d ? poly_mul(*t, poly_atom(z, Rational(e - d))) : *t;
        poly_add_into(quotient, step);
        poly_add_into(remainder, poly_scale(poly_mul(step, b), Rational(-1)));
    }
    return quotient;
}

// Whether p is zero once every polynomial denominator is cleared at once.
// Per-base cancellation misses sums such as 1/(x + 1)^2 - 1/(x^2 + 2*x + 1).
bool vanishes_over_common_denominator(const Poly& p)
{
    constexpr std::size_t max_bases = 4;
    std::vector<std::pair<Expr, long>> bases;
    for (const auto& [m, c] : p) {
        for (const auto& f : m) {
            if (sgn(f.exponent) >= 0 || !is_integer(f.exponent) || !is_polynomial_sum(f.base)) {
                continue;
            }
            const long k = -f.exponent.get_num().get_si();
            auto it = std::find_if(bases.begin(), bases.end(), [&](const auto& b) { return same(b.first, f.base); });
            if (it == bases.end()) {
                bases.emplace_back(f.base, k);
            } else {
                it->second = std::max(it->second, k);
            }
        }
    }
    if (bases.size() < 2 || bases.size() > max_bases) {
        return false;
    }
    Poly numerator;
    for (const auto& [m, c] : p) {
        Poly term;
        Monomial rest;
        std::vector<long> powers(bases.size(), 0);
        for (const auto& f : m) {
            auto it = std::find_if(bases.begin(), bases.end(), [&](const auto& b) { return same(b.first, f.base); });
            if (it != bases.end() && sgn(f.exponent) < 0) {
                powers[static_cast<std::size_t>(it - bases.begin())] = -f.exponent.get_num().get_si();
            } else {
                rest.push_back(f);
            }
        }
        term.emplace(std::move(rest), c);
        for (std::size_t i = 0; i < bases.size(); ++i) {
            const long missing = bases[i].second - powers[i];
            if (missing > 0) {
                term = poly_mul(term, poly_pow(to_poly(bases[i].first), static_cast<unsigned long>(missing)));
            }
        }
        poly_add_into(numerator, term);
    }
    return numerator.empty();
}

Poly cancel_denominators(Poly p)
{
    std::vector<Expr> done;
    for (;;) {
        // Next polynomial denominator not yet handled, with its largest power.
        std::optional<Expr> base;
        long K = 0;
        for (const auto& [m, c] : p) {
            for (const auto& f : m) {
                if (sgn(f.exponent) >= 0 || !is_integer(f.exponent) || !is_polynomial_sum(f.base)) {
                    continue;
                }
                const bool seen = std::any_of(done.begin(), done.end(), [&](const Expr& x) { return same(x, f.base); });
                if (seen || (base && !same(*base, f.base))) {
                    continue;
                }
                base = f.base;
                K = std::max(K, -f.exponent.get_num().get_si());
            }
        }
        if (!base) {
            return vanishes_over_common_denominator(p) ? Poly{} : p;
        }
        done.push_back(*base);
        const Poly b = to_poly(*base);

        Poly numerator;
        for (const auto& [m, c] : p) {
            Monomial rest;
            long k = 0;
            for (const auto& f : m) {
                if (compare(f.base, *base) == 0) {
                    k = -f.exponent.get_num().get_si();
                } else {
                    rest.push_back(f);
                }
            }
            Poly term;
            term.emplace(std::move(rest), c);
            poly_add_into(numerator, K - k > 0 ? poly_mul(term, poly_pow(b, static_cast<unsigned long>(K - k))) : term);
        }
        if (numerator.empty()) {
            return {};
        }
        long removed = 0;
        while (removed < K) {
            auto q = exact_divide(numerator, b);
            if (!q) {
                break;
            }
            numerator = std::move(*q);
            ++removed;
        }
        if (removed == 0) {
            continue;
        }
        p = removed < K ? poly_mul(numerator, poly_atom(*base, Rational(removed - K))) : std::move(numerator);
    }
}

}  // namespace

Expr normalize(const Expr& e)
{
    if (e.is_normalized()) {
        return e;
    }
    return from_poly(cancel_denominators(to_poly(e)));
}

// ---------------------------------------------------------------------------
// Differentiation and substitution

namespace {

Expr raw_derivative(const Expr& e, const Variable& v)
{
    if (!e.depends_on(v)) {
        return Expr(0);
    }
    switch (e.kind()) {
    case NodeKind::constant: return Expr(0);
    case NodeKind::symbol: return Expr(1);
    case NodeKind::sum: {
        std::vector<Expr> terms;
        for (const auto& t : e.operands()) {
            if (t.depends_on(v)) {
                terms.push_back(raw_derivative(t, v));
            }
        }
        return Expr::sum(std::move(terms));
    }
    case NodeKind::product: {
        const auto ops = e.operands();
        std::vector<Expr> terms;
        for (std::size_t i = 0; i < ops.size(); ++i) {
            if (!ops[i].depends_on(v)) {
                continue;
            }
            std::vector<Expr> factors(ops.begin(), ops.end());
            factors[i] = raw_derivative(ops[i], v);
            terms.push_back(Expr::product(std::move(factors)));
        }
        return Expr::sum(std::move(terms));
    }
    case NodeKind::power: {
        const Rational& p = e.exponent();
        return Expr::product({Expr(p), Expr::power(e.base(), p - 1), raw_derivative(e.base(), v)});
    }
    case NodeKind::kernel: {
        const Expr& a = e.argument();
        const Expr da = raw_derivative(a, v);
        switch (e.kernel()) {
        case Kernel::exp: return Expr::product({e, da});
        case Kernel::sin: return Expr::product({cos(a), da});
        case Kernel::cos: return Expr::product({Expr(-1), sin(a), da});
        case Kernel::ln: return Expr::product({da, Expr::power(a, Rational(-1))});
        case Kernel::sqrt: return Expr::product({Expr(Rational(1, 2)), Expr::power(a, Rational(-1, 2)), da});
        }
    }
    }
    return Expr(0);
}

bool touches(const Expr& e, const std::map<Variable, Expr>& reps)
{
    return std::any_of(e.variables().begin(), e.variables().end(),
                       [&](const Variable& v) { return reps.count(v) != 0; });
}

Expr raw_substitute(const Expr& e, const std::map<Variable, Expr>& reps)
{
    if (!touches(e, reps)) {
        return e;
    }
    switch (e.kind()) {
    case NodeKind::constant: return e;
    case NodeKind::symbol: return reps.at(e.variable());
    case NodeKind::sum:
    case NodeKind::product: {
        std::vector<Expr> ops;
        ops.reserve(e.operands().size());
        for (const auto& o : e.operands()) {
            ops.push_back(raw_substitute(o, reps));
        }
        return e.kind() == NodeKind::sum ? Expr::sum(std::move(ops)) : Expr::product(std::move(ops));
    }
    case NodeKind::power: return Expr::power(raw_substitute(e.base(), reps), e.exponent());
    case NodeKind::kernel: return Expr::apply(e.kernel(), raw_substitute(e.argument(), reps));
    }
    return e;
}

}  // namespace

Expr differentiate(const Expr& e, const Variable& v) { return normalize(raw_derivative(e, v)); }

Expr substitute(const Expr& e, const Variable& target, const Expr& replacement)
{
    return substitute(e, std::map<Variable, Expr>{{target, replacement}});
}

Expr substitute(const Expr& e, const std::map<Variable, Expr>& replacements)
{
    return normalize(raw_substitute(e, replacements));
}

// ---------------------------------------------------------------------------
// Printing

namespace {

enum Precedence { prec_sum = 1, prec_product = 2, prec_unary = 3, prec_power = 4, prec_atom = 5 };

void print(std::ostream& os, const Expr& e, int context);

bool is_negative_term(const Expr& e)
{
    if (e.is_constant()) {
        return sgn(e.value()) < 0;
    }
    if (e.kind() == NodeKind::product && !e.operands().empty() && e.operands().front().is_constant()) {
        return sgn(e.operands().front().value()) < 0;
    }
    return false;
}

void print_rational(std::ostream& os, const Rational& r, int context)
{
    const bool needs_parens = (sgn(r) < 0 && context > prec_sum) || (!is_integer(r) && context > prec_product);
    if (needs_parens) {
        os << '(';
    }
    os << to_string(r);
    if (needs_parens) {
        os << ')';
    }
}

void print_power_item(std::ostream& os, const Expr& base, const Rational& exponent)
{
    if (exponent == Rational(1, 2)) {
        os << "sqrt(";
        print(os, base, 0);
        os << ')';
        return;
    }
    print(os, base, prec_atom);
    if (exponent == 1) {
        return;
    }
    os << '^';
    if (is_integer(exponent) && sgn(exponent) > 0) {
        os << exponent.get_num().get_str();
    } else {
        os << '(' << to_string(exponent) << ')';
    }
}

// Prints a product (or single factor) whose coefficient is taken as |coef|.
void print_term_magnitude(std::ostream& os, const Expr& e)
{
    Rational coef(1);
    std::vector<std::pair<Expr, Rational>> numerator;
    std::vector<std::pair<Expr, Rational>> denominator;
    auto classify = [&](const Expr& f) {
        if (f.is_constant()) {
            coef *= f.value();
        } else if (f.kind() == NodeKind::power && sgn(f.exponent()) < 0) {
            denominator.emplace_back(f.base(), -f.exponent());
        } else if (f.kind() == NodeKind::power) {
            numerator.emplace_back(f.base(), f.exponent());
        } else {
            numerator.emplace_back(f, Rational(1));
        }
    };
    if (e.kind() == NodeKind::product) {
        for (const auto& f : e.operands()) {
            classify(f);
        }
    } else {
        classify(e);
    }
    coef = abs(coef);

    std::vector<std::string> num_items;
    std::vector<std::string> den_items;
    if (coef.get_num() != 1 || numerator.empty()) {
        num_items.push_back(coef.get_num().get_str());
    }
    if (coef.get_den() != 1) {
        den_items.push_back(coef.get_den().get_str());
    }
    auto render = [](const Expr& base, const Rational& exponent) {
        std::ostringstream s;
        print_power_item(s, base, exponent);
        return s.str();
    };
    for (const auto& [b, p] : numerator) {
        num_items.push_back(render(b, p));
    }
    for (const auto& [b, p] : denominator) {
        den_items.push_back(render(b, p));
    }
    for (std::size_t i = 0; i < num_items.size(); ++i) {
        if (i != 0) {
            os << '*';
        }
        os << num_items[i];
    }
    if (den_items.size() == 1) {
        os << '/' << den_items.front();
    } else if (den_items.size() > 1) {
        os << "/(";
        for (std::size_t i = 0; i < den_items.size(); ++i) {
            if (i != 0) {
                os << '*';
            }
            os << den_items[i];
        }
        os << ')';
    }
}

bool is_simple_term(const Expr& e)
{
    if (e.kind() != NodeKind::product) {
        return e.kind() == NodeKind::power || e.kind() == NodeKind::symbol || e.kind() == NodeKind::kernel;
    }
    return true;
}

void print_signed_term(std::ostream& os, const Expr& e, bool leading)
{
    const bool negative = is_negative_term(e);
    if (leading) {
        if (negative) {
            os << '-';
        }
    } else {
        os << (negative ? " - " : " + ");
    }
    if (e.is_constant()) {
        os << to_string(abs(e.value()));
    } else if (is_simple_term(e)) {
        print_term_magnitude(os, e);
    } else {
        print(os, e, prec_product);
    }
}

void print(std::ostream& os, const Expr& e, int context)
{
    switch (e.kind()) {
    case NodeKind::constant: print_rational(os, e.value(), context); return;
    case NodeKind::symbol: os << to_string(e.variable()); return;
    case NodeKind::kernel:
        os << kernel_name(e.kernel()) << '(';
        print(os, e.argument(), 0);
        os << ')';
        return;
    case NodeKind::sum: {
        const bool parens = context > prec_sum;
        if (parens) {
            os << '(';
        }
        bool first = true;
        for (const auto& t : e.operands()) {
            print_signed_term(os, t, first);
            first = false;
        }
        if (parens) {
            os << ')';
        }
        return;
    }
    case NodeKind::product:
    case NodeKind::power: {
        const bool negative = is_negative_term(e);
        const bool compound = e.kind() == NodeKind::product || sgn(e.exponent()) < 0 || e.exponent() != Rational(1, 2);
        const bool parens = (negative && context > prec_sum) || (compound && context >= prec_power);
        if (parens) {
            os << '(';
        }
        if (negative) {
            os << '-';
        }
        print_term_magnitude(os, e);
        if (parens) {
            os << ')';
        }
        return;
    }
    }
}

}  // namespace

std::string to_string(const Rational& r)
{
    Rational c = r;
    c.canonicalize();
    return c.get_str();
}

std::string to_string(const Expr& e)
{
    std::ostringstream os;
    print(os, e, 0);
    return os.str();
}

}  // namespace varmech
