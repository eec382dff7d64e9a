#include "varmech/numeric.hpp"

#include <cmath>
#include <vector>

namespace varmech {

namespace {

[[noreturn]] void domain(const std::string& what) { throw EvaluationDomainError(what); }

double checked(double v, const char* what)
{
    if (!std::isfinite(v)) {
        domain(std::string("non-finite value in ") + what);
    }
    return v;
}

double eval(const Expr& e, const Point& p)
{
    switch (e.kind()) {
    case NodeKind::constant: return e.value().get_d();
    case NodeKind::symbol: {
        const auto it = p.find(e.variable());
        if (it == p.end()) {
            throw UnassignedVariableError("no value for variable '" + to_string(e.variable()) + "'");
        }
        return it->second;
    }
    case NodeKind::sum: {
        double acc = 0.0;
        for (const auto& t : e.operands()) {
            acc += eval(t, p);
        }
        return checked(acc, "sum");
    }
    case NodeKind::product: {
        double acc = 1.0;
        for (const auto& f : e.operands()) {
            acc *= eval(f, p);
        }
        return checked(acc, "product");
    }
    case NodeKind::power: {
        const double b = eval(e.base(), p);
        const Rational& q = e.exponent();
        if (b == 0.0 && sgn(q) < 0) {
            domain("division by zero");
        }
        if (q.get_den() != 1 && b < 0.0) {
            domain("fractional power of a negative value");
        }
        return checked(std::pow(b, q.get_d()), "power");
    }
    case NodeKind::kernel: {
        const double a = eval(e.argument(), p);
        switch (e.kernel()) {
        case Kernel::exp: return checked(std::exp(a), "exp");
        case Kernel::sin: return std::sin(a);
        case Kernel::cos: return std::cos(a);
        case Kernel::ln:
            if (a <= 0.0) {
                domain("ln of a non-positive value");
            }
            return std::log(a);
        case Kernel::sqrt:
            if (a < 0.0) {
                domain("sqrt of a negative value");
            }
            return std::sqrt(a);
        }
    }
    }
    return 0.0;
}

double term_scale(const Expr& e, const Point& p)
{
    if (e.kind() != NodeKind::sum) {
        return std::abs(eval(e, p));
    }
    double s = 0.0;
    for (const auto& t : e.operands()) {
        s = std::max(s, std::abs(eval(t, p)));
    }
    return s;
}

}  // namespace

double evaluate(const Expr& e, const Point& p) { return eval(e, p); }

const char* to_string(ZeroKind k) noexcept
{
    switch (k) {
    case ZeroKind::proven_zero: return "proven_zero";
    case ZeroKind::numerically_zero: return "numerically_zero";
    case ZeroKind::nonzero: return "nonzero";
    }
    return "?";
}

std::uint64_t SampleStream::next()
{
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30U)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27U)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31U);
}

double SampleStream::uniform(double lo, double hi)
{
    const double u = static_cast<double>(next() >> 11U) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

ZeroVerdict is_zero(const Expr& e, const ZeroTestSettings& settings)
{
    if (settings.samples < 1 || !(settings.tol > 0.0)) {
        throw Error("zero test needs samples >= 1 and tol > 0");
    }
    const Expr n = normalize(e);
    ZeroVerdict verdict;
    if (n.is_zero()) {
        return verdict;
    }
    constexpr int max_retries = 10;
    const auto& vars = n.variables();
    SampleStream stream(settings.seed);

    std::vector<Point> points;
    std::vector<double> values;
    points.reserve(settings.samples);
    values.reserve(settings.samples);
    for (std::size_t k = 0; k < settings.samples; ++k) {
        for (int attempt = 0;; ++attempt) {
            Point pt;
            for (const auto& v : vars) {
                pt.emplace(v, stream.uniform(-2.0, 2.0));
            }
            try {
                const double value = eval(n, pt);
                const double scale = term_scale(n, pt);
                verdict.max_abs = std::max(verdict.max_abs, std::abs(value));
                verdict.scale = std::max(verdict.scale, scale);
                points.push_back(std::move(pt));
                values.push_back(value);
                break;
            } catch (const EvaluationDomainError& err) {
                if (attempt >= max_retries) {
                    throw EvaluationDomainError("sample " + std::to_string(k) + " still singular after " +
                                                std::to_string(max_retries) + " retries: " + err.what());
                }
            }
        }
    }
    const double threshold = settings.tol * (1.0 + verdict.scale);
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (std::abs(values[k]) > threshold) {
            verdict.kind = ZeroKind::nonzero;
            verdict.witness = points[k];
            return verdict;
        }
    }
    verdict.kind = ZeroKind::numerically_zero;
    return verdict;
}

}  // namespace varmech
