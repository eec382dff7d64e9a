#include "varmech/calculus.hpp"

namespace varmech {

Expr total_time_derivative(const Expr& e)
{
    if (e.depends_on_kind(VarKind::jerk)) {
        throw JerkInInputError();
    }
    std::vector<Expr> terms;
    for (const auto& v : e.variables()) {
        if (v.kind == VarKind::time) {
            terms.push_back(differentiate(e, v));
        } else if (v.is_coordinate_family()) {
            terms.push_back(differentiate(e, v) * var(v.with_order(v.order() + 1)));
        }
    }
    return normalize(Expr::sum(std::move(terms)));
}

std::vector<Expr> euler_lagrange(const Expr& lagrangian, const std::vector<std::string>& coordinates)
{
    if (lagrangian.depends_on_kind(VarKind::acceleration) || lagrangian.depends_on_kind(VarKind::jerk)) {
        throw AccelerationInLagrangianError();
    }
    std::vector<Expr> out;
    out.reserve(coordinates.size());
    for (std::size_t i = 0; i < coordinates.size(); ++i) {
        const auto x = Variable::coordinate(static_cast<int>(i) + 1, coordinates[i]);
        const Expr momentum = differentiate(lagrangian, x.with_order(1));
        out.push_back(normalize(total_time_derivative(momentum) - differentiate(lagrangian, x)));
    }
    return out;
}

std::vector<std::string> default_coordinate_names(int n)
{
    std::vector<std::string> names;
    for (int i = 1; i <= n; ++i) {
        names.push_back("x" + std::to_string(i));
    }
    return names;
}

}  // namespace varmech
