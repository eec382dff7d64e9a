#include "varmech/system.hpp"

namespace varmech {

Variable OdeSystem::coordinate(int index, int order) const
{
    if (index < 1 || index > n()) {
        throw Error("coordinate index " + std::to_string(index) + " out of range 1.." + std::to_string(n()));
    }
    return Variable::coordinate(index, coordinates[static_cast<std::size_t>(index) - 1], order);
}

void OdeSystem::validate() const
{
    if (equations.size() != coordinates.size()) {
        throw Error("system has " + std::to_string(equations.size()) + " equations for " +
                    std::to_string(coordinates.size()) + " coordinates");
    }
    for (const auto& f : equations) {
        if (f.depends_on_kind(VarKind::jerk)) {
            throw JerkInInputError();
        }
        for (const auto& v : f.variables()) {
            if (v.is_coordinate_family() &&
                (v.index < 1 || v.index > n() || coordinates[static_cast<std::size_t>(v.index) - 1] != v.name)) {
                throw Error("equation refers to unknown coordinate '" + to_string(v) + "'");
            }
        }
    }
}

}  // namespace varmech
