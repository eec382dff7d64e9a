#include <algorithm>

#include "generators.hpp"
#include "helpers.hpp"
#include "varmech/helmholtz.hpp"

using namespace varmech;
using namespace varmech::test;

namespace {

const ResidualCheck& find(const HelmholtzReport& r, Condition c, int i, int j)
{
    const auto it = std::find_if(r.checks.begin(), r.checks.end(),
                                 [&](const ResidualCheck& k) { return k.condition == c && k.i == i && k.j == j; });
    REQUIRE(it != r.checks.end());
    return *it;
}

}  // namespace

TEST_SUITE("helmholtz")
{
    TEST_CASE("acceleration decomposition")
    {
        const AccelDecomposition d = decompose(system({"x1"}, {"b", "w"}, {"exp(b*t)*(x1'' + b*x1' + w^2*x1)"}));
        CHECK(str(d.Q[0][0]) == "exp(b*t)");
        CHECK(proven_zero(d.P[0] - ex("exp(b*t)*(b*x1' + w^2*x1)")));
        CHECK(d.symmetric);

        const AccelDecomposition shm = decompose(system({"x1"}, {"w"}, {"x1'' + w^2*x1"}));
        CHECK(str(shm.Q[0][0]) == "1");
        CHECK(str(shm.P[0]) == "w^2*x1");

        CHECK_THROWS_AS((void)decompose(system({"x1"}, {}, {"x1''^2"})), NonlinearAccelerationError);

        const AccelDecomposition skew = decompose(system({"x1", "x2"}, {}, {"x1'' + x2''", "x2''"}));
        CHECK_FALSE(skew.symmetric);
    }

    TEST_CASE("simple harmonic oscillator passes")
    {
        const HelmholtzReport r = check(system({"x1"}, {"w"}, {"x1'' + w^2*x1"}));
        CHECK(r.outcome == Outcome::pass);
        CHECK(r.h1_vacuous);
        CHECK(r.h2_vacuous);
        REQUIRE(r.checks.size() == 1);
        CHECK(r.checks[0].condition == Condition::H3);
        CHECK(r.checks[0].residual.is_zero());
        CHECK(r.checks[0].verdict.kind == ZeroKind::proven_zero);
    }

    TEST_CASE("damped oscillator fails H3 with residual 2b")
    {
        const HelmholtzReport r = check(system({"x1"}, {"b", "w"}, {"x1'' + b*x1' + w^2*x1"}));
        CHECK(r.outcome == Outcome::fail);
        CHECK(to_string(find(r, Condition::H3, 1, 1).residual) == "2*b");
        CHECK(find(r, Condition::H3, 1, 1).verdict.kind == ZeroKind::nonzero);

        const HelmholtzReport fixed = check(system({"x1"}, {"b", "w"}, {"exp(b*t)*(x1'' + b*x1' + w^2*x1)"}));
        CHECK(fixed.outcome == Outcome::pass);
    }

    TEST_CASE("H1 failure")
    {
        const HelmholtzReport r = check(system({"x1", "x2"}, {}, {"x1'' + x2''", "x2''"}));
        CHECK(r.outcome == Outcome::fail);
        CHECK(str(find(r, Condition::H1, 1, 2).residual) == "1");
        CHECK_FALSE(r.h1_vacuous);
    }

    TEST_CASE("H2 failure from a non-potential force")
    {
        const HelmholtzReport r = check(system({"x1", "x2"}, {}, {"x1'' + x2", "x2''"}));
        CHECK(r.outcome == Outcome::fail);
        CHECK(str(find(r, Condition::H2, 1, 2).residual) == "1");
    }

    TEST_CASE("H2 residual is an identity in the jerk variables")
    {
        // dF1/dx2' carries an acceleration, so its time derivative carries x2'''.
        const OdeSystem sys = system({"x1", "x2"}, {}, {"x1'' + x2'*x2''", "x2''"});
        const Expr h2 = h2_residual(sys, 1, 2);
        CHECK(h2.depends_on_kind(VarKind::jerk));
        CHECK_FALSE(check(sys).passed());
    }

    TEST_CASE("symbolically hidden zero passes with caveat")
    {
        const HelmholtzReport r = check(system({"x1"}, {}, {"x1'' + (sin(t)^2 + cos(t)^2 - 1)*x1'"}));
        CHECK(r.outcome == Outcome::pass_with_caveat);
        CHECK(r.passed());
        CHECK(find(r, Condition::H3, 1, 1).verdict.kind == ZeroKind::numerically_zero);
    }

    TEST_CASE("derived conditions")
    {
        const auto zero = [](const OdeSystem& sys) { return derived_conditions(decompose(sys)).all_zero(); };
        CHECK(zero(system({"x1"}, {"w"}, {"x1'' + w^2*x1"})));
        const DiagnosticReport dho = derived_conditions(decompose(
            system({"x1"}, {"b", "w"}, {"exp(b*t)*(x1'' + b*x1' + w^2*x1)"})));
        CHECK(dho.all_zero());
        for (const auto& c : dho.checks) {
            if (c.name == "velocity_symmetry") {
                CHECK(c.residual.is_zero());
            }
        }
        CHECK(zero(system({"x1", "x2"}, {}, {"x1'' + x2", "x2'' + x1"})));
        CHECK(zero(system({"x1", "x2"}, {}, {"x1'' - x2'", "x2'' + x1'"})));
    }

    TEST_CASE("necessity on generated Lagrangians")
    {
        testing::Rng rng(1);
        for (int k = 0; k < 40; ++k) {
            const auto gen = testing::random_lagrangian(rng);
            const HelmholtzReport r = check(testing::system_of(gen.L, gen.coordinates));
            CHECK(r.outcome == Outcome::pass);
            for (const auto& c : r.checks) {
                CHECK(c.verdict.kind == ZeroKind::proven_zero);
            }
            CHECK(derived_conditions(decompose(testing::system_of(gen.L, gen.coordinates))).all_zero());
        }
    }

    TEST_CASE("H1 antisymmetry and decomposition soundness")
    {
        testing::Rng rng(2);
        for (int k = 0; k < 30; ++k) {
            const auto gen = testing::random_lagrangian(rng);
            OdeSystem sys = testing::system_of(gen.L, gen.coordinates);
            const auto tx = testing::phase_variables(sys.n(), true);
            // Break symmetry so the residuals are not all zero.
            sys.equations[0] = normalize(sys.equations[0] + testing::random_polynomial(rng, tx, 2) *
                                                                var(sys.coordinate(sys.n(), 2)));
            for (int i = 1; i <= sys.n(); ++i) {
                for (int j = 1; j <= sys.n(); ++j) {
                    CHECK(proven_zero(h1_residual(sys, i, j) + h1_residual(sys, j, i)));
                }
            }
            const AccelDecomposition d = decompose(sys);
            for (int i = 0; i < sys.n(); ++i) {
                Expr sum = d.P[i];
                for (int j = 0; j < sys.n(); ++j) {
                    sum += d.Q[i][j] * var(sys.coordinate(j + 1, 2));
                }
                CHECK(proven_zero(sum - sys.equations[i]));
            }
        }
    }

    TEST_CASE("permuting equations permutes the report")
    {
        const OdeSystem sys = system({"x1", "x2"}, {"a"}, {"x1'' + a*x2'", "x2'' + x1'"});
        OdeSystem swapped = sys;
        std::swap(swapped.equations[0], swapped.equations[1]);
        std::swap(swapped.coordinates[0], swapped.coordinates[1]);
        std::map<Variable, Expr> rename;
        for (int order = 0; order <= 3; ++order) {
            rename.emplace(x(1, order), var(Variable::coordinate(2, "x1", order)));
            rename.emplace(x(2, order), var(Variable::coordinate(1, "x2", order)));
        }
        for (auto& e : swapped.equations) {
            e = substitute(e, rename);
        }
        const HelmholtzReport a = check(sys);
        const HelmholtzReport b = check(swapped);
        CHECK(a.outcome == b.outcome);
        for (const auto& c : a.checks) {
            const int i = 3 - c.j;
            const int j = 3 - c.i;
            const auto& mirrored = find(b, c.condition, std::min(i, j), std::max(i, j));
            CHECK(mirrored.verdict.kind == c.verdict.kind);
        }
    }

    TEST_CASE("jerk input is rejected")
    {
        OdeSystem sys;
        sys.coordinates = {"x1"};
        sys.equations = {ex("x1'''")};
        CHECK_THROWS_AS((void)check(sys), JerkInInputError);
    }
}
