#include <cmath>

#include "helpers.hpp"

using namespace varmech;
using namespace varmech::test;

TEST_SUITE("numeric")
{
    TEST_CASE("pointwise evaluation")
    {
        const Variable w = Variable::parameter("w");
        const Variable b = Variable::parameter("b");
        const Variable t = Variable::time();
        CHECK(evaluate(ex("w^2*x1"), {{w, 2.0}, {x(1), 3.0}}) == doctest::Approx(12.0));
        CHECK(evaluate(ex("exp(b*t)"), {{b, 0.0}, {t, 5.0}}) == doctest::Approx(1.0));
        const Point root{{x(1, 2), -2.5}, {b, 1.0}, {x(1, 1), 0.5}, {w, std::sqrt(2.0)}, {x(1), 1.0}};
        CHECK(std::fabs(evaluate(ex("x1'' + b*x1' + w^2*x1"), root)) < 1e-12);
    }

    TEST_CASE("evaluation errors")
    {
        CHECK_THROWS_AS((void)evaluate(ex("x1"), {}), UnassignedVariableError);
        CHECK_THROWS_AS((void)evaluate(ex("ln(x1)"), {{x(1), -1.0}}), EvaluationDomainError);
        CHECK_THROWS_AS((void)evaluate(ex("sqrt(x1)"), {{x(1), -1.0}}), EvaluationDomainError);
        CHECK_THROWS_AS((void)evaluate(ex("1/x1"), {{x(1), 0.0}}), EvaluationDomainError);
    }

    TEST_CASE("three-valued zero test")
    {
        CHECK(is_zero(ex("x1'*x1 - x1*x1'")).kind == ZeroKind::proven_zero);

        const ZeroVerdict two_b = is_zero(ex("2*b"));
        CHECK(two_b.kind == ZeroKind::nonzero);
        REQUIRE(two_b.witness.has_value());
        CHECK(two_b.witness->at(Variable::parameter("b")) != 0.0);

        const ZeroVerdict trig = is_zero(ex("sin(x1)^2 + cos(x1)^2 - 1"));
        CHECK(trig.kind == ZeroKind::numerically_zero);
        CHECK(trig.max_abs < 1e-12);
        CHECK(trig.holds());
    }

    TEST_CASE("singular samples are redrawn, persistent singularities reported")
    {
        const ZeroVerdict v = is_zero(ex("ln(x1^2) - 2*ln(x1^2)/2"), ZeroTestSettings{});
        CHECK(v.holds());
        CHECK_THROWS_AS((void)is_zero(ex("ln(-1 - x1^2)")), EvaluationDomainError);
    }

    TEST_CASE("zero test is reproducible for a fixed seed")
    {
        const ZeroTestSettings s{50, 123, 1e-9};
        const ZeroVerdict a = is_zero(ex("x1*x2 - w"), s);
        const ZeroVerdict b = is_zero(ex("x1*x2 - w"), s);
        REQUIRE(a.witness.has_value());
        CHECK(*a.witness == *b.witness);
        CHECK(a.max_abs == b.max_abs);
        const ZeroVerdict c = is_zero(ex("x1*x2 - w"), ZeroTestSettings{50, 124, 1e-9});
        CHECK(*c.witness != *a.witness);
    }

    TEST_CASE("sample stream stays in range")
    {
        SampleStream s(42);
        for (int i = 0; i < 10000; ++i) {
            const double u = s.uniform(-2.0, 2.0);
            CHECK((u >= -2.0 && u < 2.0));
        }
    }
}
