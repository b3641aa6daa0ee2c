#include <doctest.h>

#include <cmath>
#include <random>

#include "rqm/errors.hpp"
#include "rqm/projective.hpp"

using namespace rqm;

TEST_SUITE("projective")
{
    TEST_CASE("circle points are normalized")
    {
        const CirclePoint z(3.0, -4.0);
        CHECK(z.p() * z.p() + z.q() * z.q() == doctest::Approx(1.0));
        CHECK(z.value() == doctest::Approx(-0.75));
        CHECK(CirclePoint::infinity().is_infinity());
        CHECK(CirclePoint(-2.0, 0.0).same(CirclePoint::infinity()));
        CHECK(CirclePoint(-1.0, -2.0).same(CirclePoint::real(0.5)));
    }

    TEST_CASE("mobius_frame sends the triple to 1, 0, infinity")
    {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(-5.0, 5.0);
        for (int k = 0; k < 200; ++k) {
            const double x1 = u(rng), x2 = u(rng), x3 = u(rng);
            if (std::fabs(x1 - x2) < 0.1 || std::fabs(x2 - x3) < 0.1 || std::fabs(x1 - x3) < 0.1) continue;
            const MobiusFrame m = mobius_frame(CirclePoint::real(x1), CirclePoint::real(x2), CirclePoint::real(x3));
            CHECK(m.apply(CirclePoint::real(x1)).same(CirclePoint::real(1.0), 1e-10));
            CHECK(m.apply(CirclePoint::real(x2)).same(CirclePoint::real(0.0), 1e-10));
            CHECK(m.apply(CirclePoint::real(x3)).same(CirclePoint::infinity(), 1e-10));
        }
        CHECK(mobius_frame(CirclePoint::infinity(), CirclePoint::real(0.0), CirclePoint::real(1.0))
                  .apply(CirclePoint::real(2.0))
                  .same(CirclePoint::real(2.0), 1e-12));
        CHECK_THROWS_AS(mobius_frame(CirclePoint::real(1.0), CirclePoint::real(1.0), CirclePoint::real(2.0)),
                        CoincidentPoints);
    }

    TEST_CASE("compose and inverse")
    {
        const MobiusFrame a(2.0, 1.0, 1.0, 1.0), b(0.0, 1.0, -1.0, 3.0);
        for (double x : {-2.0, 0.3, 5.0}) CHECK(a.compose(b).apply(x) == doctest::Approx(a.apply(b.apply(x))));
        CHECK(a.compose(a.inverse()).same_action(MobiusFrame()));
        CHECK(MobiusFrame(-1.0, 0.0, 0.0, 1.0).orientation_preserving() == false);
        const double h = 1e-6, x = 0.7;
        CHECK(a.derivative(x) == doctest::Approx((a.apply(x + h) - a.apply(x - h)) / (2 * h)).epsilon(1e-8));
    }

    TEST_CASE("binary quadratic and cubic roots")
    {
        // (x - 2y)(3x + y) = 3x^2 - 5xy - 2y^2
        const auto q = binary_quadratic_roots({3.0, -5.0, -2.0});
        std::vector<double> vals;
        for (const auto& r : q) vals.push_back((r[0] / r[1]).real());
        std::sort(vals.begin(), vals.end());
        CHECK(vals[0] == doctest::Approx(-1.0 / 3.0));
        CHECK(vals[1] == doctest::Approx(2.0));
        // y (x - y)(x + 2y) = x^2 y + x y^2 - 2 y^3: one root at infinity.
        const auto c = binary_cubic_roots({0.0, 1.0, 1.0, -2.0});
        int at_infinity = 0;
        for (const auto& r : c)
            if (std::abs(r[1]) < 1e-12 * std::abs(r[0])) ++at_infinity;
        CHECK(at_infinity == 1);
    }

    TEST_CASE("rational maps: evaluation, conjugation and fixed points")
    {
        // z^2 - 2 as [x^2 - 2y^2 : y^2]
        const RationalMap2 f{{1.0, 0.0, -2.0}, {0.0, 0.0, 1.0}};
        CHECK(f(1.5) == doctest::Approx(0.25));
        CHECK(f.derivative(1.5) == doctest::Approx(3.0));
        CHECK(f.resultant() != 0.0);
        std::vector<std::complex<double>> mult;
        for (const auto& fp : f.fixed_points()) mult.push_back(fp.multiplier);
        // Fixed points 2, -1 (multipliers 4, -2) and infinity (multiplier 0).
        std::sort(mult.begin(), mult.end(), [](auto a, auto b) { return a.real() < b.real(); });
        CHECK(mult[0].real() == doctest::Approx(-2.0));
        CHECK(std::abs(mult[1]) == doctest::Approx(0.0));
        CHECK(mult[2].real() == doctest::Approx(4.0));

        const MobiusFrame beta(1.0, 2.0, 1.0, -1.0);
        const RationalMap2 g = f.conjugate(beta);
        for (double x : {0.3, 1.7}) {
            const double y = beta.apply(x);
            CHECK(g(y) == doctest::Approx(beta.apply(f(x))).epsilon(1e-10));
        }
        const auto crit = f.critical_points();
        int zero = 0;
        for (const auto& c : crit)
            if (std::abs(c[1]) > 1e-12 && std::abs(c[0] / c[1]) < 1e-12) ++zero;
        CHECK(zero == 1);
    }
}
