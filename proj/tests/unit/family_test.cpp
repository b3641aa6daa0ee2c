#include <doctest.h>

#include <cmath>
#include <random>

#include "rqm/errors.hpp"
#include "rqm/family.hpp"

using namespace rqm;
using cplx = std::complex<double>;

namespace {

int critical_points_in_image(const CriticalValuePair& v)
{
    const double lo = std::min(v.v1, v.v2), hi = std::max(v.v1, v.v2);
    int n = 0;
    for (double c : {-1.0, 1.0})
        if (c <= lo || c >= hi) ++n;
    return n;
}

}  // namespace

TEST_SUITE("family")
{
    TEST_CASE("critical values and the inverse chart")
    {
        const QuadraticMap f(0.7, -0.2);
        const auto v = critical_values(f);
        CHECK(v.v1 == doctest::Approx(f(-1.0)));
        CHECK(v.v2 == doctest::Approx(f(1.0)));
        const QuadraticMap g = map_from_critical_values(v);
        CHECK(g.a() == doctest::Approx(0.7));
        CHECK(g.b() == doctest::Approx(-0.2));
        CHECK(f.derivative(-1.0) == 0.0);
        CHECK(f.derivative(1.0) == 0.0);
        CHECK_THROWS_AS(QuadraticMap(0.0, 1.0), DegenerateParameter);
        CHECK_THROWS_AS(map_from_critical_values({2.0, 2.0}), DegenerateParameter);
        CHECK(eval_on_circle(f, CirclePoint::real(0.0)).is_infinity());
        CHECK(eval_on_circle(f, CirclePoint::infinity()).is_infinity());
    }

    TEST_CASE("image of the circle misses the gap between the critical values")
    {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        for (int k = 0; k < 50; ++k) {
            const QuadraticMap f(u(rng), u(rng));
            const auto v = critical_values(f);
            const double lo = std::min(v.v1, v.v2), hi = std::max(v.v1, v.v2);
            for (int s = 1; s < 2000; ++s) {
                const double z = std::tan(-M_PI / 2 + M_PI * s / 2000.0);
                if (z == 0.0) continue;
                const double w = f(z);
                CHECK_FALSE((w > lo + 1e-9 && w < hi - 1e-9));
            }
        }
    }

    TEST_CASE("orbit_derivative matches a finite difference of the iterate")
    {
        const QuadraticMap f(0.4, 1.1);
        const double x = 2.3, h = 1e-7;
        auto iterate = [&](double y) {
            for (int i = 0; i < 3; ++i) y = f(y);
            return y;
        };
        CHECK(orbit_derivative(f, x, 3) == doctest::Approx((iterate(x + h) - iterate(x - h)) / (2 * h)).epsilon(1e-6));
        CHECK_THROWS_AS(orbit_derivative(QuadraticMap(1.0, 0.0), 0.0, 1), PoleEncounter);
    }

    TEST_CASE("fixed points and multipliers satisfy the holomorphic index formula")
    {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        for (int k = 0; k < 300; ++k) {
            const double a = u(rng), b = u(rng);
            if (std::fabs(a) < 0.05) continue;
            const QuadraticMap f(a, b);
            const auto fps = fixed_points_with_multipliers(f);
            CHECK(fps[0].at_infinity);
            cplx sum = 0.0;
            for (const auto& fp : fps) {
                if (!fp.at_infinity) {
                    const cplx z = fp.z;
                    CHECK(std::abs(a * (z + 1.0 / z) + b - z) < 1e-9 * std::max(1.0, std::abs(z)));
                    CHECK(std::abs(fp.multiplier - a * (1.0 - 1.0 / (z * z))) < 1e-9);
                }
                sum += 1.0 / (1.0 - fp.multiplier);
            }
            if (std::abs(sum) < 1e6) CHECK(std::abs(sum - 1.0) < 1e-6 * std::max(1.0, std::abs(sum)));
        }
        CHECK_THROWS_AS(fixed_point_formula_residual(QuadraticMap(1.0 + 1e-9, 0.5)), NearParabolic);
    }

    TEST_CASE("sigma coordinates are conjugacy invariant")
    {
        const QuadraticMap f(0.6, 1.3);
        const SigmaPoint s = sigma_coords(f);
        for (const MobiusFrame& beta : {MobiusFrame(2, 1, 1, 3), MobiusFrame(0, 1, 1, 0), MobiusFrame(-1, 4, 2, 1)}) {
            const SigmaPoint t = sigma_coords(f.homogeneous().conjugate(beta));
            CHECK(t.sigma1 == doctest::Approx(s.sigma1).epsilon(1e-10));
            CHECK(t.sigma2 == doctest::Approx(s.sigma2).epsilon(1e-10));
        }
        CHECK_THROWS(symmetrize({cplx(1, 1), cplx(2, 0), cplx(3, 0)}));
    }

    TEST_CASE("region classification counts critical points in the image arc")
    {
        CHECK(classify_region(CriticalValuePair{3.0, 0.5}).tag == RegionTag::unimodal);
        CHECK(classify_region(CriticalValuePair{3.0, 0.5}).essential_critical_point == -1);
        CHECK(classify_region(QuadraticMap(2.0, 0.5)).tag == RegionTag::monotonic);
        CHECK(classify_region(CriticalValuePair{-3.0, 3.0}).tag != RegionTag::unimodal);
        CHECK(classify_region(CriticalValuePair{3.0, 1.0 - 1e-12}).boundary_ambiguous);
        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> u(-5.0, 5.0);
        for (int k = 0; k < 500; ++k) {
            const CriticalValuePair v{u(rng), u(rng)};
            const RegionClass rc = classify_region(v);
            const int inside = critical_points_in_image(v);
            CHECK((rc.tag == RegionTag::monotonic) == (inside == 0));
            CHECK((rc.tag == RegionTag::unimodal) == (inside == 1));
        }
        CHECK(std::string(to_string(RegionTag::unimodal)) == "unimodal");
    }

    TEST_CASE("bimodal orientation follows the middle lap")
    {
        // Gap inside [-1, 1]: the middle lap passes through infinity, where f' = a.
        CHECK(classify_region(CriticalValuePair{-0.5, 0.5}).tag == RegionTag::bimodal_minus_plus_minus);
        CHECK(classify_region(CriticalValuePair{0.5, -0.5}).tag == RegionTag::bimodal_plus_minus_plus);
    }

    TEST_CASE("normal form strip")
    {
        CHECK(admissible({-1.0, -2.5}));
        CHECK_FALSE(admissible({-1.0, -1.0}));
        CHECK_FALSE(admissible({1.0, -1.0}));
        CHECK_FALSE(admissible({-5.0, -1.0}));
        CHECK_THROWS_AS(normal_form_to_map({0.5, -1.0}), AdmissibilityError);
        CHECK_THROWS_AS(normal_form_to_family({0.5, -1.0}), AdmissibilityError);
    }

    TEST_CASE("normal form: derivative, fixed point at 0 and one turning point")
    {
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> u(-6.0, 0.0);
        int checked = 0;
        while (checked < 200) {
            const NormalFormParams p{u(rng), u(rng)};
            if (!admissible(p)) continue;
            ++checked;
            const double x = 0.37, h = 1e-6;
            CHECK(normal_form_derivative(p, x) ==
                  doctest::Approx((normal_form_eval(p, x + h) - normal_form_eval(p, x - h)) / (2 * h)).epsilon(1e-5));
            const NormalFormSystem sys = normal_form_to_map(p);
            CHECK(sys.multiplier_at_zero == doctest::Approx(p.mu));
            REQUIRE(sys.turning_points.size() == 1);
            // Critical points of the normal form are -2/(mu + t) and 2/(mu - t).
            const double c = sys.turning_points[0];
            const double e1 = -2.0 / (p.mu + p.t), e2 = 2.0 / (p.mu - p.t);
            CHECK(std::min(std::fabs(c - e1), std::fabs(c - e2)) < 1e-9);
            const RationalMap2 g = normal_form_rational(p);
            CHECK(g(x) == doctest::Approx(normal_form_eval(p, x)));
            const SigmaPoint s = sigma_coords(g);
            CHECK(s.sigma1 == doctest::Approx(sys.sigma.sigma1).epsilon(1e-8));
            CHECK(s.sigma2 == doctest::Approx(sys.sigma.sigma2).epsilon(1e-8));
            const QuadraticMap f = normal_form_to_family(p);
            CHECK(classify_region(f).tag == RegionTag::unimodal);
            const SigmaPoint sf = sigma_coords(f);
            CHECK(sf.sigma1 == doctest::Approx(sys.sigma.sigma1).epsilon(1e-7));
            CHECK(sf.sigma2 == doctest::Approx(sys.sigma.sigma2).epsilon(1e-7));
            CHECK(sys.sigma.sigma1 >= -6.0 - 1e-6);
            CHECK(sys.sigma.sigma1 <= 2.0 + 1e-6);
            for (int k = 0; k <= 20; ++k) CHECK(std::fabs(sys(-1.0 + 0.1 * k)) <= 1.0 + 1e-12);
        }
    }
}
