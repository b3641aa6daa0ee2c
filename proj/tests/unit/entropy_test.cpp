#include <doctest.h>

#include <cmath>

#include "rqm/entropy.hpp"
#include "rqm/errors.hpp"

using namespace rqm;

namespace {

// Laps of f^n by dense sampling: monotone runs of the sampled iterate.
int sampled_laps(const IntervalModel& m, int n, int samples = 400000)
{
    int laps = 1, dir = 0;
    double prev = 0.0;
    for (int k = 0; k <= samples; ++k) {
        double y = m.lo + (m.hi - m.lo) * k / samples;
        for (int i = 0; i < n; ++i) y = m(y);
        if (k > 0 && y != prev) {
            const int d = y > prev ? 1 : -1;
            if (dir != 0 && d != dir) ++laps;
            dir = d;
        }
        prev = y;
    }
    return laps;
}

IntervalModel logistic(double r) { return {0.0, 1.0, [r](double x) { return r * x * (1.0 - x); }, {0.5}}; }

// Superattracting parameter of r x (1 - x) with the critical orbit of exact period n near r0.
double superstable_logistic(int n, double lo, double hi)
{
    auto g = [n](double r) {
        double x = 0.5;
        for (int i = 0; i < n; ++i) x = r * x * (1.0 - x);
        return x - 0.5;
    };
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((g(mid) > 0.0) == (g(lo) > 0.0))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

const double golden_log = std::log((1.0 + std::sqrt(5.0)) / 2.0);

}  // namespace

TEST_SUITE("entropy")
{
    TEST_CASE("full logistic map doubles its laps")
    {
        const auto laps = lap_sequence(logistic(4.0), 12);
        REQUIRE(laps.size() == 12);
        for (int n = 1; n <= 12; ++n) CHECK(laps[n - 1] == std::ldexp(1.0, n));
        const EntropyEstimate e = entropy_lap(logistic(4.0));
        CHECK(e.value == doctest::Approx(std::log(2.0)).epsilon(1e-6));
        CHECK(e.upper_bound == doctest::Approx(std::log(2.0)).epsilon(1e-6));
        CHECK(e.method == EntropyMethod::lap);
    }

    TEST_CASE("lap counts agree with dense sampling")
    {
        for (double r : {3.2, 3.6, 3.83, 3.95}) {
            const IntervalModel m = logistic(r);
            const auto laps = lap_sequence(m, 7);
            for (int n = 1; n <= 7; ++n) CHECK(laps[n - 1] == sampled_laps(m, n));
        }
        // A map with two turning points.
        const IntervalModel cubic{-1.0, 1.0, [](double x) { return 4.0 * x * x * x - 3.0 * x; }, {-0.5, 0.5}};
        const auto laps = lap_sequence(cubic, 5);
        for (int n = 1; n <= 5; ++n) CHECK(laps[n - 1] == doctest::Approx(std::pow(3.0, n)));
        CHECK(entropy_lap(cubic).value == doctest::Approx(std::log(3.0)).epsilon(1e-3));
    }

    TEST_CASE("lap_sequence respects the cap")
    {
        const auto laps = lap_sequence(logistic(4.0), 100, 1000.0);
        CHECK(laps.back() <= 1000.0);
        CHECK(laps.size() == 9);
    }

    TEST_CASE("entropy_from_laps on synthetic sequences")
    {
        std::vector<double> pow3, flat(40, 2.0);
        for (int n = 1; n <= 30; ++n) pow3.push_back(std::pow(3.0, n));
        const EntropyEstimate e = entropy_from_laps(pow3);
        CHECK(e.value == doctest::Approx(std::log(3.0)));
        CHECK(e.converged);
        CHECK(entropy_from_laps(flat).value == doctest::Approx(0.0));
        // Growth n^2 never looks exponential at the end.
        std::vector<double> quad;
        for (int n = 1; n <= 3000; ++n) quad.push_back(double(n) * n);
        CHECK(entropy_from_laps(quad).value < 0.01);
    }

    TEST_CASE("superstable logistic cycles: laps against Markov")
    {
        // Periods 3 and 4 of the logistic family with their known entropies.
        struct Case {
            int n;
            double lo, hi, h;
        };
        for (const Case& c : {Case{3, 3.82, 3.84, golden_log}, Case{4, 3.49, 3.5, 0.0}}) {
            const IntervalModel m = logistic(superstable_logistic(c.n, c.lo, c.hi));
            const auto cycle = critical_cycle(m);
            REQUIRE(cycle.has_value());
            CHECK(cycle->size() == static_cast<std::size_t>(c.n));
            const EntropyEstimate mk = entropy_markov(markov_partition(m, *cycle));
            CHECK(mk.method == EntropyMethod::markov);
            CHECK(mk.value == doctest::Approx(c.h).epsilon(1e-9).scale(1.0));
            CHECK(entropy_lap(m).value == doctest::Approx(c.h).epsilon(5e-3).scale(1.0));
        }
    }

    TEST_CASE("spectral radius")
    {
        CHECK(spectral_radius({{1, 1}, {1, 0}}) == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0));
        CHECK(spectral_radius({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}) == doctest::Approx(1.0));
        CHECK(spectral_radius({{2}}) == doctest::Approx(2.0));
        CHECK(spectral_radius({{0, 1}, {0, 0}}) == doctest::Approx(0.0).scale(1.0));
        // Companion matrix of x^3 - x - 1: the plastic number.
        CHECK(spectral_radius({{0, 1, 0}, {0, 0, 1}, {1, 1, 0}}) == doctest::Approx(1.324717957244746));
    }

    TEST_CASE("markov_partition rejects non-invariant sets")
    {
        const IntervalModel m = logistic(3.9);
        const std::vector<double> pts{0.2, 0.7};
        CHECK_THROWS_AS(markov_partition(m, pts), NotMarkov);
        CHECK_FALSE(critical_cycle(m).has_value());
    }

    TEST_CASE("validate_model")
    {
        CHECK_NOTHROW(validate_model(logistic(3.7)));
        IntervalModel wrong = logistic(3.7);
        wrong.turning_points.clear();
        CHECK_THROWS_AS(validate_model(wrong), BranchMonotonicity);
        CHECK_THROWS(validate_model(logistic(4.5)));
    }

    TEST_CASE("family maps in the interval chart")
    {
        // A unimodal map: v1 = 3.2, v2 = 0.3.
        const QuadraticMap f = map_from_critical_values({3.2, 0.3});
        const IntervalModel m = interval_model(f);
        CHECK(m.lo < m.hi);
        CHECK(m.turning_points.size() == 1);
        CHECK_NOTHROW(validate_model(m));
        // The chart conjugates f to the model.
        const MobiusFrame phi = interval_chart(f);
        for (double z : {-3.0, -0.4, 0.6, 2.5}) {
            if (std::fabs(f(z) - 0.5 * (0.3 + 3.2)) < 1e-3) continue;
            CHECK(m(phi.apply(z)) == doctest::Approx(phi.apply(f(z))).epsilon(1e-9));
        }
        const EntropyEstimate e = real_entropy(f);
        CHECK(e.value >= 0.0);
        CHECK(e.value <= e.upper_bound + 1e-12);
        // Monotonic maps carry no entropy.
        CHECK(real_entropy(QuadraticMap(2.0, 0.5)).value == doctest::Approx(0.0).scale(1.0));
    }

    TEST_CASE("normal form entropy stays in [0, log 2]")
    {
        for (double mu : {-1.0, -2.0, -3.0}) {
            const NormalFormParams p{mu, -2.5};
            if (!admissible(p)) continue;
            const EntropyEstimate e = entropy_lap(interval_model(normal_form_to_map(p)));
            CHECK(e.value >= 0.0);
            CHECK(e.value <= std::log(2.0) + 1e-9);
        }
        CHECK(std::string(to_string(EntropyMethod::markov)) == "markov");
    }
}
