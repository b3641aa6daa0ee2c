#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rqm/atlas.hpp"
#include "rqm/errors.hpp"

using namespace rqm;

namespace {

struct Field {
    int nx, ny;
    std::vector<double> values;
    std::vector<char> mask;
};

template <class F>
Field make_field(int nx, int ny, F f)
{
    Field out{nx, ny, {}, {}};
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const auto v = f(i, j);
            out.values.push_back(v.value_or(0.0));
            out.mask.push_back(v.has_value() ? 1 : 0);
        }
    return out;
}

double polyline_length(const Polyline& p)
{
    double L = 0.0;
    for (std::size_t k = 1; k < p.points.size(); ++k) L += norm(p.points[k] - p.points[k - 1]);
    if (p.closed && p.points.size() > 1) L += norm(p.points.front() - p.points.back());
    return L;
}

}  // namespace

TEST_SUITE("atlas")
{
    TEST_CASE("band classification")
    {
        CHECK(band_classify(0.0) == 0);
        CHECK(band_classify(0.05) == 0);
        CHECK(band_classify(0.1) == 1);
        CHECK(band_classify(0.5) == 4);
        CHECK(band_classify(0.66) == 6);
        CHECK(band_classify(std::log(2.0)) == 6);
        CHECK(band_classify(std::log(2.0) + 5e-4) == 6);
        CHECK_THROWS_AS(band_classify(0.8), OutOfRange);
        CHECK_THROWS_AS(band_classify(-0.01), OutOfRange);
    }

    TEST_CASE("connectivity counts 8-connected pieces")
    {
        // Two separate discs of band 3 on a band 0 background; a diagonal pair of band 5 pixels.
        const Field f = make_field(40, 20, [](int i, int j) -> std::optional<double> {
            if (std::hypot(i - 8, j - 10) < 5 || std::hypot(i - 30, j - 10) < 5) return 0.45;
            if ((i == 19 && j == 2) || (i == 20 && j == 3)) return 0.6;
            return 0.05;
        });
        const ConnectivityReport r = band_connectivity(f.nx, f.ny, f.values, f.mask);
        CHECK(r.bands[0].components == 1);
        CHECK(r.bands[3].components == 2);
        CHECK(r.bands[5].components == 1);
        CHECK(r.bands[5].pixels == 2);
        CHECK(r.bands[1].components == 0);
    }

    TEST_CASE("masked pixels and band-edge pixels are neutral")
    {
        // A masked column splits band 0; isolated near-edge pixels inside band 2 are dropped.
        const Field f = make_field(30, 10, [](int i, int j) -> std::optional<double> {
            if (i == 10) return std::nullopt;
            if (i < 20) return 0.05;
            if ((i == 22 && j == 2) || (i == 27 && j == 7)) return 0.4 + 1e-4;
            return 0.3;
        });
        const ConnectivityReport r = band_connectivity(f.nx, f.ny, f.values, f.mask);
        CHECK(r.bands[0].components == 2);
        CHECK(r.bands[2].components == 1);
        CHECK(r.bands[3].components == 0);
        CHECK(r.bands[3].excluded == 2);
        CHECK(band_connectivity(f.nx, f.ny, f.values, f.mask, 1e-5).bands[3].components == 2);
    }

    TEST_CASE("marching squares recovers a circle")
    {
        const int n = 201;
        const double x0 = -2.0, dx = 4.0 / (n - 1);
        const Field f = make_field(n, n, [&](int i, int j) -> std::optional<double> {
            return std::hypot(x0 + i * dx, x0 + j * dx);
        });
        const auto lines = contour_extract(n, n, f.values, f.mask, x0, dx, x0, dx, 1.0);
        REQUIRE(lines.size() == 1);
        CHECK(lines[0].closed);
        CHECK(polyline_length(lines[0]) == doctest::Approx(2 * M_PI).epsilon(1e-3));
        for (const Vec2& p : lines[0].points) CHECK(norm(p) == doctest::Approx(1.0).epsilon(1e-3));
        // A level crossing the boundary gives open pieces.
        const auto open = contour_extract(n, n, f.values, f.mask, x0, dx, x0, dx, 2.5);
        REQUIRE(open.size() == 4);
        for (const auto& p : open) CHECK_FALSE(p.closed);
    }

    TEST_CASE("grid geometry and admissibility")
    {
        GridSpec spec;
        spec.nx = 8;
        spec.ny = 6;
        CHECK(spec.mu(0) == doctest::Approx(-4.0 + 0.25));
        CHECK(spec.t(5) == doctest::Approx(-4.0 / 6.0 / 2.0));
        const EntropyGrid g = entropy_grid(spec);
        REQUIRE(g.cells.size() == 48);
        for (const GridCell& c : g.cells) {
            CHECK(c.admissible == admissible({c.mu, c.t}));
            if (c.admissible) {
                CHECK(c.entropy >= 0.0);
                CHECK(c.entropy <= std::log(2.0) + 1e-9);
                CHECK(c.band == band_classify(c.entropy));
                CHECK(c.sigma1 >= -6.0 - 1e-6);
                CHECK(c.sigma1 <= 2.0 + 1e-6);
            } else {
                CHECK(c.band == -1);
            }
        }
        CHECK(&g.at(3, 2) == &g.cells[2 * 8 + 3]);
        GridSpec bad = spec;
        bad.mu_min = 1.0;
        bad.mu_max = 0.5;
        CHECK_THROWS_AS(entropy_grid(bad), PreconditionError);
    }

    TEST_CASE("grid outputs do not depend on the worker count")
    {
        GridSpec spec;
        spec.nx = spec.ny = 24;
        std::ostringstream a, b;
        write_csv(a, entropy_grid(spec));
        spec.workers = 3;
        write_csv(b, entropy_grid(spec));
        CHECK(a.str() == b.str());
    }

    TEST_CASE("csv, svg and json writers")
    {
        GridSpec spec;
        spec.mu_min = 1.0;
        spec.mu_max = 2.0;
        spec.nx = 2;
        spec.ny = 1;
        const EntropyGrid g = entropy_grid(spec);
        std::ostringstream csv;
        write_csv(csv, g);
        CHECK(csv.str() == "mu,t,admissible,sigma1,sigma2,entropy,upper_bound,band,method\n"
                           "1.25,-2,0,,,,,-1,\n1.75,-2,0,,,,,-1,\n");
        std::ostringstream svg;
        write_svg(svg, g);
        CHECK(svg.str().rfind("<svg", 0) == 0);
        CHECK(svg.str().find("</svg>") != std::string::npos);
        std::ostringstream js;
        write_connectivity_json(js, band_connectivity(g));
        CHECK(js.str().find("\"components\": 0") != std::string::npos);
    }
}
