#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>

#include <json.hpp>

#include "rqm/json.hpp"
#include "rqm/report.hpp"

using namespace rqm;

TEST_SUITE("report")
{
    TEST_CASE("17 significant digits round-trip")
    {
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> u(-1e6, 1e6);
        for (int k = 0; k < 1000; ++k) {
            const double x = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
            CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
        }
        CHECK(format_double(0.1) == "0.10000000000000001");
        CHECK(format_double(NAN) == "null");
        CHECK(format_double(INFINITY) == "null");
    }

    TEST_CASE("writer output parses as JSON")
    {
        std::ostringstream os;
        JsonWriter js(os);
        js.begin_object();
        js.field("name", "a \"quoted\"\nline");
        js.field("x", 1.5);
        js.field("n", 3);
        js.field("ok", true);
        js.key("list").begin_array();
        js.value(1.0).value(-2.0);
        js.null();
        js.end_array();
        js.key("empty").begin_object().end_object();
        js.end_object();
        const auto doc = nlohmann::json::parse(os.str());
        CHECK(doc["name"] == "a \"quoted\"\nline");
        CHECK(doc["x"] == 1.5);
        CHECK(doc["n"] == 3);
        CHECK(doc["ok"] == true);
        CHECK(doc["list"].size() == 3);
        CHECK(doc["list"][2].is_null());
        CHECK(doc["empty"].empty());
    }

    TEST_CASE("entropy estimate schema")
    {
        EntropyEstimate e;
        e.value = 0.25;
        e.upper_bound = 0.3;
        e.depth = 40;
        std::ostringstream os;
        JsonWriter js(os);
        write_json(js, e);
        const auto doc = nlohmann::json::parse(os.str());
        for (const char* k : {"value", "upper_bound", "method", "depth", "tolerance", "converged"})
            CHECK(doc.contains(k));
        CHECK(doc["method"] == "lap");
        CHECK(doc["markov_value"].is_null());
    }

    TEST_CASE("pcf and bone documents")
    {
        const Window w;
        const auto points = scan_pcf(w, ScanOptions{});
        std::ostringstream pcf;
        write_pcf_json(pcf, w, points);
        const auto doc = nlohmann::json::parse(pcf.str());
        REQUIRE(doc["points"].size() == points.size());
        CHECK(doc["window"]["v1_max"] == 10.0);
        CHECK(doc["points"][0]["quotient"].get<double>() == points[0].quotient);

        std::vector<CriticalValuePair> seeds;
        for (const PCFPoint& p : points)
            if (p.n == 2) seeds.push_back(p.v);
        std::ostringstream bones;
        write_bones_json(bones, w, trace_bones(2, seeds, w));
        const auto bdoc = nlohmann::json::parse(bones.str());
        REQUIRE(bdoc["bones"].size() == 1);
        CHECK(bdoc["bones"][0]["kind"] == "arc");
    }
}
