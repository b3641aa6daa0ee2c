#include "rqm/report.hpp"

#include "rqm/errors.hpp"

namespace rqm {

namespace {

void write_vec(JsonWriter& js, const Vec2& v)
{
    js.begin_array().value(v[0]).value(v[1]).end_array();
}

void write_pair(JsonWriter& js, const CriticalValuePair& v)
{
    js.begin_object().field("v1", v.v1).field("v2", v.v2).end_object();
}

}  // namespace

void write_json(JsonWriter& js, const EntropyEstimate& e)
{
    js.begin_object();
    js.field("value", e.value);
    js.field("upper_bound", e.upper_bound);
    js.field("method", to_string(e.method));
    js.field("depth", e.depth);
    js.field("tolerance", e.tolerance);
    js.field("converged", e.converged);
    js.field("boundary_ambiguous", e.boundary_ambiguous);
    js.key("markov_value");
    if (e.markov_value)
        js.value(*e.markov_value);
    else
        js.null();
    js.end_object();
}

void write_json(JsonWriter& js, const PositiveDirectionReport& r)
{
    js.begin_object();
    js.key("E");
    write_vec(js, r.E);
    js.field("directional_derivative", r.directional_derivative);
    js.field("normalized", r.normalized);
    js.field("raw_sign", r.raw_sign);
    js.field("derivative_sign", r.derivative_sign);
    js.field("positive", r.positive);
    js.field("chart", r.chart);
    js.end_object();
}

void write_json(JsonWriter& js, const PCFPoint& p, const std::optional<PositiveDirectionReport>& dir)
{
    js.begin_object();
    js.key("v");
    write_pair(js, p.v);
    js.key("relations").begin_object().field("n", p.n).field("m", p.m).end_object();
    js.key("jacobian").begin_array();
    write_vec(js, p.jacobian[0]);
    write_vec(js, p.jacobian[1]);
    js.end_array();
    js.field("quotient", p.quotient);
    js.field("derivative_sign", p.derivative_sign);
    js.field("d1", p.d1);
    js.field("d2", p.d2);
    js.key("residuals");
    write_vec(js, p.residuals);
    js.field("iterations", p.iterations);
    js.field("newton_constant", p.newton_constant);
    js.field("jacobian_consistency", p.jacobian_consistency);
    js.field("region_margin", p.region_margin);
    js.field("separation", p.separation);
    if (dir) {
        js.key("positive_direction");
        write_json(js, *dir);
    }
    js.end_object();
}

void write_json(JsonWriter& js, const Bone& b)
{
    js.begin_object();
    js.field("n", b.n);
    js.field("kind", to_string(b.kind));
    js.key("endpoint_info").begin_array().value(b.endpoint_info[0]).value(b.endpoint_info[1]).end_array();
    js.key("endpoint_sigma1").begin_array().value(b.endpoint_sigma1[0]).value(b.endpoint_sigma1[1]).end_array();
    js.field("arclength", b.arclength);
    js.field("max_residual", b.max_residual);
    js.field("max_angle_step", b.max_angle_step);
    js.field("steps", b.steps);
    js.key("points").begin_array();
    for (const auto& p : b.points) js.begin_array().value(p.v1).value(p.v2).end_array();
    js.end_array();
    js.end_object();
}

void write_json(JsonWriter& js, const Window& w)
{
    js.begin_object();
    js.field("v1_min", w.v1_min).field("v1_max", w.v1_max);
    js.field("v2_min", w.v2_min).field("v2_max", w.v2_max);
    js.end_object();
}

void write_pcf_json(std::ostream& os, const Window& w, const std::vector<PCFPoint>& points)
{
    JsonWriter js(os);
    js.begin_object();
    js.key("window");
    write_json(js, w);
    js.key("points").begin_array();
    for (const auto& p : points) {
        std::optional<PositiveDirectionReport> dir;
        try {
            dir = check_positive_direction(p);
        } catch (const Error&) {
        }
        write_json(js, p, dir);
    }
    js.end_array();
    js.end_object();
}

void write_bones_json(std::ostream& os, const Window& w, const std::vector<Bone>& bones)
{
    JsonWriter js(os);
    js.begin_object();
    js.key("window");
    write_json(js, w);
    js.key("bones").begin_array();
    for (const auto& b : bones) write_json(js, b);
    js.end_array();
    js.end_object();
}

}  // namespace rqm
