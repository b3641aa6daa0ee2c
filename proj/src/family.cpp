#include "rqm/family.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rqm/errors.hpp"

namespace rqm {

using cplx = std::complex<double>;

QuadraticMap::QuadraticMap(double a, double b) : a_(a), b_(b)
{
    if (a == 0.0 || !std::isfinite(a) || !std::isfinite(b))
        throw DegenerateParameter("QuadraticMap: a must be finite and nonzero");
}

QuadraticMap map_from_critical_values(const CriticalValuePair& v)
{
    if (v.v1 == v.v2) throw DegenerateParameter("critical values coincide (a = 0)");
    return {(v.v2 - v.v1) / 4.0, (v.v1 + v.v2) / 2.0};
}

CriticalValuePair critical_values(const QuadraticMap& f)
{
    return {-2.0 * f.a() + f.b(), 2.0 * f.a() + f.b()};
}

CirclePoint eval_on_circle(const QuadraticMap& f, const CirclePoint& z)
{
    return f.homogeneous().apply(z);
}

double orbit_derivative(const QuadraticMap& f, double x, int k, double pole_tol)
{
    double d = 1.0;
    for (int i = 0; i < k; ++i) {
        if (!std::isfinite(x) || std::fabs(x) <= pole_tol)
            throw PoleEncounter("orbit_derivative: iterate " + std::to_string(i) + " hit the pole z = 0");
        d *= f.derivative(x);
        x = f(x);
    }
    return d;
}

std::array<FixedPoint, 3> fixed_points_with_multipliers(const QuadraticMap& f)
{
    const double a = f.a();
    std::array<FixedPoint, 3> out;
    out[0].z = cplx(INFINITY, 0.0);
    out[0].at_infinity = true;
    out[0].multiplier = 1.0 / a;
    // (a - 1) z^2 + b z + a = 0; a homogeneous root [x : 0] is infinity again (a = 1).
    const auto roots = binary_quadratic_roots({a - 1.0, f.b(), a});
    for (std::size_t i = 0; i < 2; ++i) {
        const auto& r = roots[i];
        FixedPoint& fp = out[i + 1];
        if (std::abs(r[1]) <= 1e-15 * std::abs(r[0])) {
            fp.z = cplx(INFINITY, 0.0);
            fp.at_infinity = true;
            fp.multiplier = 1.0 / a;
            continue;
        }
        const cplx w = r[1] / r[0];  // 1/z
        fp.z = r[0] / r[1];
        fp.multiplier = a * (1.0 - w * w);
    }
    return out;
}

double fixed_point_formula_residual(const QuadraticMap& f, double delta)
{
    cplx sum = 0.0;
    for (const auto& fp : fixed_points_with_multipliers(f)) {
        if (std::abs(fp.multiplier - 1.0) <= delta)
            throw NearParabolic("fixed_point_formula_residual: multiplier within delta of 1");
        sum += 1.0 / (1.0 - fp.multiplier);
    }
    return std::abs(sum - 1.0);
}

SigmaPoint symmetrize(const std::array<cplx, 3>& m)
{
    const cplx s1 = m[0] + m[1] + m[2];
    const cplx s2 = m[0] * m[1] + m[1] * m[2] + m[2] * m[0];
    auto check = [](cplx s) {
        if (std::fabs(s.imag()) > 1e-9 * std::max(1.0, std::abs(s)))
            throw std::logic_error("symmetrize: multiplier triple is not closed under conjugation");
    };
    check(s1);
    check(s2);
    return {s1.real(), s2.real(), false};
}

SigmaPoint sigma_coords(const QuadraticMap& f)
{
    const auto fps = fixed_points_with_multipliers(f);
    SigmaPoint s = symmetrize({fps[0].multiplier, fps[1].multiplier, fps[2].multiplier});
    s.near_symmetry_locus = f.b() <= 0.0;
    return s;
}

SigmaPoint sigma_coords(const RationalMap2& g)
{
    const auto fps = g.fixed_points();
    return symmetrize({fps[0].multiplier, fps[1].multiplier, fps[2].multiplier});
}

const char* to_string(RegionTag tag)
{
    switch (tag) {
    case RegionTag::monotonic: return "monotonic";
    case RegionTag::unimodal: return "unimodal";
    case RegionTag::bimodal_plus_minus_plus: return "bimodal(+-+)";
    case RegionTag::bimodal_minus_plus_minus: return "bimodal(-+-)";
    }
    return "unknown";
}

RegionClass classify_region(const CriticalValuePair& v, double tol)
{
    if (v.v1 == v.v2) throw DegenerateParameter("classify_region: v1 == v2");
    RegionClass rc;
    rc.image = {std::min(v.v1, v.v2), std::max(v.v1, v.v2)};
    int count = 0;
    int which = 0;
    rc.margin = INFINITY;
    for (int c : {-1, 1}) {
        if (rc.image.contains(c)) {
            ++count;
            which = c;
        }
        const double d = std::min(std::fabs(c - rc.image.lo), std::fabs(c - rc.image.hi));
        rc.margin = std::min(rc.margin, d);
    }
    rc.boundary_ambiguous = rc.margin < tol;
    if (count == 0) {
        rc.tag = RegionTag::monotonic;
    } else if (count == 1) {
        rc.tag = RegionTag::unimodal;
        rc.essential_critical_point = which;
    } else {
        // The middle lap runs between the two critical points along the arc; when the gap sits
        // inside [-1, 1] it passes through infinity, otherwise through 0. With
        // f'(z) = a (1 - 1/z^2), probe z = 2 or z = 1/2 respectively. The outer laps have the
        // opposite sign.
        const double a = (v.v2 - v.v1) / 4.0;
        const bool gap_inside = rc.image.lo >= -1.0 && rc.image.hi <= 1.0;
        const double probe = gap_inside ? 2.0 : 0.5;
        const double middle = a * (1.0 - 1.0 / (probe * probe));
        const double slope = -middle;
        rc.tag = slope > 0.0 ? RegionTag::bimodal_plus_minus_plus : RegionTag::bimodal_minus_plus_minus;
    }
    return rc;
}

RegionClass classify_region(const QuadraticMap& f, double tol)
{
    return classify_region(critical_values(f), tol);
}

bool admissible(const NormalFormParams& p)
{
    return std::isfinite(p.mu) && std::isfinite(p.t) && p.t < 0.0 && p.mu < 0.0 && p.t - 2.0 < p.mu &&
           p.mu < -std::fabs(p.t + 2.0);
}

double normal_form_eval(const NormalFormParams& p, double x)
{
    const double s = p.t * x + 2.0;
    return 2.0 * p.mu * x * s / (p.mu * p.mu * x * x + s * s);
}

double normal_form_derivative(const NormalFormParams& p, double x)
{
    // g = h(u), h(u) = 2u / (1 + u^2), u = mu x / (t x + 2).
    const double s = p.t * x + 2.0;
    const double den = p.mu * p.mu * x * x + s * s;
    // h'(u) u' = 2 (1 - u^2)/(1 + u^2)^2 * 2 mu / s^2, cleared of s.
    return 4.0 * p.mu * (s * s - p.mu * p.mu * x * x) / (den * den);
}

RationalMap2 normal_form_rational(const NormalFormParams& p)
{
    return {{2.0 * p.mu * p.t, 4.0 * p.mu, 0.0}, {p.mu * p.mu + p.t * p.t, 4.0 * p.t, 4.0}};
}

NormalFormSystem normal_form_to_map(const NormalFormParams& p)
{
    if (!admissible(p)) throw AdmissibilityError("normal form parameters outside t-2 < mu < -|t+2|");
    NormalFormSystem sys;
    sys.params = p;
    // Turning points: sign changes of the derivative on a fine grid, refined by bisection.
    constexpr int samples = 4096;
    auto d = [&](double x) { return normal_form_derivative(p, x); };
    // xl, dl: last sample with a nonzero derivative.
    double xl = -1.0, dl = d(xl);
    for (int i = 1; i <= samples; ++i) {
        const double xr = -1.0 + 2.0 * i / samples;
        const double dr = d(xr);
        if (dr == 0.0) continue;
        if (dl != 0.0 && (dl > 0.0) != (dr > 0.0)) {
            double lo = xl, hi = xr, flo = dl;
            for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = d(mid);
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((fm > 0.0) == (flo > 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            sys.turning_points.push_back(0.5 * (lo + hi));
        }
        xl = xr;
        dl = dr;
    }
    // Fixed points: 0 with multiplier mu, and the roots of
    // (mu^2 + t^2) x^2 + (4t - 2 mu t) x + (4 - 4 mu) = 0.
    const auto roots = binary_quadratic_roots({p.mu * p.mu + p.t * p.t, 4.0 * p.t - 2.0 * p.mu * p.t, 4.0 - 4.0 * p.mu});
    std::array<cplx, 3> mult;
    mult[0] = normal_form_derivative(p, 0.0);
    sys.multiplier_at_zero = mult[0].real();
    for (std::size_t i = 0; i < 2; ++i) {
        const cplx x = roots[i][0] / roots[i][1];
        const cplx s = p.t * x + 2.0;
        const cplx den = p.mu * p.mu * x * x + s * s;
        mult[i + 1] = 4.0 * p.mu * (s * s - p.mu * p.mu * x * x) / (den * den);
    }
    sys.sigma = symmetrize(mult);
    return sys;
}

QuadraticMap normal_form_to_family(const NormalFormParams& p)
{
    if (!admissible(p)) throw AdmissibilityError("normal form parameters outside t-2 < mu < -|t+2|");
    const RationalMap2 g = normal_form_rational(p);
    // Trivial critical point: the real critical point outside [-1, 1].
    const auto crit = g.critical_points();
    CirclePoint trivial;
    bool found = false;
    double best = -1.0;
    for (const auto& c : crit) {
        if (std::fabs(c[0].imag()) > 1e-12 * std::abs(c[0]) + 1e-300 ||
            std::fabs(c[1].imag()) > 1e-12 * std::abs(c[1]) + 1e-300)
            continue;
        const CirclePoint cp(c[0].real(), c[1].real());
        const double outside = cp.is_infinity() ? INFINITY : std::fabs(cp.value()) - 1.0;
        if (outside > best) {
            best = outside;
            trivial = cp;
            found = true;
        }
    }
    if (!found || best <= 0.0) throw NumericalError("normal_form_to_family: no trivial critical point found");
    const MobiusFrame beta = mobius_frame(trivial, CirclePoint::real(-2.0 / p.t), CirclePoint::real(0.0));
    const RationalMap2 h = g.conjugate(beta);
    const double d = h.Q[1];
    const double scale = std::max({std::fabs(h.P[0]), std::fabs(h.P[1]), std::fabs(h.P[2]), std::fabs(d)});
    if (std::fabs(h.Q[0]) > 1e-9 * scale || std::fabs(h.Q[2]) > 1e-9 * scale ||
        std::fabs(h.P[0] - h.P[2]) > 1e-9 * scale)
        throw NumericalError("normal_form_to_family: conjugate is not of the form a(z + 1/z) + b");
    return {0.5 * (h.P[0] + h.P[2]) / d, h.P[1] / d};
}

}  // namespace rqm
