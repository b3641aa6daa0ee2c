#include "rqm/projective.hpp"

#include <algorithm>
#include <cmath>

#include "rqm/errors.hpp"

namespace rqm {

using cplx = std::complex<double>;
using CPair = std::array<cplx, 2>;

CirclePoint::CirclePoint(double p, double q)
{
    const double r = std::hypot(p, q);
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("CirclePoint: (0,0) or non-finite coordinates");
    p /= r;
    q /= r;
    if (p < 0.0 || (p == 0.0 && q < 0.0)) {
        p = -p;
        q = -q;
    }
    p_ = p;
    q_ = q;
}

bool CirclePoint::is_infinity(double tol) const { return std::fabs(q_) <= tol; }

double CirclePoint::value() const
{
    if (q_ == 0.0) return INFINITY;
    return p_ / q_;
}

double CirclePoint::distance(const CirclePoint& other) const
{
    return std::fabs(p_ * other.q_ - q_ * other.p_);
}

MobiusFrame::MobiusFrame(double alpha, double beta, double gamma, double delta)
    : m_{{{alpha, beta}, {gamma, delta}}}
{
    const double scale = std::max({std::fabs(alpha), std::fabs(beta), std::fabs(gamma), std::fabs(delta)});
    if (!(scale > 0.0) || std::fabs(determinant()) <= 1e-14 * scale * scale)
        throw DegenerateParameter("MobiusFrame: singular matrix");
}

CirclePoint MobiusFrame::apply(const CirclePoint& z) const
{
    return {m_[0][0] * z.p() + m_[0][1] * z.q(), m_[1][0] * z.p() + m_[1][1] * z.q()};
}

CPair MobiusFrame::apply(const CPair& v) const
{
    return {m_[0][0] * v[0] + m_[0][1] * v[1], m_[1][0] * v[0] + m_[1][1] * v[1]};
}

MobiusFrame MobiusFrame::compose(const MobiusFrame& o) const
{
    return {m_[0][0] * o.m_[0][0] + m_[0][1] * o.m_[1][0], m_[0][0] * o.m_[0][1] + m_[0][1] * o.m_[1][1],
            m_[1][0] * o.m_[0][0] + m_[1][1] * o.m_[1][0], m_[1][0] * o.m_[0][1] + m_[1][1] * o.m_[1][1]};
}

MobiusFrame MobiusFrame::inverse() const { return {m_[1][1], -m_[0][1], -m_[1][0], m_[0][0]}; }

double MobiusFrame::derivative(double x) const
{
    const double den = m_[1][0] * x + m_[1][1];
    return determinant() / (den * den);
}

bool MobiusFrame::same_action(const MobiusFrame& other, double tol) const
{
    auto normalized = [](const MobiusFrame& f) {
        std::array<double, 4> e{f.m_[0][0], f.m_[0][1], f.m_[1][0], f.m_[1][1]};
        double n = 0.0;
        std::size_t big = 0;
        for (std::size_t i = 0; i < 4; ++i) {
            n += e[i] * e[i];
            if (std::fabs(e[i]) > std::fabs(e[big])) big = i;
        }
        n = std::sqrt(n);
        if (e[big] < 0.0) n = -n;
        for (double& x : e) x /= n;
        return e;
    };
    const auto a = normalized(*this);
    const auto b = normalized(other);
    for (std::size_t i = 0; i < 4; ++i)
        if (std::fabs(a[i] - b[i]) > tol) return false;
    return true;
}

MobiusFrame mobius_frame(const CirclePoint& z1, const CirclePoint& z2, const CirclePoint& z3)
{
    constexpr double tol = 1e-14;
    if (z1.same(z2, tol) || z1.same(z3, tol) || z2.same(z3, tol))
        throw CoincidentPoints("mobius_frame: the three points must be pairwise distinct");
    // L_k(p, q) = q_k p - p_k q vanishes at z_k.
    auto linear = [](const CirclePoint& zk, const CirclePoint& z) { return zk.q() * z.p() - zk.p() * z.q(); };
    const double l3_at_1 = linear(z3, z1);
    const double l2_at_1 = linear(z2, z1);
    // beta(z) = L2(z) L3(z1) / (L3(z) L2(z1)).
    return {l3_at_1 * z2.q(), -l3_at_1 * z2.p(), l2_at_1 * z3.q(), -l2_at_1 * z3.p()};
}

namespace {

cplx eval_form(const std::array<double, 3>& c, const CPair& v)
{
    return c[0] * v[0] * v[0] + c[1] * v[0] * v[1] + c[2] * v[1] * v[1];
}

std::array<double, 3> substitute(const std::array<double, 3>& c, const MobiusFrame& n)
{
    const double a = n(0, 0), b = n(0, 1), g = n(1, 0), d = n(1, 1);
    return {c[0] * a * a + c[1] * a * g + c[2] * g * g,
            c[0] * 2.0 * a * b + c[1] * (a * d + b * g) + c[2] * 2.0 * g * d,
            c[0] * b * b + c[1] * b * d + c[2] * d * d};
}

cplx eval_cubic(const std::array<double, 4>& c, cplx x, cplx y)
{
    return ((c[0] * x + c[1] * y) * x + c[2] * y * y) * x + c[3] * y * y * y;
}

// Newton polish of a homogeneous root in whichever affine chart keeps it finite.
CPair polish_cubic_root(const std::array<double, 4>& c, CPair r)
{
    const bool x_chart = std::abs(r[0]) >= std::abs(r[1]);
    cplx u = x_chart ? r[1] / r[0] : r[0] / r[1];
    auto g = [&](cplx s) { return x_chart ? eval_cubic(c, 1.0, s) : eval_cubic(c, s, 1.0); };
    auto dg = [&](cplx s) {
        if (x_chart) return c[1] + 2.0 * c[2] * s + 3.0 * c[3] * s * s;
        return 3.0 * c[0] * s * s + 2.0 * c[1] * s + c[2];
    };
    for (int it = 0; it < 4; ++it) {
        const cplx val = g(u);
        const cplx der = dg(u);
        if (der == 0.0) break;
        const cplx next = u - val / der;
        if (!(std::abs(g(next)) < std::abs(val))) break;
        u = next;
    }
    return x_chart ? CPair{1.0, u} : CPair{u, 1.0};
}

}  // namespace

std::array<CPair, 2> binary_quadratic_roots(const std::array<double, 3>& c)
{
    if (c[0] == 0.0 && c[1] == 0.0 && c[2] == 0.0) throw DegenerateParameter("binary quadratic is identically zero");
    const cplx disc = std::sqrt(cplx(c[1] * c[1] - 4.0 * c[0] * c[2], 0.0));
    cplx plus = c[1] + disc;
    cplx minus = c[1] - disc;
    const cplx q = -0.5 * (std::abs(plus) >= std::abs(minus) ? plus : minus);
    if (q == 0.0) {
        // c1 = 0 and c0 c2 = 0: a double root at 0 or at infinity.
        if (c[0] != 0.0) return {CPair{0.0, 1.0}, CPair{0.0, 1.0}};
        return {CPair{1.0, 0.0}, CPair{1.0, 0.0}};
    }
    // Roots x/y = q/c0 and c2/q, written homogeneously to survive c0 = 0.
    return {CPair{q, c[0]}, CPair{c[2], q}};
}

std::array<CPair, 3> binary_cubic_roots(const std::array<double, 4>& c)
{
    if (c[0] == 0.0 && c[1] == 0.0 && c[2] == 0.0 && c[3] == 0.0)
        throw DegenerateParameter("binary cubic is identically zero");
    // g(theta) = C(cos, sin) is odd under theta -> theta + pi, so it has a real zero on [0, pi].
    auto g = [&](double th) { return eval_cubic(c, std::cos(th), std::sin(th)).real(); };
    constexpr int samples = 96;
    const double pi = std::acos(-1.0);
    double lo = 0.0, glo = g(0.0), hi = pi;
    bool exact = glo == 0.0;
    for (int i = 1; i <= samples && !exact; ++i) {
        const double th = pi * i / samples;
        const double gv = g(th);
        if (gv == 0.0) {
            lo = th;
            exact = true;
            break;
        }
        if ((gv > 0.0) != (glo > 0.0)) {
            hi = th;
            break;
        }
        lo = th;
        glo = gv;
    }
    if (!exact) {
        for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double gm = g(mid);
            if (gm == 0.0) {
                lo = hi = mid;
                break;
            }
            if ((gm > 0.0) == (glo > 0.0)) {
                lo = mid;
                glo = gm;
            } else {
                hi = mid;
            }
        }
    }
    const double th = exact ? lo : 0.5 * (lo + hi);
    const double k = std::cos(th), s = std::sin(th);
    // C = (s x - k y)(a x^2 + b x y + cc y^2).
    double a, b, cc;
    if (std::fabs(s) >= std::fabs(k)) {
        a = c[0] / s;
        b = (c[1] + k * a) / s;
        cc = (c[2] + k * b) / s;
    } else {
        cc = -c[3] / k;
        b = (s * cc - c[2]) / k;
        a = (s * b - c[1]) / k;
    }
    const auto q = binary_quadratic_roots({a, b, cc});
    std::array<CPair, 3> roots{CPair{k, s}, q[0], q[1]};
    for (auto& r : roots) r = polish_cubic_root(c, r);
    return roots;
}

CirclePoint RationalMap2::apply(const CirclePoint& z) const
{
    const double x = z.p(), y = z.q();
    return {P[0] * x * x + P[1] * x * y + P[2] * y * y, Q[0] * x * x + Q[1] * x * y + Q[2] * y * y};
}

double RationalMap2::operator()(double x) const
{
    return (P[0] * x * x + P[1] * x + P[2]) / (Q[0] * x * x + Q[1] * x + Q[2]);
}

double RationalMap2::derivative(double x) const
{
    const double n = P[0] * x * x + P[1] * x + P[2];
    const double d = Q[0] * x * x + Q[1] * x + Q[2];
    const double dn = 2.0 * P[0] * x + P[1];
    const double dd = 2.0 * Q[0] * x + Q[1];
    return (dn * d - n * dd) / (d * d);
}

RationalMap2 RationalMap2::conjugate(const MobiusFrame& beta) const
{
    const MobiusFrame inv = beta.inverse();
    const auto ps = substitute(P, inv);
    const auto qs = substitute(Q, inv);
    RationalMap2 out;
    for (int i = 0; i < 3; ++i) {
        out.P[i] = beta(0, 0) * ps[i] + beta(0, 1) * qs[i];
        out.Q[i] = beta(1, 0) * ps[i] + beta(1, 1) * qs[i];
    }
    return out;
}

double RationalMap2::resultant() const
{
    const double a = P[0] * Q[2] - P[2] * Q[0];
    return a * a - (P[0] * Q[1] - P[1] * Q[0]) * (P[1] * Q[2] - P[2] * Q[1]);
}

std::array<HomogeneousFixedPoint, 3> RationalMap2::fixed_points() const
{
    // x Q(x,y) - y P(x,y).
    const std::array<double, 4> cubic{Q[0], Q[1] - P[0], Q[2] - P[1], -P[2]};
    const auto roots = binary_cubic_roots(cubic);
    std::array<HomogeneousFixedPoint, 3> out;
    for (std::size_t i = 0; i < 3; ++i) {
        CPair v = roots[i];
        const double s = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
        v[0] /= s;
        v[1] /= s;
        const cplx pv = eval_form(P, v);
        const cplx qv = eval_form(Q, v);
        // F(v) = lambda v; at a fixed point the multiplier is det DF(v) / (d lambda^2) with d = 2.
        const cplx lambda = pv * std::conj(v[0]) + qv * std::conj(v[1]);
        const cplx px = 2.0 * P[0] * v[0] + P[1] * v[1];
        const cplx py = P[1] * v[0] + 2.0 * P[2] * v[1];
        const cplx qx = 2.0 * Q[0] * v[0] + Q[1] * v[1];
        const cplx qy = Q[1] * v[0] + 2.0 * Q[2] * v[1];
        out[i].point = v;
        out[i].multiplier = (px * qy - py * qx) / (2.0 * lambda * lambda);
    }
    return out;
}

std::array<CPair, 2> RationalMap2::critical_points() const
{
    const std::array<double, 3> w{2.0 * (P[0] * Q[1] - P[1] * Q[0]), 4.0 * (P[0] * Q[2] - P[2] * Q[0]),
                                  2.0 * (P[1] * Q[2] - P[2] * Q[1])};
    return binary_quadratic_roots(w);
}

std::array<CPair, 2> RationalMap2::preimages(const CirclePoint& w) const
{
    std::array<double, 3> c;
    for (int i = 0; i < 3; ++i) c[i] = w.q() * P[i] - w.p() * Q[i];
    return binary_quadratic_roots(c);
}

}  // namespace rqm
