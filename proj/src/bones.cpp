#include "rqm/bones.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "rqm/errors.hpp"
#include "rqm/parallel.hpp"

namespace rqm {

namespace {

constexpr double pole_tol = 1e-12;

double iterate(const QuadraticMap& f, double x, int k)
{
    for (int i = 0; i < k; ++i) {
        if (!std::isfinite(x) || std::fabs(x) <= pole_tol) throw PoleEncounter("critical orbit hit the pole z = 0");
        x = f(x);
    }
    if (!std::isfinite(x)) throw PoleEncounter("critical orbit escaped to infinity");
    return x;
}

double r1_fixed(const Vec2& v, int n, double c1)
{
    return iterate(map_from_critical_values(to_pair(v)), v[0], n - 1) - c1;
}

double r2_fixed(const Vec2& v, int m, double c1)
{
    return iterate(map_from_critical_values(to_pair(v)), v[1], m - 1) - c1;
}

// Central difference of g at 0 with steps h and h/2; returns (richardson, level difference).
std::pair<double, double> central(const std::function<double(double)>& g, double h)
{
    const double d1 = (g(h) - g(-h)) / (2.0 * h);
    const double d2 = (g(0.5 * h) - g(-0.5 * h)) / h;
    return {(4.0 * d2 - d1) / 3.0, std::fabs(d1 - d2)};
}

double fd_step(const Vec2& v) { return 1e-6 * std::max(1.0, norm(v)); }

int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

}  // namespace

int essential_critical_point(const CriticalValuePair& v)
{
    const RegionClass rc = classify_region(v);
    if (rc.tag != RegionTag::unimodal) throw RegionMismatch("parameter is not in the unimodal region");
    return rc.essential_critical_point;
}

double residual_R1(const CriticalValuePair& v, int n)
{
    if (n < 1) throw PreconditionError("residual_R1: n must be >= 1");
    return r1_fixed(to_vec(v), n, essential_critical_point(v));
}

double residual_R2(const CriticalValuePair& v, int m)
{
    if (m < 1) throw PreconditionError("residual_R2: m must be >= 1");
    return r2_fixed(to_vec(v), m, essential_critical_point(v));
}

double residual_preperiodic(const CriticalValuePair& v, int j, int q, int ell)
{
    if (j != 1 && j != 2) throw PreconditionError("residual_preperiodic: j must be 1 or 2");
    if (ell < 1 || ell >= q) throw PreconditionError("residual_preperiodic: need 1 <= ell < q");
    const QuadraticMap f = map_from_critical_values(v);
    const double x0 = j == 1 ? v.v1 : v.v2;
    const double early = iterate(f, x0, ell - 1);
    return iterate(f, early, q - ell) - early;
}

double residual(const CriticalValuePair& v, const CriticalRelation& r)
{
    if (r.kind == RelationKind::preperiodic) return residual_preperiodic(v, r.j, r.q, r.target);
    if (r.j != 1 && r.j != 2) throw PreconditionError("residual: j must be 1 or 2");
    if (r.q < 1) throw PreconditionError("residual: q must be >= 1");
    if (r.target != -1 && r.target != 1) throw PreconditionError("residual: target must be -1 or +1");
    const Vec2 x = to_vec(v);
    return r.j == 1 ? r1_fixed(x, r.q, r.target) : r2_fixed(x, r.q, r.target);
}

JacobianEstimate jacobian_fd(const VectorField& R, const Vec2& v, double rel_tol)
{
    const double h = fd_step(v);
    JacobianEstimate out;
    Mat2 diff{};
    for (int k = 0; k < 2; ++k) {
        Vec2 e{};
        e[k] = 1.0;
        const Vec2 p1 = R(v + h * e), m1 = R(v - h * e);
        const Vec2 p2 = R(v + 0.5 * h * e), m2 = R(v - 0.5 * h * e);
        for (int i = 0; i < 2; ++i) {
            const double d1 = (p1[i] - m1[i]) / (2.0 * h);
            const double d2 = (p2[i] - m2[i]) / h;
            out.matrix[i][k] = (4.0 * d2 - d1) / 3.0;
            diff[i][k] = d1 - d2;
        }
    }
    const double scale = max_abs(out.matrix);
    out.consistency = scale > 0.0 ? max_abs(diff) / scale : max_abs(diff);
    if (!(out.consistency <= rel_tol))
        throw JacobianInconsistent("jacobian_fd: Richardson levels disagree (rel " + std::to_string(out.consistency) + ")");
    return out;
}

Vec2 gradient_fd(const ScalarField& R, const Vec2& v, double rel_tol)
{
    const auto J = jacobian_fd([&](const Vec2& x) { return Vec2{R(x), 0.0}; }, v, rel_tol);
    return J.matrix[0];
}

double directional_fd(const ScalarField& R, const Vec2& v, const Vec2& e, double rel_tol)
{
    const auto [d, level] = central([&](double s) { return R(v + s * e); }, fd_step(v));
    if (!(level <= rel_tol * std::max(std::fabs(d), 1e-300)))
        throw JacobianInconsistent("directional_fd: Richardson levels disagree");
    return d;
}

PCFPoint newton_pcf(const CriticalValuePair& v0, int n, int m, const NewtonOptions& opts)
{
    if (n < 1 || m < 1) throw PreconditionError("newton_pcf: n, m must be >= 1");
    const int c1 = essential_critical_point(v0);
    const VectorField R = [&](const Vec2& x) { return Vec2{r1_fixed(x, n, c1), r2_fixed(x, m, c1)}; };
    auto inside = [&](const Vec2& x) {
        if (x[0] == x[1]) return false;
        const RegionClass rc = classify_region(to_pair(x), 0.0);
        return rc.tag == RegionTag::unimodal && rc.essential_critical_point == c1;
    };

    Vec2 v = to_vec(v0);
    Vec2 r = R(v);
    std::vector<double> history{std::max(std::fabs(r[0]), std::fabs(r[1]))};
    std::vector<bool> full_step;
    int it = 0;
    bool stalled = false;
    for (; it < opts.max_iter && history.back() >= opts.tol; ++it) {
        Mat2 J;
        try {
            J = jacobian_fd(R, v, 1e-2).matrix;
        } catch (const NumericalError&) {
            throw Divergence("newton_pcf: Jacobian unavailable");
        }
        if (!(std::fabs(det(J)) > 1e-14 * max_abs(J) * max_abs(J)))
            throw Divergence("newton_pcf: singular Jacobian");
        const Vec2 step = solve(J, -r);
        const double r0 = norm(r);
        bool accepted = false;
        for (double lambda = 1.0; lambda >= 1.0 / 1024.0 / 1024.0; lambda *= 0.5) {
            const Vec2 cand = v + lambda * step;
            try {
                if (!inside(cand)) continue;
                const Vec2 rc = R(cand);
                if (!std::isfinite(rc[0]) || !std::isfinite(rc[1])) continue;
                if (norm(rc) <= (1.0 - 1e-4 * lambda) * r0) {
                    v = cand;
                    r = rc;
                    full_step.push_back(lambda == 1.0);
                    accepted = true;
                    break;
                }
            } catch (const Error&) {
            }
        }
        if (!accepted) {
            stalled = history.back() < opts.floor_tol;
            if (stalled) break;
            throw Divergence("newton_pcf: line search failed");
        }
        history.push_back(std::max(std::fabs(r[0]), std::fabs(r[1])));
    }
    if (history.back() >= opts.tol && !stalled)
        throw Divergence("newton_pcf: no convergence after " + std::to_string(it) + " iterations");

    PCFPoint p;
    p.v = to_pair(v);
    p.n = n;
    p.m = m;
    p.residuals = r;
    p.iterations = it;
    const std::size_t steps = full_step.size();
    for (std::size_t k = steps >= 3 ? steps - 3 : 0; k < steps; ++k) {
        if (!full_step[k] || history[k] < 1e-8) continue;
        p.newton_constant = std::max(p.newton_constant, history[k + 1] / (history[k] * history[k]));
    }

    const QuadraticMap f = map_from_critical_values(p.v);
    p.separation = INFINITY;
    double x = v[0];
    for (int i = 1; i < n; ++i) {
        p.separation = std::min(p.separation, std::fabs(x - c1));
        if (std::fabs(x - c1) <= opts.minimality_tol)
            throw MinimalityViolation("newton_pcf: essential critical point has period " + std::to_string(i) + " < n");
        x = f(x);
    }
    double y = v[1];
    for (int i = 1; i < m; ++i) {
        p.separation = std::min(p.separation, std::fabs(y - c1));
        if (std::fabs(y - c1) <= opts.minimality_tol)
            throw MinimalityViolation("newton_pcf: trivial critical value lands after " + std::to_string(i) + " < m steps");
        y = f(y);
    }

    const auto J = jacobian_fd(R, v);
    if (norm(solve(J.matrix, r)) > 1e-9 * std::max(1.0, norm(v)))
        throw Divergence("newton_pcf: converged to a multiple root");
    p.jacobian = J.matrix;
    p.jacobian_consistency = J.consistency;
    p.d1 = orbit_derivative(f, v[0], n - 1);
    p.d2 = orbit_derivative(f, v[1], m - 1);
    p.derivative_sign = sign_of(p.d2);
    p.quotient = transversality_quotient(p);
    p.region_margin = classify_region(p.v).margin;
    return p;
}

double transversality_quotient(const PCFPoint& p)
{
    if (std::fabs(p.d1) <= 1e-12 || std::fabs(p.d2) <= 1e-12)
        throw VanishingDerivative("transversality_quotient: orbit derivative vanishes");
    return det(p.jacobian) / (p.d1 * p.d2);
}

namespace {

TangentFrame tangent_fixed(const Vec2& v, int n, double c1)
{
    const Vec2 g = gradient_fd([&](const Vec2& x) { return r1_fixed(x, n, c1); }, v);
    if (norm(g) < 1e-10) throw RankDrop("tangent_E: gradient of R1 vanishes");
    const double d1 = orbit_derivative(map_from_critical_values(to_pair(v)), v[0], n - 1);
    if (std::fabs(d1) <= 1e-12) throw VanishingDerivative("tangent_E: orbit derivative vanishes");
    TangentFrame t;
    const Vec2 e = d1 * perp(g);
    t.E = (1.0 / norm(e)) * e;
    t.gradient_column = (1.0 / d1) * g;
    return t;
}

}  // namespace

TangentFrame tangent_E(const CriticalValuePair& v, int n)
{
    const TangentFrame t = tangent_fixed(to_vec(v), n, essential_critical_point(v));
    if (!(cross(t.gradient_column, t.E) > 0.0)) throw RankDrop("tangent_E: orientation degenerate");
    return t;
}

const char* to_string(BoneKind k)
{
    switch (k) {
    case BoneKind::arc: return "arc";
    case BoneKind::loop: return "loop";
    case BoneKind::truncated: return "truncated";
    }
    return "?";
}

namespace {

struct Leg {
    std::vector<Vec2> points;
    std::string reason;
    bool loop = false;
    bool truncated = false;
    int steps = 0;
    double max_angle = 0.0;
};

std::optional<Vec2> correct(const CurveProblem& pb, const Vec2& p, const Vec2& T, double h, const TraceOptions& o)
{
    const Vec2 N = perp(T);
    Vec2 q = p;
    try {
        double r = pb.residual(q);
        for (int it = 0; it < o.corrector_iter; ++it) {
            if (std::fabs(r) <= o.corrector_tol) return q;
            const double e = 1e-7 * std::max(1.0, norm(q));
            const double g = (pb.residual(q + e * N) - pb.residual(q - e * N)) / (2.0 * e);
            if (!(std::fabs(g) > 0.0) || !std::isfinite(g)) return std::nullopt;
            q = q - (r / g) * N;
            if (norm(q - p) > h) return std::nullopt;
            r = pb.residual(q);
        }
        if (std::fabs(r) <= 1e-10) return q;
    } catch (const Error&) {
    }
    return std::nullopt;
}

Leg trace_leg(const CurveProblem& pb, const Vec2& seed, double dir, const TraceOptions& o)
{
    Leg leg;
    leg.points.push_back(seed);
    const Vec2 T0 = dir * pb.tangent(seed);
    Vec2 v = seed, T = T0;
    double h = o.h_init, arclength = 0.0;
    int successes = 0;

    for (; leg.steps < o.max_steps; ++leg.steps) {
        const Vec2 to_start = seed - v;
        const double s_close = dot(to_start, T);
        if (arclength > 10.0 * o.h_max && norm(to_start) <= 1.5 * h && s_close > 0.0 && dot(T, T0) > o.closure_alignment) {
            if (const auto q = correct(pb, v + s_close * T, T, 2.0 * h, o); q && norm(*q - seed) <= o.closure_tol) {
                leg.points.push_back(seed);
                leg.loop = true;
                leg.reason = "loop";
                return leg;
            }
        }

        bool ok = false;
        Vec2 q{}, Tq{};
        double angle = 0.0;
        if (const auto c = correct(pb, v + h * T, T, h, o)) {
            q = *c;
            if (const auto where = pb.outside(q)) {
                // Bisect the predictor length until the corrected endpoint sits on the boundary.
                double lo = 0.0, hi = h;
                Vec2 last_in = v;
                for (int k = 0; k < 48; ++k) {
                    const double mid = 0.5 * (lo + hi);
                    const auto cm = correct(pb, v + mid * T, T, h, o);
                    if (cm && !pb.outside(*cm)) {
                        lo = mid;
                        last_in = *cm;
                    } else {
                        hi = mid;
                    }
                }
                if (norm(last_in - v) > 0.0) leg.points.push_back(last_in);
                leg.reason = *where == "window" ? *where : pb.boundary_label(last_in);
                return leg;
            }
            try {
                Tq = dir * pb.tangent(q);
                angle = std::acos(std::clamp(dot(T, Tq), -1.0, 1.0));
                ok = angle <= o.max_angle;
            } catch (const Error&) {
            }
        }
        if (!ok) {
            h *= 0.5;
            successes = 0;
            if (h < o.h_min) throw Stagnation("trace: corrector failed below the minimum step");
            continue;
        }
        arclength += norm(q - v);
        leg.max_angle = std::max(leg.max_angle, angle);
        v = q;
        T = Tq;
        leg.points.push_back(v);
        if (++successes >= o.grow_after) {
            h = std::min(h * o.grow, o.h_max);
            successes = 0;
        }
    }
    leg.truncated = true;
    leg.reason = "budget";
    return leg;
}

double polyline_length(const std::vector<Vec2>& pts)
{
    double s = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) s += norm(pts[i] - pts[i - 1]);
    return s;
}

}  // namespace

Bone trace_curve(const CurveProblem& problem, const Vec2& seed, const TraceOptions& opts)
{
    if (problem.outside(seed)) throw PreconditionError("trace: seed outside the domain");
    Bone bone;
    std::vector<Vec2> pts;
    Leg fwd = trace_leg(problem, seed, 1.0, opts);
    bone.steps = fwd.steps;
    bone.max_angle_step = fwd.max_angle;
    if (fwd.loop) {
        pts = fwd.points;
        bone.kind = BoneKind::loop;
        bone.endpoint_info = {"loop", "loop"};
    } else {
        Leg bwd = trace_leg(problem, seed, -1.0, opts);
        bone.steps += bwd.steps;
        bone.max_angle_step = std::max(bone.max_angle_step, bwd.max_angle);
        pts.assign(bwd.points.rbegin(), bwd.points.rend());
        pts.insert(pts.end(), fwd.points.begin() + 1, fwd.points.end());
        bone.kind = fwd.truncated || bwd.truncated ? BoneKind::truncated : BoneKind::arc;
        bone.endpoint_info = {bwd.reason, fwd.reason};
    }
    bone.arclength = polyline_length(pts);
    for (const auto& p : pts) {
        bone.points.push_back(to_pair(p));
        try {
            bone.max_residual = std::max(bone.max_residual, std::fabs(problem.residual(p)));
        } catch (const Error&) {
            bone.max_residual = INFINITY;
        }
    }
    return bone;
}

std::string boundary_label(const CriticalValuePair& v, double tol)
{
    const double s1 = sigma_coords(map_from_critical_values(v)).sigma1;
    if (std::fabs(s1 - 2.0) <= tol) return "sigma1=2";
    if (std::fabs(s1 + 6.0) <= tol) return "sigma1=-6";
    return "region";
}

namespace {

CurveProblem bone_problem_fixed(int n, int c1, const Window& window)
{
    CurveProblem pb;
    pb.residual = [n, c1](const Vec2& v) { return r1_fixed(v, n, c1); };
    pb.tangent = [n, c1](const Vec2& v) { return tangent_fixed(v, n, c1).E; };
    pb.outside = [c1, window](const Vec2& v) -> std::optional<std::string> {
        if (v[0] == v[1]) return "region";
        const RegionClass rc = classify_region(to_pair(v), 0.0);
        if (rc.tag != RegionTag::unimodal || rc.essential_critical_point != c1) return "region";
        if (!window.contains(v)) return "window";
        return std::nullopt;
    };
    pb.boundary_label = [](const Vec2& v) { return boundary_label(to_pair(v)); };
    return pb;
}

bool exact_period(const CriticalValuePair& v, int n, double tol = 1e-8)
{
    const int c1 = essential_critical_point(v);
    const QuadraticMap f = map_from_critical_values(v);
    double x = v.v1;
    for (int i = 1; i < n; ++i) {
        if (std::fabs(x - c1) <= tol) return false;
        x = f(x);
    }
    return true;
}

}  // namespace

CurveProblem bone_problem(int n, const Window& window)
{
    const Vec2 centre{0.5 * (window.v1_min + window.v1_max), 0.5 * (window.v2_min + window.v2_max)};
    return bone_problem_fixed(n, essential_critical_point(to_pair(centre)), window);
}

Bone trace_bone(const CriticalValuePair& seed, int n, const Window& window, const TraceOptions& opts)
{
    const int c1 = essential_critical_point(seed);
    if (!(std::fabs(r1_fixed(to_vec(seed), n, c1)) < 1e-8)) throw PreconditionError("trace_bone: seed is not on a bone");
    Bone bone = trace_curve(bone_problem_fixed(n, c1, window), to_vec(seed), opts);
    bone.n = n;
    for (int e = 0; e < 2; ++e) {
        const auto& p = e == 0 ? bone.points.front() : bone.points.back();
        bone.endpoint_sigma1[e] = sigma_coords(map_from_critical_values(p)).sigma1;
    }
    return bone;
}

std::vector<PCFPoint> scan_pcf(const Window& window, const ScanOptions& opts)
{
    const int nx = opts.nx, ny = opts.ny;
    const int nodes = (nx + 1) * (ny + 1);
    const int nr1 = opts.n_max, nr2 = opts.m_max;
    // Residual tables: index [k][node] holds R1 for n = k + 1 (or R2 for m = k + 1); NaN where undefined.
    std::vector<double> r1(static_cast<std::size_t>(nr1) * nodes, NAN), r2(static_cast<std::size_t>(nr2) * nodes, NAN);
    std::vector<int> ess(nodes, 0);
    auto node_v = [&](int i, int j) {
        return Vec2{window.v1_min + (window.v1_max - window.v1_min) * i / nx,
                    window.v2_min + (window.v2_max - window.v2_min) * j / ny};
    };
    parallel_for(static_cast<std::size_t>(ny + 1), opts.workers, [&](std::size_t jr) {
        const int j = static_cast<int>(jr);
        for (int i = 0; i <= nx; ++i) {
            const int id = j * (nx + 1) + i;
            const Vec2 v = node_v(i, j);
            if (v[0] == v[1]) continue;
            const RegionClass rc = classify_region(to_pair(v), 0.0);
            if (rc.tag != RegionTag::unimodal || rc.margin <= 0.0) continue;
            const int c1 = rc.essential_critical_point;
            ess[id] = c1;
            const QuadraticMap f = map_from_critical_values(to_pair(v));
            double x = v[0], y = v[1];
            for (int k = 0; k < std::max(nr1, nr2); ++k) {
                if (k < nr1) r1[static_cast<std::size_t>(k) * nodes + id] = x - c1;
                if (k < nr2) r2[static_cast<std::size_t>(k) * nodes + id] = y - c1;
                x = std::fabs(x) > pole_tol ? f(x) : NAN;
                y = std::fabs(y) > pole_tol ? f(y) : NAN;
            }
        }
    });

    struct Candidate {
        int n, m;
        Vec2 seed;
    };
    std::vector<Candidate> cands;
    constexpr double pole_filter = 10.0;
    auto changes = [&](const std::vector<double>& tab, int k, const int (&ids)[4]) {
        double lo = INFINITY, hi = -INFINITY;
        for (int id : ids) {
            const double val = tab[static_cast<std::size_t>(k) * nodes + id];
            if (!std::isfinite(val) || std::fabs(val) > pole_filter) return false;
            lo = std::min(lo, val);
            hi = std::max(hi, val);
        }
        return lo <= 0.0 && hi >= 0.0;
    };
    for (int n = 1; n <= nr1; ++n)
        for (int m = 1; m <= nr2; ++m)
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i) {
                    const int a = j * (nx + 1) + i;
                    const int ids[4] = {a, a + 1, a + nx + 1, a + nx + 2};
                    if (ess[ids[0]] == 0 || ess[ids[0]] != ess[ids[1]] || ess[ids[0]] != ess[ids[2]] ||
                        ess[ids[0]] != ess[ids[3]])
                        continue;
                    if (!changes(r1, n - 1, ids) || !changes(r2, m - 1, ids)) continue;
                    const Vec2 lo = node_v(i, j), hi = node_v(i + 1, j + 1);
                    cands.push_back({n, m, 0.5 * (lo + hi)});
                }

    std::vector<std::optional<PCFPoint>> found(cands.size());
    parallel_for(cands.size(), opts.workers, [&](std::size_t k) {
        try {
            PCFPoint p = newton_pcf(to_pair(cands[k].seed), cands[k].n, cands[k].m, opts.newton);
            if (!window.contains(to_vec(p.v))) return;
            if (!(p.region_margin >= opts.margin)) return;
            if (!(p.newton_constant < opts.newton_constant_max)) return;
            if (!(p.separation >= opts.separation)) return;
            found[k] = p;
        } catch (const Error&) {
        }
    });

    std::vector<PCFPoint> pts;
    for (auto& f : found)
        if (f) pts.push_back(*f);
    std::sort(pts.begin(), pts.end(), [](const PCFPoint& a, const PCFPoint& b) {
        return std::tie(a.n, a.m, a.v.v1, a.v.v2) < std::tie(b.n, b.m, b.v.v1, b.v.v2);
    });
    std::vector<PCFPoint> out;
    for (const auto& p : pts) {
        const bool dup = std::any_of(out.begin(), out.end(), [&](const PCFPoint& q) {
            return q.n == p.n && q.m == p.m && norm(to_vec(q.v) - to_vec(p.v)) <= opts.dedup_tol;
        });
        if (!dup) out.push_back(p);
    }
    return out;
}

PositiveDirectionReport check_positive_direction(const PCFPoint& p)
{
    if (std::fabs(p.d2) <= 1e-12) throw VanishingDerivative("check_positive_direction: (f^{m-1})'(v2) vanishes");
    PositiveDirectionReport rep;
    const int c1 = essential_critical_point(p.v);
    rep.E = tangent_E(p.v, p.n).E;
    const int m = p.m;
    rep.directional_derivative =
        directional_fd([m, c1](const Vec2& x) { return r2_fixed(x, m, c1); }, to_vec(p.v), rep.E);
    rep.normalized = rep.directional_derivative / p.d2;
    rep.raw_sign = sign_of(rep.directional_derivative);
    rep.derivative_sign = sign_of(p.d2);
    rep.positive = rep.normalized > 0.0;
    return rep;
}

double distance_to_polyline(const std::vector<CriticalValuePair>& points, const Vec2& v)
{
    double best = INFINITY;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Vec2 a = to_vec(points[i]);
        if (i + 1 == points.size()) {
            best = std::min(best, norm(v - a));
            break;
        }
        const Vec2 b = to_vec(points[i + 1]);
        const Vec2 ab = b - a;
        const double len2 = dot(ab, ab);
        const double s = len2 > 0.0 ? std::clamp(dot(v - a, ab) / len2, 0.0, 1.0) : 0.0;
        best = std::min(best, norm(v - (a + s * ab)));
    }
    return best;
}

std::vector<CriticalValuePair> bone_seeds(int n, const Window& window, int lines, int samples)
{
    const Vec2 centre{0.5 * (window.v1_min + window.v1_max), 0.5 * (window.v2_min + window.v2_max)};
    const int c1 = essential_critical_point(to_pair(centre));
    const CurveProblem pb = bone_problem_fixed(n, c1, window);
    auto value = [&](const Vec2& v) -> double {
        if (pb.outside(v)) return NAN;
        try {
            return pb.residual(v);
        } catch (const Error&) {
            return NAN;
        }
    };
    std::vector<CriticalValuePair> seeds;
    auto scan_line = [&](const Vec2& from, const Vec2& to) {
        Vec2 prev = from;
        double fp = value(prev);
        for (int k = 1; k <= samples; ++k) {
            const Vec2 cur = from + (static_cast<double>(k) / samples) * (to - from);
            const double fc = value(cur);
            if (std::isfinite(fp) && std::isfinite(fc) && std::fabs(fp) <= 5.0 && std::fabs(fc) <= 5.0 &&
                ((fp <= 0.0 && fc > 0.0) || (fp > 0.0 && fc <= 0.0))) {
                Vec2 a = prev, b = cur;
                double fa = fp;
                for (int it = 0; it < 80; ++it) {
                    const Vec2 mid = 0.5 * (a + b);
                    const double fm = value(mid);
                    if (!std::isfinite(fm)) break;
                    if ((fa <= 0.0) == (fm <= 0.0)) {
                        a = mid;
                        fa = fm;
                    } else {
                        b = mid;
                    }
                }
                const Vec2 root = std::fabs(value(a)) <= std::fabs(value(b)) ? a : b;
                const double fr = value(root);
                if (std::isfinite(fr) && std::fabs(fr) < 1e-8 && exact_period(to_pair(root), n))
                    seeds.push_back(to_pair(root));
            }
            prev = cur;
            fp = fc;
        }
    };
    for (int l = 1; l < lines; ++l) {
        const double s = static_cast<double>(l) / lines;
        const double v2 = window.v2_min + s * (window.v2_max - window.v2_min);
        const double v1 = window.v1_min + s * (window.v1_max - window.v1_min);
        scan_line({window.v1_min, v2}, {window.v1_max, v2});
        scan_line({v1, window.v2_min}, {v1, window.v2_max});
    }
    return seeds;
}

std::vector<Bone> trace_bones(int n, const std::vector<CriticalValuePair>& seeds, const Window& window,
                              const BoneSetOptions& opts)
{
    std::vector<Bone> bones;
    for (const auto& s : seeds) {
        if (!window.contains(to_vec(s))) continue;
        try {
            if (!exact_period(s, n)) continue;
        } catch (const Error&) {
            continue;
        }
        const bool known = std::any_of(bones.begin(), bones.end(), [&](const Bone& b) {
            return distance_to_polyline(b.points, to_vec(s)) <= opts.dedup_tol;
        });
        if (known) continue;
        bones.push_back(trace_bone(s, n, window, opts.trace));
    }
    return bones;
}

}  // namespace rqm
