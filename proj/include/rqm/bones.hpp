#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rqm/family.hpp"
#include "rqm/linalg.hpp"

namespace rqm {

inline Vec2 to_vec(const CriticalValuePair& v) { return {v.v1, v.v2}; }
inline CriticalValuePair to_pair(const Vec2& x) { return {x[0], x[1]}; }

enum class RelationKind { lands_on_critical, preperiodic };

/// One critical orbit relation: f^{q-1}(v_j) = c (lands_on_critical, target = +-1) or
/// f^{q-1}(v_j) = f^{target-1}(v_j) (preperiodic, 1 <= target < q).
struct CriticalRelation {
    RelationKind kind = RelationKind::lands_on_critical;
    int j = 1;
    int q = 1;
    int target = -1;
};

/// The essential critical point of v; throws RegionMismatch unless v is unimodal.
int essential_critical_point(const CriticalValuePair& v);

/// f^{n-1}(v1) - c1 with c1 the essential critical point.
double residual_R1(const CriticalValuePair& v, int n);
/// f^{m-1}(v2) - c1.
double residual_R2(const CriticalValuePair& v, int m);
/// f^{q-1}(v_j) - f^{ell-1}(v_j).
double residual_preperiodic(const CriticalValuePair& v, int j, int q, int ell);
double residual(const CriticalValuePair& v, const CriticalRelation& r);

using ScalarField = std::function<double(const Vec2&)>;
using VectorField = std::function<Vec2(const Vec2&)>;

struct JacobianEstimate {
    Mat2 matrix{};
    /// max |D(h) - D(h/2)| relative to the largest entry.
    double consistency = 0.0;
};

/// Central differences at h = 1e-6 max(1, |v|) and h/2, combined by one Richardson step.
/// Throws JacobianInconsistent when the two levels differ by more than rel_tol.
JacobianEstimate jacobian_fd(const VectorField& R, const Vec2& v, double rel_tol = 1e-4);
Vec2 gradient_fd(const ScalarField& R, const Vec2& v, double rel_tol = 1e-4);
/// Derivative of R along the unit vector e by the same scheme.
double directional_fd(const ScalarField& R, const Vec2& v, const Vec2& e, double rel_tol = 1e-4);

struct PCFPoint {
    CriticalValuePair v;
    int n = 0;
    int m = 0;
    Mat2 jacobian{};
    double jacobian_consistency = 0.0;
    double quotient = 0.0;
    /// Sign of (f^{m-1})'(v2).
    int derivative_sign = 0;
    /// (f^{n-1})'(v1) and (f^{m-1})'(v2).
    double d1 = 0.0;
    double d2 = 0.0;
    Vec2 residuals{};
    int iterations = 0;
    /// Largest r_{k+1} / r_k^2 over the final Newton steps.
    double newton_constant = 0.0;
    double region_margin = 0.0;
    /// min |f^i(c) - c1| over the earlier iterates checked for minimality.
    double separation = 0.0;
};

struct NewtonOptions {
    int max_iter = 60;
    double tol = 1e-12;
    /// Accepted when the line search stalls below this residual.
    double floor_tol = 1e-10;
    double minimality_tol = 1e-8;
};

/// Damped Newton with Armijo backtracking on (R1, R2). Throws Divergence or MinimalityViolation.
PCFPoint newton_pcf(const CriticalValuePair& v0, int n, int m, const NewtonOptions& opts = {});

/// det(J) / ((f^{n-1})'(v1) (f^{m-1})'(v2)); throws VanishingDerivative.
double transversality_quotient(const PCFPoint& p);

struct TangentFrame {
    Vec2 E{};
    Vec2 gradient_column{};
};

/// E = (f^{n-1})'(v1) (-dR1/dv2, dR1/dv1), normalized; throws RankDrop when |grad R1| < 1e-10.
TangentFrame tangent_E(const CriticalValuePair& v, int n);

enum class BoneKind { arc, loop, truncated };
const char* to_string(BoneKind k);

struct Bone {
    int n = 0;
    std::vector<CriticalValuePair> points;
    BoneKind kind = BoneKind::truncated;
    /// Stop reason at the start and at the end of the polyline (arcs).
    std::array<std::string, 2> endpoint_info;
    std::array<double, 2> endpoint_sigma1{};
    double arclength = 0.0;
    double max_residual = 0.0;
    double max_angle_step = 0.0;
    int steps = 0;
};

/// A curve {residual = 0} with an oriented unit tangent and a domain.
struct CurveProblem {
    ScalarField residual;
    /// Oriented unit tangent at a point of the curve.
    VectorField tangent;
    /// Empty while inside the domain, otherwise the name of the boundary.
    std::function<std::optional<std::string>(const Vec2&)> outside;
    /// Label for a point found on the domain boundary.
    std::function<std::string(const Vec2&)> boundary_label;
};

struct TraceOptions {
    double h_min = 1e-5;
    double h_max = 1e-2;
    double h_init = 1e-3;
    double grow = 1.3;
    int grow_after = 3;
    int max_steps = 100000;
    double closure_tol = 1e-6;
    double closure_alignment = 0.9;
    double max_angle = 0.2;
    double corrector_tol = 1e-12;
    int corrector_iter = 12;
};

/// Pseudo-arclength continuation in both directions from seed.
Bone trace_curve(const CurveProblem& problem, const Vec2& seed, const TraceOptions& opts = {});

/// Rectangle in (v1, v2).
struct Window {
    double v1_min = 1.0;
    double v1_max = 10.0;
    double v2_min = -1.0;
    double v2_max = 1.0;

    bool contains(const Vec2& v) const
    {
        return v[0] >= v1_min && v[0] <= v1_max && v[1] >= v2_min && v[1] <= v2_max;
    }
};

/// Label of a boundary point: "sigma1=2", "sigma1=-6" (within tol) or "window".
std::string boundary_label(const CriticalValuePair& v, double tol = 1e-2);

CurveProblem bone_problem(int n, const Window& window);

/// Throws PreconditionError unless |R1(seed)| < 1e-8.
Bone trace_bone(const CriticalValuePair& seed, int n, const Window& window = {}, const TraceOptions& opts = {});

struct ScanOptions {
    int n_max = 4;
    int m_max = 6;
    int nx = 360;
    int ny = 120;
    /// Reject points closer than this to the region boundary.
    double margin = 1e-6;
    double dedup_tol = 1e-8;
    double newton_constant_max = 1e6;
    /// Minimum PCFPoint::separation.
    double separation = 1e-4;
    int workers = 1;
    NewtonOptions newton;
};

/// Grid sign changes of (R1, R2) per (n, m), Newton polish, minimality and dedup.
/// Sorted by (n, m, v1, v2).
std::vector<PCFPoint> scan_pcf(const Window& window, const ScanOptions& opts = {});

struct PositiveDirectionReport {
    Vec2 E{};
    /// Derivative of R2 along E.
    double directional_derivative = 0.0;
    /// Divided by (f^{m-1})'(v2).
    double normalized = 0.0;
    int raw_sign = 0;
    int derivative_sign = 0;
    bool positive = false;
    std::string chart = "a(z+1/z)+b, critical points -1 and +1";
};

PositiveDirectionReport check_positive_direction(const PCFPoint& p);

/// Distance from v to the polyline.
double distance_to_polyline(const std::vector<CriticalValuePair>& points, const Vec2& v);

/// Sign changes of R1 along the grid lines of the window.
std::vector<CriticalValuePair> bone_seeds(int n, const Window& window, int lines = 40, int samples = 2000);

struct BoneSetOptions {
    TraceOptions trace;
    double dedup_tol = 1e-3;
};

/// Traces one bone per distinct component reached from the seeds (exact period n only).
std::vector<Bone> trace_bones(int n, const std::vector<CriticalValuePair>& seeds, const Window& window,
                              const BoneSetOptions& opts = {});

}  // namespace rqm
