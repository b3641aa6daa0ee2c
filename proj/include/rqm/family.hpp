#pragma once

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "rqm/projective.hpp"

namespace rqm {

/// Critical values (v1, v2) = (f(-1), f(+1)) of a map in the normalized family.
struct CriticalValuePair {
    double v1 = 0.0;
    double v2 = 0.0;

    friend bool operator==(const CriticalValuePair&, const CriticalValuePair&) = default;
};

/// z -> a (z + 1/z) + b: fixed point at infinity, 0 -> infinity, critical points -1 and +1.
class QuadraticMap {
public:
    /// Throws DegenerateParameter when a == 0.
    QuadraticMap(double a, double b);

    double a() const { return a_; }
    double b() const { return b_; }

    /// Affine evaluation; caller keeps x away from 0.
    double operator()(double x) const { return a_ * (x + 1.0 / x) + b_; }
    double derivative(double x) const { return a_ * (1.0 - 1.0 / (x * x)); }

    /// Homogeneous form [a p^2 + b p q + a q^2 : p q].
    RationalMap2 homogeneous() const { return {{a_, b_, a_}, {0.0, 1.0, 0.0}}; }

private:
    double a_;
    double b_;
};

QuadraticMap map_from_critical_values(const CriticalValuePair& v);
CriticalValuePair critical_values(const QuadraticMap& f);

CirclePoint eval_on_circle(const QuadraticMap& f, const CirclePoint& z);

/// Product of f'(f^i(x)) for i < k. Throws PoleEncounter if an iterate is within pole_tol of 0.
double orbit_derivative(const QuadraticMap& f, double x, int k, double pole_tol = 1e-12);

struct FixedPoint {
    std::complex<double> z;
    bool at_infinity = false;
    std::complex<double> multiplier;
};

/// Infinity (multiplier 1/a) and the roots of (a-1) z^2 + b z + a = 0.
std::array<FixedPoint, 3> fixed_points_with_multipliers(const QuadraticMap& f);

/// |sum 1/(1 - mu_i) - 1|; throws NearParabolic if some |mu_i - 1| <= delta.
double fixed_point_formula_residual(const QuadraticMap& f, double delta = 1e-6);

struct SigmaPoint {
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    /// Set for b <= 0, where the normalized chart meets the symmetry locus a(z + 1/z).
    bool near_symmetry_locus = false;
};

/// Symmetric functions of a multiplier triple; asserts the imaginary residue is below 1e-9 (relative).
SigmaPoint symmetrize(const std::array<std::complex<double>, 3>& multipliers);

SigmaPoint sigma_coords(const QuadraticMap& f);
/// Conjugacy-invariant coordinates of any real degree-two map.
SigmaPoint sigma_coords(const RationalMap2& g);

enum class RegionTag { monotonic, unimodal, bimodal_plus_minus_plus, bimodal_minus_plus_minus };

const char* to_string(RegionTag tag);

/// The image f(R^) is the closed arc of the circle from `hi` through infinity to `lo`,
/// i.e. the complement of the open gap (lo, hi) between the critical values.
struct ImageArc {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x) const { return x <= lo || x >= hi; }
    double gap_midpoint() const { return 0.5 * (lo + hi); }
};

struct RegionClass {
    RegionTag tag = RegionTag::monotonic;
    /// -1 or +1 for unimodal maps, 0 otherwise.
    int essential_critical_point = 0;
    ImageArc image;
    /// A critical point lies within the tolerance of an arc endpoint.
    bool boundary_ambiguous = false;
    /// min over critical values and critical points of |v_i - c|.
    double margin = 0.0;
};

RegionClass classify_region(const QuadraticMap& f, double tol = 1e-10);
RegionClass classify_region(const CriticalValuePair& v, double tol = 1e-10);

/// Parameters of x -> 2 mu x (t x + 2) / (mu^2 x^2 + (t x + 2)^2) on [-1, 1].
struct NormalFormParams {
    double mu = 0.0;
    double t = 0.0;
};

/// t - 2 < mu < -|t + 2| (hence mu, t < 0): exactly one critical point in [-1, 1].
bool admissible(const NormalFormParams& p);

double normal_form_eval(const NormalFormParams& p, double x);
double normal_form_derivative(const NormalFormParams& p, double x);
RationalMap2 normal_form_rational(const NormalFormParams& p);

/// The normal form as a self-map of [-1, 1] with its located turning point and moduli coordinates.
struct NormalFormSystem {
    NormalFormParams params;
    double domain_lo = -1.0;
    double domain_hi = 1.0;
    std::vector<double> turning_points;
    SigmaPoint sigma;
    /// Multiplier of the fixed point x = 0 (equals mu).
    double multiplier_at_zero = 0.0;

    double operator()(double x) const { return normal_form_eval(params, x); }
};

/// Throws AdmissibilityError outside the strip.
NormalFormSystem normal_form_to_map(const NormalFormParams& p);

/// Conjugates the normal form into the a(z + 1/z) + b chart: the multiplier-mu fixed point goes to
/// infinity, its other preimage to 0, the trivial critical point to +1.
QuadraticMap normal_form_to_family(const NormalFormParams& p);

}  // namespace rqm
