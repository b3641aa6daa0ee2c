#pragma once

#include <array>
#include <complex>
#include <vector>

namespace rqm {

/// A point [p : q] of the real projective line; z = p/q, infinity is [1 : 0].
///
/// Stored normalized: p^2 + q^2 = 1 and the first nonzero coordinate is
/// positive, so equal points have equal representatives up to rounding.
class CirclePoint {
public:
    CirclePoint() : p_(0.0), q_(1.0) {}
    CirclePoint(double p, double q);

    static CirclePoint real(double x) { return {x, 1.0}; }
    static CirclePoint infinity() { return {1.0, 0.0}; }

    double p() const { return p_; }
    double q() const { return q_; }

    bool is_infinity(double tol = 1e-15) const;
    /// Affine value p/q; +inf for the point at infinity.
    double value() const;

    /// Chordal comparison |p1 q2 - p2 q1|, zero iff same point.
    double distance(const CirclePoint& other) const;
    bool same(const CirclePoint& other, double tol = 1e-12) const { return distance(other) <= tol; }

private:
    double p_;
    double q_;
};

/// Real Möbius transformation acting linearly on homogeneous pairs.
class MobiusFrame {
public:
    /// Identity.
    MobiusFrame() : m_{{{1.0, 0.0}, {0.0, 1.0}}} {}
    /// Rows of [[alpha, beta], [gamma, delta]] for z -> (alpha z + beta)/(gamma z + delta).
    MobiusFrame(double alpha, double beta, double gamma, double delta);

    double operator()(int r, int c) const { return m_[r][c]; }
    double determinant() const { return m_[0][0] * m_[1][1] - m_[0][1] * m_[1][0]; }
    bool orientation_preserving() const { return determinant() > 0.0; }

    CirclePoint apply(const CirclePoint& z) const;
    double apply(double x) const { return apply(CirclePoint::real(x)).value(); }
    std::array<std::complex<double>, 2> apply(const std::array<std::complex<double>, 2>& v) const;

    /// (this ∘ other)(z) = this(other(z)).
    MobiusFrame compose(const MobiusFrame& other) const;
    /// Adjugate inverse (equal to the true inverse up to scalar).
    MobiusFrame inverse() const;

    /// Derivative of the affine action at x (finite, not a pole).
    double derivative(double x) const;

    /// True when both frames act identically on the circle.
    bool same_action(const MobiusFrame& other, double tol = 1e-12) const;

private:
    std::array<std::array<double, 2>, 2> m_;
};

/// The unique frame sending (z1, z2, z3) to (1, 0, infinity).
/// Throws CoincidentPoints when two of the points agree.
MobiusFrame mobius_frame(const CirclePoint& z1, const CirclePoint& z2, const CirclePoint& z3);

/// A fixed point in homogeneous complex coordinates with its multiplier.
struct HomogeneousFixedPoint {
    std::array<std::complex<double>, 2> point;
    std::complex<double> multiplier;
};

/// Degree-two real rational map as a pair of binary quadratic forms:
///   P(x,y) = p0 x^2 + p1 x y + p2 y^2,   Q(x,y) = q0 x^2 + q1 x y + q2 y^2,
/// acting by [x : y] -> [P : Q].
struct RationalMap2 {
    std::array<double, 3> P{};
    std::array<double, 3> Q{};

    CirclePoint apply(const CirclePoint& z) const;
    /// Affine evaluation P(x,1)/Q(x,1).
    double operator()(double x) const;
    /// Affine derivative at x.
    double derivative(double x) const;

    /// beta ∘ this ∘ beta^{-1}.
    RationalMap2 conjugate(const MobiusFrame& beta) const;

    /// Resultant of P and Q; zero iff the degree drops.
    double resultant() const;

    /// Three fixed points counted with multiplicity, multipliers chart-free.
    std::array<HomogeneousFixedPoint, 3> fixed_points() const;

    /// Critical points as homogeneous roots of the Wronskian P_x Q_y - P_y Q_x,
    /// real when the discriminant is nonnegative.
    std::array<std::array<std::complex<double>, 2>, 2> critical_points() const;

    /// Other preimages of w besides the given one (real arithmetic, may be complex).
    std::array<std::array<std::complex<double>, 2>, 2> preimages(const CirclePoint& w) const;
};

/// Roots of the binary cubic c0 x^3 + c1 x^2 y + c2 x y^2 + c3 y^3 as homogeneous pairs.
std::array<std::array<std::complex<double>, 2>, 3> binary_cubic_roots(const std::array<double, 4>& c);

/// Roots of the binary quadratic c0 x^2 + c1 x y + c2 y^2 as homogeneous pairs.
std::array<std::array<std::complex<double>, 2>, 2> binary_quadratic_roots(const std::array<double, 3>& c);

}  // namespace rqm
