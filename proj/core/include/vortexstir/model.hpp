#pragma once

#include <span>
#include <vector>

#include "vortexstir/types.hpp"

namespace vortexstir {

// The corotating stream function is
//
//   Psi(x,y) = -theta0/2 (x^2+y^2)
//              + c theta0 ln sqrt( ((x-rv)^2+y^2) / ((x-xi)^2+y^2) )
//
// with rv the instantaneous vortex abscissa, xi = R^2/rv its image and
// c = Gamma/(2 pi theta0). The flow is (dx,dy) = (dPsi/dy, -dPsi/dx).
// The *_at helpers below evaluate field, stream function and Jacobian
// for an arbitrary vortex abscissa so that the time-periodic stirring
// protocol can reuse them with rv = r_eps(t).

namespace detail {

struct FieldTerms {
    double a, b;   // x - rv, x - xi
    double A, B;   // a^2 + y^2, b^2 + y^2
};

inline FieldTerms field_terms(double x, double y, double rv, double xi) {
    const double a = x - rv;
    const double b = x - xi;
    return {a, b, a * a + y * y, b * b + y * y};
}

inline Velocity field_at(double x, double y, double rv, double xi,
                         double c, double theta0) {
    const auto [a, b, A, B] = field_terms(x, y, rv, xi);
    Velocity v;
    v.dx = -theta0 * y + c * theta0 * y * (1.0 / A - 1.0 / B);
    v.dy = theta0 * x - c * theta0 * (a / A - b / B);
    return v;
}

inline double hamiltonian_at(double x, double y, double rv, double xi,
                             double c, double theta0) {
    const auto [a, b, A, B] = field_terms(x, y, rv, xi);
    return -0.5 * theta0 * (x * x + y * y) + 0.5 * c * theta0 * std::log(A / B);
}

inline Jacobian2 jacobian_at(double x, double y, double rv, double xi,
                             double c, double theta0) {
    const auto [a, b, A, B] = field_terms(x, y, rv, xi);
    const double iA = 1.0 / A, iB = 1.0 / B;
    const double iA2 = iA * iA, iB2 = iB * iB;
    const double y2 = y * y;
    Jacobian2 J;
    J.a11 = -2.0 * c * theta0 * y * (a * iA2 - b * iB2);
    J.a12 = theta0 * (-1.0 + c * ((iA - iB) - 2.0 * y2 * (iA2 - iB2)));
    J.a21 = theta0 * (1.0 - c * ((y2 - a * a) * iA2 - (y2 - b * b) * iB2));
    J.a22 = -J.a11;
    return J;
}

/// Throws SingularityProximity if (x,y) lies within radius delta of
/// either (rv,0) or (xi,0).
void require_not_singular(double x, double y, double rv, double xi,
                          double delta);

} // namespace detail

/// Corotating-frame velocity at s. Exact symplectic gradient of the
/// stream function; the disk boundary x^2+y^2 = R^2 is invariant.
Velocity eval_field(const Params& p, const PhaseState& s);

/// Corotating-frame stream function (the conserved Hamiltonian of the
/// autonomous system).
double eval_hamiltonian(const Params& p, const PhaseState& s);

/// Analytic Jacobian of eval_field. Trace-free; on the axis {y=0} it is
/// antidiagonal.
Jacobian2 eval_jacobian(const Params& p, const PhaseState& s);

/// Position of the image vortex, (R^2/r0, 0); always outside the disk.
PhaseState image_point(const Params& p);

/// Rotate each time-tagged corotating state by theta0*t back to the lab
/// frame. Throws MissingTimeTag on untagged states.
std::vector<PhaseState> to_lab_frame(std::span<const PhaseState> orbit,
                                     const Params& p);

} // namespace vortexstir
