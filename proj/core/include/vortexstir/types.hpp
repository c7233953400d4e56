#pragma once

#include <cmath>
#include <numbers>
#include <optional>

#include "vortexstir/errors.hpp"

namespace vortexstir {

inline constexpr double kPi = std::numbers::pi;

/// Default exclusion radius around the vortex and its image, as a
/// fraction of the domain radius R. Evaluations closer than this are
/// numerically meaningless.
inline constexpr double kExclusionFraction = 1e-9;

/// Default tolerance for deciding that a parameter pair sits on one of
/// the bifurcation curves (relative, in (rho0, phi0) space).
inline constexpr double kCurveTol = 1e-9;

/// Default residual bound for equilibrium roots, in normalized units
/// (lengths rescaled by R).
inline constexpr double kResidualTol = 1e-10;

/// Default |det DX|/theta0^2 threshold below which an equilibrium is
/// treated as degenerate.
inline constexpr double kDetTol = 1e-8;

/// Physical configuration of the stirred disk.
///
/// A point vortex of circulation Gamma travels on the circle of radius
/// r0 with angular velocity theta0 inside the disk of radius R. The
/// dimensionless pair (rho0, phi0) determines the phase portrait of the
/// corotating system up to rescaling.
struct Params {
    double R = 1.0;      ///< domain radius, > 0
    double Gamma = 0.0;  ///< vortex circulation, != 0
    double theta0 = 0.0; ///< angular velocity of the vortex path, != 0
    double r0 = 0.0;     ///< vortex path radius, 0 < r0 < R

    double rho0() const { return r0 / R; }
    double phi0() const { return 2.0 * kPi * R * R * theta0 / Gamma; }
    double c() const { return Gamma / (2.0 * kPi * theta0); }
    /// Right-hand side of the axis critical-point condition,
    /// lambda = c (r0 - R^2/r0).
    double lambda() const { return c() * (r0 - R * R / r0); }
    /// Abscissa of the image vortex, R^2/r0 > R.
    double image_x() const { return R * R / r0; }
    /// Exclusion radius around both singularities.
    double exclusion_radius() const { return kExclusionFraction * R; }

    void validate() const {
        if (!(R > 0.0) || !std::isfinite(R))
            throw DomainError("Params: R must be positive and finite");
        if (Gamma == 0.0 || !std::isfinite(Gamma))
            throw DomainError("Params: Gamma must be nonzero and finite");
        if (theta0 == 0.0 || !std::isfinite(theta0))
            throw DomainError("Params: theta0 must be nonzero and finite");
        if (!(r0 > 0.0) || !(r0 < R))
            throw DomainError("Params: r0 must satisfy 0 < r0 < R");
    }

    /// Build Params from the dimensionless pair, fixing R and theta0.
    static Params from_dimensionless(double rho0, double phi0,
                                     double R = 1.0, double theta0 = 1.0) {
        if (!(rho0 > 0.0) || !(rho0 < 1.0))
            throw DomainError("rho0 must lie in (0,1)");
        if (phi0 == 0.0 || !std::isfinite(phi0))
            throw DomainError("phi0 must be nonzero and finite");
        Params p;
        p.R = R;
        p.theta0 = theta0;
        p.r0 = rho0 * R;
        p.Gamma = 2.0 * kPi * R * R * theta0 / phi0;
        return p;
    }
};

/// A point of the corotating phase plane, optionally tagged with the
/// time at which it was reached (required for nonautonomous flows and
/// frame changes).
struct PhaseState {
    double x = 0.0;
    double y = 0.0;
    std::optional<double> t{};

    double radius2() const { return x * x + y * y; }
};

/// Phase-plane velocity (dx/dt, dy/dt).
struct Velocity {
    double dx = 0.0;
    double dy = 0.0;
};

/// Jacobian of the planar field, row-major. For the autonomous field the
/// trace vanishes identically; on {y=0} the diagonal is exactly zero.
struct Jacobian2 {
    double a11 = 0.0, a12 = 0.0;
    double a21 = 0.0, a22 = 0.0;

    double det() const { return a11 * a22 - a12 * a21; }
    double trace() const { return a11 + a22; }
};

} // namespace vortexstir
