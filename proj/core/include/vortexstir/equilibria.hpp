#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "vortexstir/types.hpp"

namespace vortexstir {

enum class EquilibriumKind {
    Vortex,           // the stirring vortex itself (a singularity, not a critical point)
    Center,           // det DX > 0
    HyperbolicSaddle, // det DX < 0
    DegenerateSaddle, // det DX = 0 at (+-R, 0)
    Cusp              // det DX = 0 at a double root in the interior
};

std::string_view kind_name(EquilibriumKind k);

struct Equilibrium {
    PhaseState location;
    EquilibriumKind kind = EquilibriumKind::Vortex;
    std::optional<double> jacobian_det{}; // absent for Vortex
};

enum class Region { R1, R2, R3, R4, R5, C1, C2, C3 };

std::string_view region_name(Region r);

/// Classification of a parameter pair against the bifurcation set. The
/// signed margin is positive when the pair sits safely inside the
/// assigned region; for curve labels it is the (tiny) signed value of
/// the defining expression. For phi0 > 0 the margin is measured in
/// rho0; for phi0 < 0 along the phi0 axis relative to the fold curve.
struct RegionLabel {
    Region label = Region::R1;
    double boundary_distance = 0.0;
};

/// Sign function of the saddle-node fold for counter-rotating stirring:
/// f(rho0, phi0) = 27 rho0^2 (rho0^2 - 1)
///   + phi0 (2 - 3 rho0^2 - 3 rho0^4 + 2 rho0^6 - 2 (1 - rho0^2 + rho0^4)^{3/2}).
double bifurcation_f(double rho0, double phi0);

/// For phi0 < 0 the fold curve is the graph phi0 = fold_phi0(rho0)
/// of the unique root of f(rho0, .); f is affine in phi0.
double fold_phi0(double rho0);

RegionLabel classify_parameters(double rho0, double phi0,
                                double tol_curve = kCurveTol);

struct EquilibriaOptions {
    double tol_residual = kResidualTol; // on P(x)-lambda, normalized units
    double tol_det = kDetTol;           // on |det|/theta0^2
};

/// All critical points of the corotating field on the axis {y=0} inside
/// the closed disk, classified by the sign of the Jacobian determinant.
/// Sorted by x. The vortex (r0, 0) is never listed here. Empty in the
/// regions where the disk carries a global vortex.
std::vector<Equilibrium> axis_equilibria(const Params& p,
                                         const EquilibriaOptions& opt = {});

/// The pair of hyperbolic saddles on the boundary circle, present
/// exactly when (rho0, phi0) classifies as R2. first has y > 0.
std::optional<std::pair<Equilibrium, Equilibrium>>
boundary_saddles(const Params& p, const EquilibriaOptions& opt = {});

/// Stationary points of the axis cubic P(x) = x (x-r0)(x-R^2/r0) and
/// the abscissa of the cusp point born at the saddle-node fold.
struct CubicLandmarks {
    double x_local_max = 0.0; // in (0, r0)
    double x_local_min = 0.0; // in (R, R^2/r0)
    double x_cusp = 0.0;      // equals x_local_max
};

CubicLandmarks cubic_landmarks(const Params& p);

/// The two angular-velocity thresholds (for Gamma > 0, increasing
/// theta0) at which a degenerate saddle enters at (-R,0) and at which
/// the two boundary saddles merge at (R,0). Their product is
/// (Gamma / 2 pi R^2)^2.
struct Theta0Thresholds {
    double first = 0.0;  // (Gamma/2 pi R^2) (R-r0)/(R+r0)
    double second = 0.0; // (Gamma/2 pi R^2) (R+r0)/(R-r0)
};

Theta0Thresholds bifurcation_thresholds(const Params& p);

} // namespace vortexstir
