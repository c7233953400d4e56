#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "vortexstir/equilibria.hpp"
#include "vortexstir/integrate.hpp"
#include "vortexstir/types.hpp"

namespace vortexstir {

struct OrbitReport {
    double drift_abs = 0.0;     ///< max |Psi(sample) - Psi(start)|
    double drift_bound = 0.0;   ///< declared bound, 100 * tol * energy scale
    double energy_scale = 0.0;
    double max_radius = 0.0;    ///< max sqrt(x^2+y^2) over samples
    std::uint64_t n_accepted = 0;
    std::uint64_t n_rejected = 0;
};

/// A numerically integrated trajectory of the autonomous corotating
/// system, sampled at the accepted steps, with dense interpolants kept
/// for resampling and event work.
struct Orbit {
    std::vector<PhaseState> samples;
    Params params;
    double energy0 = 0.0;
    double tolerance = 0.0;
    OrbitReport report;
    std::vector<DenseStep> dense;

    /// n+1 states uniformly spaced in time across the stored span.
    std::vector<PhaseState> resample(std::size_t n) const;
};

struct OrbitOptions {
    double abs_tol = 0.0; ///< 0: tol * R
    std::uint64_t max_steps = 20'000'000;
    bool keep_dense = true;
};

/// Integrate the corotating flow from s0 for t_end time units.
/// Throws SingularityProximity if the trajectory enters an exclusion
/// ball, StepFailure if the tolerance is unreachable.
Orbit integrate_orbit(const Params& p, const PhaseState& s0, double t_end,
                      double tol, const OrbitOptions& opt = {});

struct PeriodOptions {
    double abs_tol = 0.0;        ///< 0: tol * R
    double cap_factor = 50.0;    ///< give up after cap_factor * T0
    double t_cap = 0.0;          ///< explicit cap; 0: cap_factor * T0
    double saddle_radius_frac = 1e-6; ///< NotClosed inside this * R of a saddle
    /// Optional oriented section normal; default: unit velocity at s0.
    std::optional<Velocity> section_normal{};
};

/// Geometry around the center used by the period machinery: the center
/// itself, every saddle (interior and boundary), and the end of the
/// section segment from the center in the +x direction (the interior
/// saddle if present, otherwise the vortex).
struct CenterGeometry {
    PhaseState center;
    std::vector<PhaseState> saddles;
    std::optional<double> interior_saddle_x;
    double section_end_x = 0.0;
};

/// Throws NotACenter when the parameters admit no center.
CenterGeometry center_geometry(const Params& p);

/// First-return time of the closed streamline through s0 to the local
/// transverse section at s0, refined on the dense interpolant. The
/// return is gated on a full revolution around the center so that
/// streamlines encircling the vortex instead of the center report
/// NotClosed.
double orbit_period(const Params& p, const PhaseState& s0, double tol,
                    const PeriodOptions& opt = {});

/// Period of the linearization at the center with abscissa center_x:
/// T0 = 2 pi / (|theta0| sqrt(-nu (2 + nu))),
/// nu(x) = (x^2 - R^2) / ((x - r0)(x - R^2/r0)).
/// At a center nu(2+nu) < 0, hence the negated radicand. Throws
/// NotACenter when nu (2 + nu) >= 0.
double linearized_period(const Params& p, double center_x);

struct PeriodSample {
    double x = 0.0;      ///< abscissa of the initial condition on the section
    double period = 0.0;
    double energy = 0.0; ///< stream-function level of the orbit
};

struct PeriodScan {
    std::vector<PeriodSample> section_points;
    PhaseState center;
};

struct ScanOptions {
    double tol = 1e-10;
    double first_fraction = 1e-3;  ///< first sample, fraction of the gap
    double last_fraction = 0.999;  ///< outermost attempted fraction
    double target_period_factor = 5.5; ///< refine toward the separatrix until period > this * T0
    PeriodOptions period{};
};

/// Sample the period function along the horizontal ray from the center
/// toward the bounding separatrix. Stops at the last closed orbit found
/// before NotClosed; when the boundary is hit early, bisects toward it
/// within the n_samples budget until the period window is deep enough.
PeriodScan period_scan(const Params& p, std::size_t n_samples,
                       const ScanOptions& opt = {});

struct WindingOptions {
    double closure_rel_tol = 1e-6; ///< relative to the curve diameter
    double ambiguous_fraction = 0.25;
};

/// Winding number of a closed sampled curve around a fixed reference
/// point: total signed swept angle / 2 pi, rounded. Throws NotClosed if
/// the endpoints do not match, AmbiguousWinding if the accumulated
/// fractional part is too large to round safely.
int winding_number(std::span<const PhaseState> closed_curve,
                   const PhaseState& reference,
                   const WindingOptions& opt = {});

/// Same against a moving reference evaluated at each sample time; all
/// samples must carry time tags.
int winding_number(std::span<const PhaseState> closed_curve,
                   const std::function<PhaseState(double)>& reference,
                   const WindingOptions& opt = {});

} // namespace vortexstir
