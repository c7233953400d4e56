#pragma once

#include <cstddef>
#include <vector>

#include "vortexstir/dynamics.hpp"
#include "vortexstir/protocol.hpp"
#include "vortexstir/types.hpp"

namespace vortexstir {

/// Velocity of the time-periodic perturbed field at a time-tagged state.
/// Identical to eval_field with the vortex moved to (r_eps(t), 0) and
/// its image to (R^2/r_eps(t), 0); reduces exactly to the autonomous
/// field when eps = 0 and g = 0.
Velocity eval_perturbed_field(const Params& p, const StirringProtocol& pr,
                              const PhaseState& s);

/// Solution of the perturbed system at time m*T starting from s0 at
/// time 0 (the m-fold stroboscopic map).
PhaseState stroboscopic_map(const Params& p, const StirringProtocol& pr,
                            const PhaseState& s0, std::size_t periods,
                            double tol);

/// Trajectory of the perturbed system over [0, periods*T], resampled at
/// n_samples+1 uniformly spaced times (endpoints included).
std::vector<PhaseState> perturbed_orbit(const Params& p,
                                        const StirringProtocol& pr,
                                        const PhaseState& s0,
                                        std::size_t periods, double tol,
                                        std::size_t n_samples);

struct ResonancePair {
    int m = 0;
    int n = 0;
    double ratio = 0.0; ///< m*T/n
};

/// All (m, n) with 1 <= m <= m_max, 1 <= n <= n_max and
/// t_min < m*T/n < t_max strictly, sorted by ratio then (m, n).
std::vector<ResonancePair> resonance_pairs(double t_min, double t_max,
                                           double T, std::size_t m_max,
                                           std::size_t n_max);

struct PeriodicOrbitResult {
    PhaseState fixed_point;       ///< at t = 0, in the corotating frame
    int m = 0;
    int n = 0;
    int winding_about_vortex = 0; ///< corotating frame, vs (r_eps(t), 0)
    int winding_about_vortex_lab = 0; ///< lab frame, frame rotation removed
    int rotation_count = 0;       ///< signed turns around the center over mT
    double residual = 0.0;        ///< |P^m(s) - s|
    bool degenerate = false;      ///< eps = 0 resonant-torus sample
};

struct SearchConfig {
    std::size_t radial = 32;       ///< seed rings
    std::size_t angular = 8;       ///< seeds per ring
    double seed_inner = 0.05;      ///< innermost ring, fraction of the gap
    double seed_outer = 0.95;      ///< outermost ring
    double newton_tol = 1e-10;     ///< |P^m(s) - s| target, units of R
    std::size_t max_iter = 25;
    double fd_step = 1e-6;         ///< finite-difference step, units of R
    double dedup_radius = 1e-6;    ///< units of R
    double integ_rel_tol = 1e-12;
    double integ_abs_tol = 0.0;    ///< 0: integ_rel_tol * R
    std::size_t verify_samples = 1024; ///< trajectory resampling for winding checks
    std::size_t threads = 0;       ///< 0: hardware, capped by VORTEX_STIR_THREADS
};

/// Locate fixed points of the m-fold stroboscopic map inside the period
/// annulus for the given resonance pair: multi-start Newton with a
/// finite-difference Jacobian, deduplicated by distance, then verified
/// by re-integration (rotation count n around the center, winding number
/// about the moving vortex in both frames). With eps = 0 the map is
/// degenerate along the resonant torus; in that case the torus is
/// located by a 1D search on the period function and sampled directly.
std::vector<PeriodicOrbitResult>
find_periodic_orbits(const Params& p, const StirringProtocol& pr,
                     const ResonancePair& pair, const SearchConfig& cfg = {});

} // namespace vortexstir
