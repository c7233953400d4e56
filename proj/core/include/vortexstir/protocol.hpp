#pragma once

#include <vector>

#include "vortexstir/types.hpp"

namespace vortexstir {

/// T-periodic radial stirring protocol
///
///   r_eps(t) = r0 + eps * f(t) + g(t; eps),
///
/// where f is a finite Fourier series in the base frequency 2 pi / T
/// (harmonics k = 1, 2, ... ; constant offsets belong in r0) and the
/// optional higher-order term g carries an extra factor eps^2.
struct StirringProtocol {
    double r0 = 0.0;
    double epsilon = 0.0;
    double T = 1.0;
    std::vector<double> f_cos; ///< f_cos[k-1] * cos(2 pi k t / T)
    std::vector<double> f_sin; ///< f_sin[k-1] * sin(2 pi k t / T)
    std::vector<double> g_cos; ///< eps^2 * g_cos[k-1] * cos(2 pi k t / T)
    std::vector<double> g_sin;

    double eval(double t) const;

    /// A pure cosine perturbation, f(t) = cos(2 pi t / T).
    static StirringProtocol cosine(double r0, double epsilon, double T) {
        StirringProtocol pr;
        pr.r0 = r0;
        pr.epsilon = epsilon;
        pr.T = T;
        pr.f_cos = {1.0};
        return pr;
    }
};

/// Radius of the perturbed vortex path at time t (same as pr.eval).
double protocol_eval(const StirringProtocol& pr, double t);

/// Rejects protocols whose radius leaves (delta, R - delta) at any of
/// 1024 samples of one period, or that disagree with the Params about
/// r0. Throws DomainError.
void validate_protocol(const StirringProtocol& pr, const Params& p);

} // namespace vortexstir
