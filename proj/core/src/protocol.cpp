#include "vortexstir/protocol.hpp"

#include <cmath>

namespace vortexstir {

namespace {

double fourier(const std::vector<double>& cs, const std::vector<double>& sn,
               double omega, double t) {
    double acc = 0.0;
    for (std::size_t k = 0; k < cs.size(); ++k)
        acc += cs[k] * std::cos(omega * static_cast<double>(k + 1) * t);
    for (std::size_t k = 0; k < sn.size(); ++k)
        acc += sn[k] * std::sin(omega * static_cast<double>(k + 1) * t);
    return acc;
}

} // namespace

double StirringProtocol::eval(double t) const {
    const double omega = 2.0 * kPi / T;
    double r = r0;
    if (epsilon != 0.0) {
        r += epsilon * fourier(f_cos, f_sin, omega, t);
        if (!g_cos.empty() || !g_sin.empty())
            r += epsilon * epsilon * fourier(g_cos, g_sin, omega, t);
    }
    return r;
}

double protocol_eval(const StirringProtocol& pr, double t) {
    if (!(pr.T > 0.0))
        throw DomainError("protocol_eval: period T must be positive");
    return pr.eval(t);
}

void validate_protocol(const StirringProtocol& pr, const Params& p) {
    p.validate();
    if (!(pr.T > 0.0) || !std::isfinite(pr.T))
        throw DomainError("protocol: period T must be positive and finite");
    if (!std::isfinite(pr.epsilon))
        throw DomainError("protocol: epsilon must be finite");
    if (pr.r0 != p.r0)
        throw DomainError("protocol: r0 disagrees with Params::r0");
    const double delta = p.exclusion_radius();
    for (int i = 0; i < 1024; ++i) {
        const double t = pr.T * static_cast<double>(i) / 1024.0;
        const double r = pr.eval(t);
        if (!(r > delta) || !(r < p.R - delta))
            throw DomainError("protocol: r_eps(t) leaves (delta, R - delta)");
    }
}

} // namespace vortexstir
