#pragma once

#include <cmath>
#include <limits>
#include <utility>

#include "vortexstir/errors.hpp"

namespace vortexstir {

/// Brent's method on a bracketing interval [a,b] with f(a)*f(b) <= 0.
/// Returns the root to within xtol + machine precision of the abscissa.
/// Pass the endpoint values if already known to save two evaluations.
template <class F>
double brent_root(F&& f, double a, double b, double fa, double fb,
                  double xtol = 0.0) {
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0)
        throw DomainError("brent_root: interval does not bracket a root");

    double c = a, fc = fa;
    double d = b - a, e = d;
    const double eps = std::numeric_limits<double>::epsilon();

    for (int iter = 0; iter < 200; ++iter) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * xtol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            // inverse quadratic / secant step
            const double s = fb / fa;
            double pp, q;
            if (a == c) {
                pp = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc, r = fb / fc;
                pp = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (pp > 0.0) q = -q;
            pp = std::abs(pp);
            if (2.0 * pp < std::min(3.0 * xm * q - std::abs(tol1 * q),
                                    std::abs(e * q))) {
                e = d;
                d = pp / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    return b;
}

template <class F>
double brent_root(F&& f, double a, double b, double xtol = 0.0) {
    const double fa = f(a), fb = f(b);
    return brent_root(std::forward<F>(f), a, b, fa, fb, xtol);
}

} // namespace vortexstir
