#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

#include "vortexstir/errors.hpp"

namespace vortexstir {

using Vec2 = std::array<double, 2>;

struct IntegrationOptions {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;       ///< 0: rel_tol * length_scale
    double length_scale = 1.0;  ///< typical |y|, used for abs_tol default
    double initial_step = 0.0;  ///< 0: automatic
    double max_step = 0.0;      ///< 0: |t_end - t0|
    std::uint64_t max_steps = 20'000'000;

    double effective_abs_tol() const {
        return abs_tol > 0.0 ? abs_tol : rel_tol * length_scale;
    }
};

/// One accepted step together with its order-4 interpolant. eval(t) is
/// valid for t between t0 and t0+h.
struct DenseStep {
    double t0 = 0.0, h = 0.0;
    Vec2 y0{}, y1{};
    std::array<Vec2, 5> rcont{};

    double t1() const { return t0 + h; }

    Vec2 eval(double t) const {
        const double s = (t - t0) / h;
        const double s1 = 1.0 - s;
        Vec2 out;
        for (int i = 0; i < 2; ++i)
            out[i] = rcont[0][i] +
                     s * (rcont[1][i] +
                          s1 * (rcont[2][i] +
                                s * (rcont[3][i] + s1 * rcont[4][i])));
        return out;
    }
};

enum class StepControl { kContinue, kHalt };

struct IntegrationResult {
    double t = 0.0;
    Vec2 y{};
    bool halted = false;
    std::uint64_t n_accepted = 0;
    std::uint64_t n_rejected = 0;
};

// Dormand-Prince 5(4) coefficients.
namespace dopri5 {
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                        a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                        a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113,
                        a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                        a76 = 11.0 / 84;
// embedded 4th-order error weights (b - b*)
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                        e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;
// dense-output weights
inline constexpr double d1 = -12715105075.0 / 11282082432.0,
                        d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0,
                        d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0,
                        d7 = 69997945.0 / 29380423.0;
} // namespace dopri5

/// Adaptive Dormand-Prince 5(4) integration of dy/dt = rhs(t, y) from
/// (t0, y0) to t_end (either time direction). After each accepted step
/// `on_step(const DenseStep&)` may halt the run. Throws StepFailure when
/// the controller underflows the step size or exhausts max_steps.
template <class Rhs, class StepCb>
IntegrationResult integrate_dopri5(Rhs&& rhs, double t0, Vec2 y0,
                                   double t_end,
                                   const IntegrationOptions& opt,
                                   StepCb&& on_step) {
    using namespace dopri5;
    IntegrationResult res;
    res.t = t0;
    res.y = y0;
    if (t_end == t0) return res;

    const double dir = (t_end > t0) ? 1.0 : -1.0;
    const double atol = opt.effective_abs_tol();
    const double rtol = opt.rel_tol;
    const double span = std::abs(t_end - t0);
    const double hmax = (opt.max_step > 0.0) ? opt.max_step : span;
    const double eps = std::numeric_limits<double>::epsilon();

    auto err_norm = [&](const Vec2& e, const Vec2& ya, const Vec2& yb) {
        double s = 0.0;
        for (int i = 0; i < 2; ++i) {
            const double sc =
                atol + rtol * std::max(std::abs(ya[i]), std::abs(yb[i]));
            const double q = e[i] / sc;
            s += q * q;
        }
        return std::sqrt(0.5 * s);
    };

    Vec2 k1 = rhs(t0, y0);

    double h = opt.initial_step;
    if (h <= 0.0) {
        // standard starting-step heuristic
        double d0 = 0.0, d1n = 0.0;
        for (int i = 0; i < 2; ++i) {
            const double sc = atol + rtol * std::abs(y0[i]);
            d0 += (y0[i] / sc) * (y0[i] / sc);
            d1n += (k1[i] / sc) * (k1[i] / sc);
        }
        d0 = std::sqrt(0.5 * d0);
        d1n = std::sqrt(0.5 * d1n);
        double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
        h0 = std::min(h0, hmax);
        Vec2 y1;
        for (int i = 0; i < 2; ++i) y1[i] = y0[i] + dir * h0 * k1[i];
        const Vec2 f1 = rhs(t0 + dir * h0, y1);
        double d2 = 0.0;
        for (int i = 0; i < 2; ++i) {
            const double sc = atol + rtol * std::abs(y0[i]);
            const double q = (f1[i] - k1[i]) / sc;
            d2 += q * q;
        }
        d2 = std::sqrt(0.5 * d2) / h0;
        const double dm = std::max(d1n, d2);
        const double h1 =
            (dm <= 1e-15) ? std::max(1e-6, h0 * 1e-3)
                          : std::pow(0.01 / dm, 0.2);
        h = std::min({100.0 * h0, h1, hmax});
    }
    h = std::min(h, hmax);

    bool last_rejected = false;
    double t = t0;
    Vec2 y = y0;

    while (res.n_accepted + res.n_rejected < opt.max_steps) {
        if (h < 16.0 * eps * std::max(std::abs(t), 1.0))
            throw StepFailure("integrate_dopri5: step size underflow at t=" +
                              std::to_string(t));
        // do not step past t_end
        bool final_step = false;
        if (h >= std::abs(t_end - t)) {
            h = std::abs(t_end - t);
            final_step = true;
        }
        const double hs = dir * h;

        Vec2 y2t, y3t, y4t, y5t, y6t, y7t;
        for (int i = 0; i < 2; ++i) y2t[i] = y[i] + hs * a21 * k1[i];
        const Vec2 k2 = rhs(t + c2 * hs, y2t);
        for (int i = 0; i < 2; ++i)
            y3t[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
        const Vec2 k3 = rhs(t + c3 * hs, y3t);
        for (int i = 0; i < 2; ++i)
            y4t[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        const Vec2 k4 = rhs(t + c4 * hs, y4t);
        for (int i = 0; i < 2; ++i)
            y5t[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] +
                                  a54 * k4[i]);
        const Vec2 k5 = rhs(t + c5 * hs, y5t);
        for (int i = 0; i < 2; ++i)
            y6t[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                                  a64 * k4[i] + a65 * k5[i]);
        const Vec2 k6 = rhs(t + hs, y6t);
        for (int i = 0; i < 2; ++i)
            y7t[i] = y[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] +
                                  a75 * k5[i] + a76 * k6[i]);
        const Vec2 k7 = rhs(t + hs, y7t); // FSAL: y7t is the 5th-order result

        Vec2 errv;
        for (int i = 0; i < 2; ++i)
            errv[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                            e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double err = err_norm(errv, y, y7t);

        if (err <= 1.0) {
            DenseStep ds;
            ds.t0 = t;
            ds.h = hs;
            ds.y0 = y;
            ds.y1 = y7t;
            for (int i = 0; i < 2; ++i) {
                const double ydiff = y7t[i] - y[i];
                const double bspl = hs * k1[i] - ydiff;
                ds.rcont[0][i] = y[i];
                ds.rcont[1][i] = ydiff;
                ds.rcont[2][i] = bspl;
                ds.rcont[3][i] = ydiff - hs * k7[i] - bspl;
                ds.rcont[4][i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] +
                                       d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
            }
            t += hs;
            y = y7t;
            k1 = k7;
            ++res.n_accepted;

            res.t = t;
            res.y = y;
            if (on_step(static_cast<const DenseStep&>(ds)) ==
                StepControl::kHalt) {
                res.halted = true;
                return res;
            }
            if (final_step) {
                res.t = t_end;
                return res;
            }
            const double fac = std::clamp(0.9 * std::pow(err, -0.2), 0.2,
                                          last_rejected ? 1.0 : 10.0);
            h = std::min(h * fac, hmax);
            last_rejected = false;
        } else {
            ++res.n_rejected;
            const double fac =
                std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
            h *= fac;
            last_rejected = true;
        }
    }
    throw StepFailure("integrate_dopri5: exceeded max_steps");
}

} // namespace vortexstir
