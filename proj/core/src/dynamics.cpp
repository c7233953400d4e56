#include "vortexstir/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "vortexstir/model.hpp"
#include "vortexstir/root_find.hpp"

namespace vortexstir {

std::vector<PhaseState> Orbit::resample(std::size_t n) const {
    if (dense.empty() || n == 0) return samples;
    const double ta = dense.front().t0;
    const double tb = dense.back().t1();
    std::vector<PhaseState> out;
    out.reserve(n + 1);
    std::size_t seg = 0;
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = ta + (tb - ta) * static_cast<double>(i) /
                                  static_cast<double>(n);
        const bool fwd = tb >= ta;
        while (seg + 1 < dense.size() &&
               (fwd ? dense[seg].t1() < t : dense[seg].t1() > t))
            ++seg;
        const Vec2 y = dense[seg].eval(t);
        out.push_back({y[0], y[1], t});
    }
    return out;
}

namespace {

struct FieldRhs {
    double rv, xi, c, theta0;

    explicit FieldRhs(const Params& p)
        : rv(p.r0), xi(p.image_x()), c(p.c()), theta0(p.theta0) {}

    Vec2 operator()(double, const Vec2& y) const {
        const Velocity v = detail::field_at(y[0], y[1], rv, xi, c, theta0);
        return {v.dx, v.dy};
    }
};

// Proximity monitor shared by the orbit drivers: singularities, disk
// exit bookkeeping and (optionally) saddle balls.
struct Monitor {
    double rv, xi, delta2;
    std::vector<PhaseState> saddles;
    double saddle_r2 = 0.0;

    enum class Hit { None, Singular, Saddle };

    Hit check(const Vec2& y) const {
        const double dv = (y[0] - rv) * (y[0] - rv) + y[1] * y[1];
        const double di = (y[0] - xi) * (y[0] - xi) + y[1] * y[1];
        if (dv < delta2 || di < delta2) return Hit::Singular;
        for (const PhaseState& s : saddles) {
            const double d2 = (y[0] - s.x) * (y[0] - s.x) +
                              (y[1] - s.y) * (y[1] - s.y);
            if (d2 < saddle_r2) return Hit::Saddle;
        }
        return Hit::None;
    }

    Hit check_step(const DenseStep& ds) const {
        Hit h = check(ds.y1);
        if (h != Hit::None) return h;
        return check(ds.eval(ds.t0 + 0.5 * ds.h));
    }
};

Monitor make_monitor(const Params& p) {
    Monitor m;
    m.rv = p.r0;
    m.xi = p.image_x();
    const double d = p.exclusion_radius();
    m.delta2 = d * d;
    return m;
}

} // namespace

Orbit integrate_orbit(const Params& p, const PhaseState& s0, double t_end,
                      double tol, const OrbitOptions& opt) {
    p.validate();
    if (s0.radius2() > p.R * p.R * (1.0 + 1e-9))
        throw DomainError("integrate_orbit: initial state outside the disk");
    const Monitor mon = make_monitor(p);
    if (mon.check({s0.x, s0.y}) == Monitor::Hit::Singular)
        throw SingularityProximity("integrate_orbit: start inside exclusion ball");

    Orbit orb;
    orb.params = p;
    orb.tolerance = tol;
    orb.energy0 = detail::hamiltonian_at(s0.x, s0.y, p.r0, p.image_x(),
                                         p.c(), p.theta0);
    const double t0 = s0.t.value_or(0.0);
    orb.samples.push_back({s0.x, s0.y, t0});

    OrbitReport rep;
    // |Psi| can vanish on a level set; the rotation term theta0 R^2 / 2
    // sets the natural magnitude of the stream function over the disk.
    rep.energy_scale = std::max(std::abs(orb.energy0),
                                0.5 * std::abs(p.theta0) * p.R * p.R);
    rep.drift_bound = 100.0 * tol * rep.energy_scale;
    rep.max_radius = std::sqrt(s0.radius2());

    // Energy drift accumulates coherently on circulating orbits and
    // stays linear in the per-step tolerance; the 1/20 safety factor
    // keeps the worst observed orbits a factor ~3 under the declared
    // 100 * tol drift bound.
    IntegrationOptions io;
    io.rel_tol = 0.05 * tol;
    io.abs_tol = opt.abs_tol > 0.0 ? opt.abs_tol : 0.05 * tol * p.R;
    io.length_scale = p.R;
    io.max_steps = opt.max_steps;

    bool singular = false;
    const FieldRhs rhs(p);
    const IntegrationResult res = integrate_dopri5(
        rhs, t0, {s0.x, s0.y}, t0 + t_end, io, [&](const DenseStep& ds) {
            if (mon.check_step(ds) == Monitor::Hit::Singular) {
                singular = true;
                return StepControl::kHalt;
            }
            orb.samples.push_back({ds.y1[0], ds.y1[1], ds.t1()});
            if (opt.keep_dense) orb.dense.push_back(ds);
            const double e = detail::hamiltonian_at(
                ds.y1[0], ds.y1[1], p.r0, p.image_x(), p.c(), p.theta0);
            rep.drift_abs =
                std::max(rep.drift_abs, std::abs(e - orb.energy0));
            rep.max_radius =
                std::max(rep.max_radius, std::sqrt(ds.y1[0] * ds.y1[0] +
                                                   ds.y1[1] * ds.y1[1]));
            return StepControl::kContinue;
        });
    if (singular)
        throw SingularityProximity(
            "integrate_orbit: trajectory entered an exclusion ball");

    rep.n_accepted = res.n_accepted;
    rep.n_rejected = res.n_rejected;
    orb.report = rep;
    return orb;
}

double linearized_period(const Params& p, double center_x) {
    p.validate();
    const double x = center_x / p.R;
    const double rho0 = p.rho0();
    const double nu = (x * x - 1.0) / ((x - rho0) * (x - 1.0 / rho0));
    const double radicand = -nu * (2.0 + nu);
    if (!(radicand > 0.0))
        throw NotACenter("linearized_period: nu(2+nu) >= 0 at x = " +
                         std::to_string(center_x));
    return 2.0 * kPi / (std::abs(p.theta0) * std::sqrt(radicand));
}

CenterGeometry center_geometry(const Params& p) {
    CenterGeometry info;
    bool found = false;
    for (const Equilibrium& eq : axis_equilibria(p)) {
        if (eq.kind == EquilibriumKind::Center && !found) {
            info.center = eq.location;
            found = true;
        } else if (eq.kind == EquilibriumKind::HyperbolicSaddle) {
            info.saddles.push_back(eq.location);
            info.interior_saddle_x = eq.location.x;
        }
    }
    if (const auto bs = boundary_saddles(p)) {
        info.saddles.push_back(bs->first.location);
        info.saddles.push_back(bs->second.location);
    }
    if (!found)
        throw NotACenter("parameters admit no center equilibrium");
    info.section_end_x = p.r0;
    if (info.interior_saddle_x && *info.interior_saddle_x > info.center.x)
        info.section_end_x = std::min(info.section_end_x,
                                      *info.interior_saddle_x);
    return info;
}

double orbit_period(const Params& p, const PhaseState& s0, double tol,
                    const PeriodOptions& opt) {
    p.validate();
    const CenterGeometry info = center_geometry(p);
    const double cx = info.center.x, cy = info.center.y;

    double t_cap = opt.t_cap;
    if (t_cap <= 0.0)
        t_cap = opt.cap_factor * linearized_period(p, cx);

    Monitor mon = make_monitor(p);
    mon.saddles = info.saddles;
    const double sr = opt.saddle_radius_frac * p.R;
    mon.saddle_r2 = sr * sr;

    const Vec2 y0{s0.x, s0.y};
    if (mon.check(y0) != Monitor::Hit::None)
        throw NotClosed("orbit_period: initial state inside an exclusion "
                        "or saddle ball");

    const FieldRhs rhs(p);
    const Vec2 v0 = rhs(0.0, y0);
    const double v0n = std::hypot(v0[0], v0[1]);
    if (v0n < 1e-14 * std::abs(p.theta0) * p.R)
        throw DomainError("orbit_period: initial state is an equilibrium");

    double nx, ny; // oriented section normal
    if (opt.section_normal) {
        const double m = std::hypot(opt.section_normal->dx,
                                    opt.section_normal->dy);
        nx = opt.section_normal->dx / m;
        ny = opt.section_normal->dy / m;
        if (nx * v0[0] + ny * v0[1] < 0.0) { nx = -nx; ny = -ny; }
    } else {
        nx = v0[0] / v0n;
        ny = v0[1] / v0n;
    }
    auto section_g = [&](const Vec2& y) {
        return nx * (y[0] - s0.x) + ny * (y[1] - s0.y);
    };

    IntegrationOptions io;
    io.rel_tol = tol;
    io.abs_tol = opt.abs_tol > 0.0 ? opt.abs_tol : tol * p.R;
    io.length_scale = p.R;

    // Accumulated angle around the center; the first-return event is
    // accepted only after a full revolution. A second accumulator around
    // the vortex catches streamlines that encircle the vortex instead of
    // the center (outside the period annulus) without waiting for the
    // time cap.
    double theta_acc = 0.0;
    double theta_vortex = 0.0;
    double px = s0.x, py = s0.y; // previous sample
    double g_prev = 0.0;
    const double orbit_scale =
        std::max(std::hypot(s0.x - cx, s0.y - cy), 1e-6 * p.R);

    auto angle_inc = [](double ox, double oy, double ax, double ay,
                        double bx, double by) {
        const double vax = ax - ox, vay = ay - oy;
        const double vbx = bx - ox, vby = by - oy;
        return std::atan2(vax * vby - vay * vbx, vax * vbx + vay * vby);
    };

    std::optional<double> period;
    bool failed = false;

    integrate_dopri5(rhs, 0.0, y0, t_cap, io, [&](const DenseStep& ds) {
        if (mon.check_step(ds) != Monitor::Hit::None) {
            failed = true;
            return StepControl::kHalt;
        }
        // angle bookkeeping with a midpoint split to keep increments small
        const Vec2 ym = ds.eval(ds.t0 + 0.5 * ds.h);
        const double th_mid =
            theta_acc + angle_inc(cx, cy, px, py, ym[0], ym[1]);
        const double th_end =
            th_mid + angle_inc(cx, cy, ym[0], ym[1], ds.y1[0], ds.y1[1]);
        theta_vortex += angle_inc(p.r0, 0.0, px, py, ym[0], ym[1]) +
                        angle_inc(p.r0, 0.0, ym[0], ym[1], ds.y1[0],
                                  ds.y1[1]);
        if (std::abs(theta_vortex) >= 2.0 * kPi + 0.5 &&
            std::abs(th_end) < 2.0 * kPi - 0.5) {
            failed = true; // winding the vortex, not the center
            return StepControl::kHalt;
        }

        const double g_now = section_g(ds.y1);
        if (g_prev < 0.0 && g_now >= 0.0 &&
            std::abs(th_end) >= 2.0 * kPi - 0.5) {
            // refine the crossing time on the dense interpolant
            auto gt = [&](double t) { return section_g(ds.eval(t)); };
            const double t_star = brent_root(gt, ds.t0, ds.t1(), g_prev,
                                             g_now, 1e-13 * std::max(1.0, std::abs(ds.t1())));
            const Vec2 ystar = ds.eval(t_star);
            const Vec2 vstar = rhs(t_star, ystar);
            const double dist =
                std::hypot(ystar[0] - s0.x, ystar[1] - s0.y);
            if (nx * vstar[0] + ny * vstar[1] > 0.0 &&
                dist < 0.25 * orbit_scale) {
                period = t_star;
                return StepControl::kHalt;
            }
        }
        g_prev = g_now;
        theta_acc = th_end;
        px = ds.y1[0];
        py = ds.y1[1];
        return StepControl::kContinue;
    });

    if (failed || !period)
        throw NotClosed("orbit_period: no first return before the cap "
                        "(separatrix, singularity or non-annulus orbit)");
    return *period;
}

PeriodScan period_scan(const Params& p, std::size_t n_samples,
                       const ScanOptions& opt) {
    p.validate();
    if (n_samples < 2)
        throw DomainError("period_scan: need at least 2 samples");
    const CenterGeometry info = center_geometry(p);
    const double cx = info.center.x;
    const double T0 = linearized_period(p, cx);

    // The ray from the center in the +x direction leaves the period
    // annulus at the interior saddle if there is one, and in any case
    // before the vortex.
    const double gap = info.section_end_x - cx;
    if (!(gap > 0.0))
        throw NotACenter("period_scan: empty section segment");

    PeriodOptions po = opt.period;
    if (po.t_cap <= 0.0) po.t_cap = po.cap_factor * T0;

    PeriodScan scan;
    scan.center = info.center;

    auto try_sample = [&](double frac) -> bool {
        const double x = cx + frac * gap;
        try {
            const double T = orbit_period(p, {x, 0.0, 0.0}, opt.tol, po);
            const double e = eval_hamiltonian(p, {x, 0.0, std::nullopt});
            scan.section_points.push_back({x, T, e});
            return true;
        } catch (const NotClosed&) {
            return false;
        }
    };

    // Base grid, linear in the section coordinate.
    const std::size_t n_base = std::max<std::size_t>(2, n_samples);
    double last_ok = 0.0;
    double first_fail = -1.0;
    for (std::size_t i = 0; i < n_base; ++i) {
        const double f =
            opt.first_fraction +
            (opt.last_fraction - opt.first_fraction) *
                static_cast<double>(i) / static_cast<double>(n_base - 1);
        if (try_sample(f)) {
            last_ok = f;
        } else {
            first_fail = f;
            break;
        }
    }

    // Walk toward the boundary of the annulus until the period window
    // is comfortably open. The period diverges like log(distance), so
    // dozens of bisection steps are normal here.
    if (first_fail > 0.0) {
        std::size_t budget = std::max<std::size_t>(32, 2 * n_samples);
        while (budget-- > 0 && !scan.section_points.empty() &&
               scan.section_points.back().period <
                   opt.target_period_factor * T0 &&
               first_fail - last_ok > 1e-12) {
            const double mid = 0.5 * (last_ok + first_fail);
            if (try_sample(mid))
                last_ok = mid;
            else
                first_fail = mid;
        }
    }

    if (scan.section_points.empty())
        throw NotClosed("period_scan: no closed orbit found on the section");
    std::sort(scan.section_points.begin(), scan.section_points.end(),
              [](const PeriodSample& a, const PeriodSample& b) {
                  return a.x < b.x;
              });
    return scan;
}

namespace {

int winding_core(std::span<const PhaseState> curve,
                 const std::function<PhaseState(std::size_t)>& ref_at,
                 const WindingOptions& opt) {
    if (curve.size() < 3)
        throw NotClosed("winding_number: fewer than 3 samples");

    double min_x = curve[0].x, max_x = min_x;
    double min_y = curve[0].y, max_y = min_y;
    for (const PhaseState& s : curve) {
        min_x = std::min(min_x, s.x);
        max_x = std::max(max_x, s.x);
        min_y = std::min(min_y, s.y);
        max_y = std::max(max_y, s.y);
    }
    const double diam = std::hypot(max_x - min_x, max_y - min_y);

    auto rel = [&](std::size_t i) {
        const PhaseState r = ref_at(i);
        return std::pair<double, double>{curve[i].x - r.x, curve[i].y - r.y};
    };

    const auto [fx, fy] = rel(0);
    const auto [lx, ly] = rel(curve.size() - 1);
    if (std::hypot(fx - lx, fy - ly) > opt.closure_rel_tol * diam)
        throw NotClosed("winding_number: endpoints do not coincide");

    double total = 0.0;
    auto [ax, ay] = rel(0);
    for (std::size_t i = 1; i < curve.size(); ++i) {
        const auto [bx, by] = rel(i);
        if ((ax == 0.0 && ay == 0.0) || (bx == 0.0 && by == 0.0))
            throw DomainError("winding_number: curve passes through the reference");
        total += std::atan2(ax * by - ay * bx, ax * bx + ay * by);
        ax = bx;
        ay = by;
    }
    const double w = total / (2.0 * kPi);
    const double r = std::round(w);
    if (std::abs(w - r) >= opt.ambiguous_fraction)
        throw AmbiguousWinding(
            "winding_number: accumulated fraction " +
            std::to_string(std::abs(w - r)) + " exceeds the rounding margin");
    return static_cast<int>(r);
}

} // namespace

int winding_number(std::span<const PhaseState> closed_curve,
                   const PhaseState& reference, const WindingOptions& opt) {
    return winding_core(
        closed_curve, [&](std::size_t) { return reference; }, opt);
}

int winding_number(std::span<const PhaseState> closed_curve,
                   const std::function<PhaseState(double)>& reference,
                   const WindingOptions& opt) {
    for (const PhaseState& s : closed_curve)
        if (!s.t.has_value())
            throw MissingTimeTag("winding_number: moving reference needs "
                                 "time-tagged samples");
    return winding_core(
        closed_curve,
        [&](std::size_t i) { return reference(*closed_curve[i].t); }, opt);
}

} // namespace vortexstir
