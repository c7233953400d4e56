#include "vortexstir/perturbation.hpp"

#include <algorithm>
#include <cmath>

#include "vortexstir/model.hpp"
#include "vortexstir/parallel.hpp"
#include "vortexstir/root_find.hpp"

namespace vortexstir {

namespace {

struct PerturbedRhs {
    const Params* p;
    const StirringProtocol* pr;
    double R2, c, theta0;

    PerturbedRhs(const Params& params, const StirringProtocol& proto)
        : p(&params), pr(&proto), R2(params.R * params.R),
          c(params.c()), theta0(params.theta0) {}

    Vec2 operator()(double t, const Vec2& y) const {
        const double rv = pr->eval(t);
        const Velocity v = detail::field_at(y[0], y[1], rv, R2 / rv, c, theta0);
        return {v.dx, v.dy};
    }

    bool singular(double t, const Vec2& y, double delta) const {
        const double rv = pr->eval(t);
        const double xi = R2 / rv;
        const double d2 = delta * delta;
        return (y[0] - rv) * (y[0] - rv) + y[1] * y[1] < d2 ||
               (y[0] - xi) * (y[0] - xi) + y[1] * y[1] < d2;
    }
};

} // namespace

Velocity eval_perturbed_field(const Params& p, const StirringProtocol& pr,
                              const PhaseState& s) {
    validate_protocol(pr, p);
    if (!s.t.has_value())
        throw MissingTimeTag("eval_perturbed_field: state has no time tag");
    const double rv = pr.eval(*s.t);
    const double xi = p.R * p.R / rv;
    detail::require_not_singular(s.x, s.y, rv, xi, p.exclusion_radius());
    return detail::field_at(s.x, s.y, rv, xi, p.c(), p.theta0);
}

PhaseState stroboscopic_map(const Params& p, const StirringProtocol& pr,
                            const PhaseState& s0, std::size_t periods,
                            double tol) {
    validate_protocol(pr, p);
    if (periods == 0)
        throw DomainError("stroboscopic_map: periods must be >= 1");
    if (s0.radius2() > p.R * p.R * (1.0 + 1e-9))
        throw DomainError("stroboscopic_map: initial state outside the disk");

    const PerturbedRhs rhs(p, pr);
    const double delta = p.exclusion_radius();
    if (rhs.singular(0.0, {s0.x, s0.y}, delta))
        throw SingularityProximity("stroboscopic_map: start inside exclusion ball");

    IntegrationOptions io;
    io.rel_tol = tol;
    io.abs_tol = tol * p.R;
    io.length_scale = p.R;

    bool singular = false;
    const double t_end = static_cast<double>(periods) * pr.T;
    const IntegrationResult res = integrate_dopri5(
        rhs, 0.0, {s0.x, s0.y}, t_end, io, [&](const DenseStep& ds) {
            if (rhs.singular(ds.t1(), ds.y1, delta)) {
                singular = true;
                return StepControl::kHalt;
            }
            return StepControl::kContinue;
        });
    if (singular)
        throw SingularityProximity(
            "stroboscopic_map: trajectory entered an exclusion ball");
    return {res.y[0], res.y[1], res.t};
}

std::vector<ResonancePair> resonance_pairs(double t_min, double t_max,
                                           double T, std::size_t m_max,
                                           std::size_t n_max) {
    if (!(t_min > 0.0) || !(t_max > t_min))
        throw DomainError("resonance_pairs: need 0 < t_min < t_max");
    if (!(T > 0.0))
        throw DomainError("resonance_pairs: need T > 0");
    std::vector<ResonancePair> out;
    for (std::size_t m = 1; m <= m_max; ++m) {
        for (std::size_t n = 1; n <= n_max; ++n) {
            const double ratio =
                static_cast<double>(m) * T / static_cast<double>(n);
            if (ratio > t_min && ratio < t_max)
                out.push_back({static_cast<int>(m), static_cast<int>(n),
                               ratio});
        }
    }
    std::sort(out.begin(), out.end(),
              [](const ResonancePair& a, const ResonancePair& b) {
                  if (a.ratio != b.ratio) return a.ratio < b.ratio;
                  if (a.m != b.m) return a.m < b.m;
                  return a.n < b.n;
              });
    return out;
}

namespace {

// Trajectory of the perturbed system over [0, m T], resampled uniformly.
std::vector<PhaseState> perturbed_trajectory(const Params& p,
                                             const StirringProtocol& pr,
                                             const PhaseState& s0,
                                             std::size_t periods, double tol,
                                             std::size_t n_out) {
    const PerturbedRhs rhs(p, pr);
    IntegrationOptions io;
    io.rel_tol = tol;
    io.abs_tol = tol * p.R;
    io.length_scale = p.R;

    std::vector<DenseStep> dense;
    const double t_end = static_cast<double>(periods) * pr.T;
    integrate_dopri5(rhs, 0.0, {s0.x, s0.y}, t_end, io,
                     [&](const DenseStep& ds) {
                         dense.push_back(ds);
                         return StepControl::kContinue;
                     });
    std::vector<PhaseState> out;
    out.reserve(n_out + 1);
    std::size_t seg = 0;
    for (std::size_t i = 0; i <= n_out; ++i) {
        const double t =
            t_end * static_cast<double>(i) / static_cast<double>(n_out);
        while (seg + 1 < dense.size() && dense[seg].t1() < t) ++seg;
        const Vec2 y = dense[seg].eval(t);
        out.push_back({y[0], y[1], t});
    }
    return out;
}

// Net turns of the particle-vortex vector measured in the lab frame,
// with the rigid frame rotation theta0 * mT removed. Coincides with the
// corotating winding number for trajectories that never encircle the
// moving vortex; computed through the lab-frame transform as an
// independent route.
int lab_winding(const std::vector<PhaseState>& corot,
                const Params& p, const StirringProtocol& pr) {
    const std::vector<PhaseState> lab =
        to_lab_frame(std::span<const PhaseState>(corot), p);
    double total = 0.0;
    double ax = 0.0, ay = 0.0;
    bool have_prev = false;
    for (const PhaseState& s : lab) {
        const double t = *s.t;
        const double rv = pr.eval(t);
        const double vx = rv * std::cos(p.theta0 * t);
        const double vy = rv * std::sin(p.theta0 * t);
        const double bx = s.x - vx, by = s.y - vy;
        if (have_prev)
            total += std::atan2(ax * by - ay * bx, ax * bx + ay * by);
        ax = bx;
        ay = by;
        have_prev = true;
    }
    const double span = *lab.back().t - *lab.front().t;
    const double w = (total - p.theta0 * span) / (2.0 * kPi);
    const double r = std::round(w);
    if (std::abs(w - r) >= 0.25)
        throw AmbiguousWinding("lab winding: sampling too coarse");
    return static_cast<int>(r);
}

} // namespace

std::vector<PhaseState> perturbed_orbit(const Params& p,
                                        const StirringProtocol& pr,
                                        const PhaseState& s0,
                                        std::size_t periods, double tol,
                                        std::size_t n_samples) {
    validate_protocol(pr, p);
    if (periods == 0 || n_samples == 0)
        throw DomainError("perturbed_orbit: need periods, n_samples >= 1");
    return perturbed_trajectory(p, pr, s0, periods, tol, n_samples);
}

namespace {

struct VerifyOutcome {
    bool ok = false;
    int rotation = 0;
    int winding_corot = 0;
    int winding_lab = 0;
};

VerifyOutcome verify_orbit(const Params& p, const StirringProtocol& pr,
                           const PhaseState& s, const ResonancePair& pair,
                           const SearchConfig& cfg,
                           const PhaseState& center) {
    VerifyOutcome out;
    std::size_t n = cfg.verify_samples;
    for (int attempt = 0; attempt < 4; ++attempt, n *= 2) {
        try {
            const std::vector<PhaseState> traj = perturbed_trajectory(
                p, pr, s, static_cast<std::size_t>(pair.m),
                cfg.integ_rel_tol, n);
            WindingOptions wo;
            wo.closure_rel_tol = 1e-3; // endpoint gap already bounded by the residual
            out.rotation = winding_number(
                std::span<const PhaseState>(traj), center, wo);
            out.winding_corot = winding_number(
                std::span<const PhaseState>(traj),
                std::function<PhaseState(double)>([&](double t) {
                    return PhaseState{pr.eval(t), 0.0, t};
                }),
                wo);
            out.winding_lab = lab_winding(traj, p, pr);
            out.ok = std::abs(out.rotation) == pair.n;
            return out;
        } catch (const AmbiguousWinding&) {
            continue; // resample twice as densely
        }
    }
    throw AmbiguousWinding("verify_orbit: winding stayed ambiguous after refinement");
}

} // namespace

std::vector<PeriodicOrbitResult>
find_periodic_orbits(const Params& p, const StirringProtocol& pr,
                     const ResonancePair& pair, const SearchConfig& cfg) {
    validate_protocol(pr, p);
    if (pair.m < 1 || pair.n < 1)
        throw DomainError("find_periodic_orbits: need m, n >= 1");
    const CenterGeometry geom = center_geometry(p);
    const double cx = geom.center.x, cy = geom.center.y;
    const double gap = geom.section_end_x - cx;
    const std::size_t m = static_cast<std::size_t>(pair.m);

    // The period annulus of the center is the energy band between the
    // center level and the level of the saddle whose connection bounds
    // it. Orbits outside that band (exterior streamlines, vortex loops)
    // also hit resonances of the stroboscopic map and must be excluded.
    const double e_center = eval_hamiltonian(
        p, {geom.center.x, geom.center.y, std::nullopt});
    double e_sep = e_center;
    bool have_band = false;
    for (const PhaseState& s : geom.saddles) {
        const double es = eval_hamiltonian(p, {s.x, s.y, std::nullopt});
        if (!have_band || std::abs(es - e_center) < std::abs(e_sep - e_center)) {
            e_sep = es;
            have_band = true;
        }
    }
    const double band_lo = std::min(e_center, e_sep);
    const double band_hi = std::max(e_center, e_sep);
    auto inside_annulus = [&](double x, double y) {
        if (!have_band) return true;
        const double e = detail::hamiltonian_at(x, y, p.r0, p.image_x(),
                                                p.c(), p.theta0);
        return e > band_lo && e < band_hi;
    };

    std::vector<PeriodicOrbitResult> results;

    const bool unperturbed =
        pr.epsilon == 0.0 || (pr.f_cos.empty() && pr.f_sin.empty() &&
                              pr.g_cos.empty() && pr.g_sin.empty());

    if (unperturbed) {
        // Degenerate case: every point of the resonant torus is a fixed
        // point of the m-fold map. Locate the torus on the section by a
        // 1D search on the (monotone) period function and sample it.
        const double target = pair.ratio;
        PeriodOptions po;
        po.t_cap = 2.0 * target + 10.0 * linearized_period(p, cx);
        auto period_at = [&](double f) -> double {
            return orbit_period(p, {cx + f * gap, 0.0, 0.0},
                                cfg.integ_rel_tol, po);
        };
        double f_lo = cfg.seed_inner, f_hi = -1.0;
        double T_lo;
        try {
            T_lo = period_at(f_lo);
        } catch (const NotClosed&) {
            return results;
        }
        if (T_lo > target) return results; // torus inside the first ring
        double f = f_lo;
        double T_prev = T_lo;
        while (f < cfg.seed_outer) {
            const double f_next = std::min(f + 0.05, cfg.seed_outer);
            double T_next;
            try {
                T_next = period_at(f_next);
            } catch (const NotClosed&) {
                break;
            }
            if (T_next >= target) {
                f_hi = f_next;
                break;
            }
            f = f_next;
            T_prev = T_next;
        }
        if (f_hi < 0.0) return results;
        const double f_res = brent_root(
            [&](double q) { return period_at(q) - target; }, f, f_hi,
            T_prev - target, period_at(f_hi) - target, 1e-12);
        const PhaseState s_res{cx + f_res * gap, 0.0, 0.0};

        const std::size_t n_pts = std::max<std::size_t>(1, cfg.angular);
        const std::vector<PhaseState> torus = perturbed_trajectory(
            p, pr, s_res, m, cfg.integ_rel_tol, n_pts);
        for (std::size_t i = 0; i < n_pts; ++i) {
            const PhaseState s{torus[i].x, torus[i].y, 0.0};
            const PhaseState im = stroboscopic_map(p, pr, s, m,
                                                   cfg.integ_rel_tol);
            PeriodicOrbitResult r;
            r.fixed_point = s;
            r.m = pair.m;
            r.n = pair.n;
            r.residual = std::hypot(im.x - s.x, im.y - s.y);
            r.degenerate = true;
            const VerifyOutcome v =
                verify_orbit(p, pr, s, pair, cfg, geom.center);
            r.rotation_count = v.rotation;
            r.winding_about_vortex = v.winding_corot;
            r.winding_about_vortex_lab = v.winding_lab;
            if (v.ok) results.push_back(r);
        }
        return results;
    }

    // Multi-start Newton on P^m - id with a finite-difference Jacobian.
    const double h = cfg.fd_step * p.R;
    const double tol_len = cfg.newton_tol * p.R;
    const double step_cap = 0.3 * gap;

    auto map_G = [&](const Vec2& s) -> Vec2 {
        const PhaseState im = stroboscopic_map(
            p, pr, {s[0], s[1], 0.0}, m, cfg.integ_rel_tol);
        return {im.x - s[0], im.y - s[1]};
    };

    struct SeedResult {
        bool converged = false;
        Vec2 s{};
        double residual = 0.0;
    };
    const std::size_t n_seeds = cfg.radial * cfg.angular;
    std::vector<SeedResult> seeds(n_seeds);

    parallel_for(n_seeds, cfg.threads, [&](std::size_t idx) {
        const std::size_t j = idx / cfg.angular;
        const std::size_t k = idx % cfg.angular;
        const double frac =
            cfg.seed_inner +
            (cfg.seed_outer - cfg.seed_inner) *
                (cfg.radial > 1
                     ? static_cast<double>(j) /
                           static_cast<double>(cfg.radial - 1)
                     : 0.5);
        const double ang = 2.0 * kPi * static_cast<double>(k) /
                           static_cast<double>(cfg.angular);
        Vec2 s{cx + frac * gap * std::cos(ang),
               cy + frac * gap * std::sin(ang)};
        if (!inside_annulus(s[0], s[1])) return; // seed outside the annulus
        try {
            Vec2 G = map_G(s);
            for (std::size_t it = 0; it < cfg.max_iter; ++it) {
                const double gn = std::hypot(G[0], G[1]);
                if (gn <= tol_len) {
                    seeds[idx] = {true, s, gn};
                    return;
                }
                const Vec2 Gx = map_G({s[0] + h, s[1]});
                const Vec2 Gy = map_G({s[0], s[1] + h});
                const double j11 = (Gx[0] - G[0]) / h;
                const double j21 = (Gx[1] - G[1]) / h;
                const double j12 = (Gy[0] - G[0]) / h;
                const double j22 = (Gy[1] - G[1]) / h;
                const double det = j11 * j22 - j12 * j21;
                if (std::abs(det) < 1e-14) return; // singular: give up
                double dx = (G[0] * j22 - G[1] * j12) / det;
                double dy = (j11 * G[1] - j21 * G[0]) / det;
                const double dn = std::hypot(dx, dy);
                if (dn > step_cap) {
                    dx *= step_cap / dn;
                    dy *= step_cap / dn;
                }
                s[0] -= dx;
                s[1] -= dy;
                if (std::hypot(s[0] - cx, s[1] - cy) > 2.5 * gap ||
                    s[0] * s[0] + s[1] * s[1] > p.R * p.R)
                    return; // wandered out of the annulus
                G = map_G(s);
            }
        } catch (const SingularityProximity&) {
        } catch (const StepFailure&) {
        }
        // non-converged seeds are skipped
    });

    const double dedup = cfg.dedup_radius * p.R;
    std::vector<Vec2> accepted;
    for (std::size_t idx = 0; idx < n_seeds; ++idx) {
        if (!seeds[idx].converged) continue;
        const Vec2 s = seeds[idx].s;
        if (!inside_annulus(s[0], s[1])) continue;
        bool dup = false;
        for (const Vec2& a : accepted)
            if (std::hypot(a[0] - s[0], a[1] - s[1]) <= dedup) {
                dup = true;
                break;
            }
        if (dup) continue;

        PeriodicOrbitResult r;
        r.fixed_point = {s[0], s[1], 0.0};
        r.m = pair.m;
        r.n = pair.n;
        r.residual = seeds[idx].residual;
        const VerifyOutcome v = verify_orbit(p, pr, r.fixed_point, pair,
                                             cfg, geom.center);
        if (!v.ok) continue; // wrong rotation count: not this resonance
        r.rotation_count = v.rotation;
        r.winding_about_vortex = v.winding_corot;
        r.winding_about_vortex_lab = v.winding_lab;
        accepted.push_back(s);
        results.push_back(r);
    }
    return results;
}

} // namespace vortexstir
