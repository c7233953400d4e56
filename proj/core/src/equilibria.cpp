#include "vortexstir/equilibria.hpp"

#include <algorithm>
#include <cmath>

#include "vortexstir/model.hpp"
#include "vortexstir/root_find.hpp"

namespace vortexstir {

std::string_view kind_name(EquilibriumKind k) {
    switch (k) {
    case EquilibriumKind::Vortex: return "vortex";
    case EquilibriumKind::Center: return "center";
    case EquilibriumKind::HyperbolicSaddle: return "hyperbolic_saddle";
    case EquilibriumKind::DegenerateSaddle: return "degenerate_saddle";
    case EquilibriumKind::Cusp: return "cusp";
    }
    return "?";
}

std::string_view region_name(Region r) {
    switch (r) {
    case Region::R1: return "R1";
    case Region::R2: return "R2";
    case Region::R3: return "R3";
    case Region::R4: return "R4";
    case Region::R5: return "R5";
    case Region::C1: return "C1";
    case Region::C2: return "C2";
    case Region::C3: return "C3";
    }
    return "?";
}

namespace {

void require_lambda_domain(double rho0, double phi0) {
    if (!(rho0 > 0.0) || !(rho0 < 1.0) || !std::isfinite(rho0))
        throw DomainError("rho0 must lie in (0,1)");
    if (phi0 == 0.0 || !std::isfinite(phi0))
        throw DomainError("phi0 must be nonzero and finite");
}

// 2 - 3r^2 - 3r^4 + 2r^6 - 2(1 - r^2 + r^4)^{3/2}; negative on (0,1),
// vanishing to fourth order at rho0 = 0.
double fold_bracket(double rho0) {
    const double r2 = rho0 * rho0;
    const double r4 = r2 * r2;
    const double q = 1.0 - r2 + r4;
    return 2.0 - 3.0 * r2 - 3.0 * r4 + 2.0 * r4 * r2 - 2.0 * q * std::sqrt(q);
}

} // namespace

double bifurcation_f(double rho0, double phi0) {
    if (!(rho0 > 0.0) || !(rho0 < 1.0) || !std::isfinite(rho0))
        throw DomainError("bifurcation_f: rho0 must lie in (0,1)");
    const double r2 = rho0 * rho0;
    return 27.0 * r2 * (r2 - 1.0) + phi0 * fold_bracket(rho0);
}

double fold_phi0(double rho0) {
    const double r2 = rho0 * rho0;
    return 27.0 * r2 * (1.0 - r2) / fold_bracket(rho0);
}

RegionLabel classify_parameters(double rho0, double phi0, double tol_curve) {
    require_lambda_domain(rho0, phi0);

    if (phi0 > 0.0) {
        const double fr1 = (1.0 - phi0) / (1.0 + phi0);
        const double fr2 = (phi0 - 1.0) / (1.0 + phi0);
        const double d1 = rho0 - fr1;
        const double d2 = rho0 - fr2;
        if (std::abs(d1) <= tol_curve * std::max(1.0, std::abs(fr1)))
            return {Region::C1, d1};
        if (std::abs(d2) <= tol_curve * std::max(1.0, std::abs(fr2)))
            return {Region::C2, d2};
        if (d1 > 0.0 && d2 > 0.0)
            return {Region::R2, std::min(d1, d2)};
        if (d1 < 0.0 && fr1 > fr2)
            return {Region::R1, -d1};
        return {Region::R3, -d2};
    }

    // phi0 < 0: position relative to the fold curve phi0 = fold_phi0(rho0),
    // measured along the phi0 axis (f is affine in phi0 with negative slope).
    const double phis = fold_phi0(rho0);
    const double scale = std::max(1.0, std::max(std::abs(phi0), std::abs(phis)));
    const double d = (phi0 - phis) / scale;
    if (std::abs(d) <= tol_curve)
        return {Region::C3, d};
    if (phi0 < phis)
        return {Region::R4, -d};
    return {Region::R5, d};
}

namespace {

// Normalized axis cubic P(x) = x (x - rho0)(x - 1/rho0); lengths in
// units of R. Critical points on the axis solve P(x) = lambda_hat.
struct AxisCubic {
    double rho0;
    double inv_rho0;
    double lambda_hat;
    double x_max; // local maximum of P, in (0, rho0)
    double x_min; // local minimum of P, beyond x = 1

    double P(double x) const {
        return x * (x - rho0) * (x - inv_rho0);
    }
    double g(double x) const { return P(x) - lambda_hat; }
};

AxisCubic make_cubic(const Params& p) {
    AxisCubic c;
    c.rho0 = p.rho0();
    c.inv_rho0 = 1.0 / c.rho0;
    c.lambda_hat = (c.rho0 - c.inv_rho0) / p.phi0();
    const double r2 = c.rho0 * c.rho0;
    const double s = std::sqrt(1.0 - r2 + r2 * r2);
    c.x_max = (1.0 + r2 - s) / (3.0 * c.rho0);
    c.x_min = (1.0 + r2 + s) / (3.0 * c.rho0);
    return c;
}

Equilibrium make_axis_equilibrium(const Params& p, double x_hat,
                                  EquilibriumKind forced_kind,
                                  bool has_forced_kind,
                                  const EquilibriaOptions& opt) {
    Equilibrium eq;
    eq.location = {x_hat * p.R, 0.0, std::nullopt};
    const Jacobian2 J = eval_jacobian(p, eq.location);
    eq.jacobian_det = J.det();
    if (has_forced_kind) {
        eq.kind = forced_kind;
        return eq;
    }
    const double dn = J.det() / (p.theta0 * p.theta0);
    if (dn > opt.tol_det)
        eq.kind = EquilibriumKind::Center;
    else if (dn < -opt.tol_det)
        eq.kind = EquilibriumKind::HyperbolicSaddle;
    else
        eq.kind = (std::abs(x_hat) >= 1.0 - 1e-6)
                      ? EquilibriumKind::DegenerateSaddle
                      : EquilibriumKind::Cusp;
    return eq;
}

} // namespace

std::vector<Equilibrium> axis_equilibria(const Params& p,
                                         const EquilibriaOptions& opt) {
    p.validate();
    const AxisCubic cub = make_cubic(p);

    struct Root {
        double x;
        EquilibriumKind kind;
        bool forced;
    };
    std::vector<Root> roots;

    const double g_left = cub.g(-1.0);
    const double g_right = cub.g(1.0);
    const double g_peak = cub.g(cub.x_max);

    // Degenerate saddles sitting exactly on the boundary circle.
    if (std::abs(g_left) <= opt.tol_residual)
        roots.push_back({-1.0, EquilibriumKind::DegenerateSaddle, true});
    if (std::abs(g_right) <= opt.tol_residual)
        roots.push_back({1.0, EquilibriumKind::DegenerateSaddle, true});

    // Fold contact: the level lambda touches the local maximum of the
    // cubic, producing a double root (cusp equilibrium). The two
    // monotone branches carry no further roots in that case.
    const bool cusp = std::abs(g_peak) <= opt.tol_residual;
    if (cusp) {
        roots.push_back({cub.x_max, EquilibriumKind::Cusp, true});
    } else {
        // One monotone increasing branch [-1, x_max], one decreasing
        // branch [x_max, 1] (the second stationary point lies beyond 1).
        auto fn = [&cub](double x) { return cub.g(x); };
        if (g_left * g_peak < 0.0) {
            const double r = brent_root(fn, -1.0, cub.x_max, g_left, g_peak);
            roots.push_back({r, EquilibriumKind::Vortex, false});
        }
        if (g_peak * g_right < 0.0) {
            const double r = brent_root(fn, cub.x_max, 1.0, g_peak, g_right);
            roots.push_back({r, EquilibriumKind::Vortex, false});
        }
    }

    // Merge roots that collide with a recorded boundary/cusp point and
    // drop anything that coincides with the vortex singularity.
    std::vector<Root> kept;
    for (const Root& r : roots) {
        if (std::abs(r.x - cub.rho0) < 1e-12 ||
            std::abs(r.x - cub.inv_rho0) < 1e-12)
            continue;
        bool dup = false;
        for (const Root& k : kept)
            if (std::abs(k.x - r.x) <= 1e-8) { dup = true; break; }
        if (!dup) kept.push_back(r);
    }
    std::sort(kept.begin(), kept.end(),
              [](const Root& a, const Root& b) { return a.x < b.x; });

    std::vector<Equilibrium> out;
    out.reserve(kept.size());
    for (const Root& r : kept)
        out.push_back(make_axis_equilibrium(p, r.x, r.kind, r.forced, opt));
    return out;
}

std::optional<std::pair<Equilibrium, Equilibrium>>
boundary_saddles(const Params& p, const EquilibriaOptions& opt) {
    p.validate();
    const RegionLabel rl = classify_parameters(p.rho0(), p.phi0());
    if (rl.label != Region::R2)
        return std::nullopt;

    const double R = p.R, r0 = p.r0, c = p.c();
    const double R2 = R * R;
    const double xs = (R2 + r0 * r0) / (2.0 * r0) -
                      (c / (2.0 * r0)) * (1.0 - r0 * r0 / R2);
    const double ys2 = 0.25 * (2.0 * (c * c + R2 * R2) / R2 -
                               (c - R2) * (c - R2) / (r0 * r0) -
                               (c + R2) * (c + R2) * r0 * r0 / (R2 * R2));
    if (!(ys2 > 0.0))
        return std::nullopt;
    const double ys = std::sqrt(ys2);

    auto make = [&](double y) {
        Equilibrium eq;
        eq.location = {xs, y, std::nullopt};
        eq.kind = EquilibriumKind::HyperbolicSaddle;
        eq.jacobian_det = eval_jacobian(p, eq.location).det();
        return eq;
    };
    (void)opt;
    return std::make_pair(make(ys), make(-ys));
}

CubicLandmarks cubic_landmarks(const Params& p) {
    p.validate();
    const double R2 = p.R * p.R;
    const double r02 = p.r0 * p.r0;
    const double s = std::sqrt(R2 * R2 - R2 * r02 + r02 * r02);
    CubicLandmarks lm;
    lm.x_local_max = (R2 + r02 - s) / (3.0 * p.r0);
    lm.x_local_min = (R2 + r02 + s) / (3.0 * p.r0);
    lm.x_cusp = lm.x_local_max;
    return lm;
}

Theta0Thresholds bifurcation_thresholds(const Params& p) {
    if (!(p.R > 0.0) || !(p.r0 > 0.0) || !(p.r0 < p.R))
        throw DomainError("bifurcation_thresholds: need 0 < r0 < R");
    if (!(p.Gamma > 0.0))
        throw DomainError("bifurcation_thresholds: Gamma must be positive");
    const double base = p.Gamma / (2.0 * kPi * p.R * p.R);
    Theta0Thresholds th;
    th.first = base * (p.R - p.r0) / (p.R + p.r0);
    th.second = base * (p.R + p.r0) / (p.R - p.r0);
    return th;
}

} // namespace vortexstir
