// vortexstir command line tool: classification, equilibria, phase
// portraits, period scans, periodic-orbit searches and parameter sweeps,
// emitting machine-readable CSV/JSON for external plotting.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vortexstir/vortexstir.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace vortexstir;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;   // usage / domain / config errors
constexpr int kExitNoCenter = 3; // analytic precondition unmet

// ---------------------------------------------------------------------
// configuration
// ---------------------------------------------------------------------

struct RunConfig {
    Params params{1.0, 2.0 * kPi, 1.0, 0.5};
    bool has_protocol = false;
    StirringProtocol protocol{};

    double tol_integrator = 1e-10;
    double tol_curve = kCurveTol;
    double tol_residual = kResidualTol;
    double tol_det = kDetTol;
    double tol_newton = 1e-10;

    std::string output_dir = "out";
    std::size_t threads = 0;

    SearchConfig seed_grid{};
    std::size_t scan_samples = 64;
    double scan_first_fraction = 1e-3;
    double scan_last_fraction = 0.999;
    double scan_target_factor = 5.5;
    double scan_cap_factor = 50.0;

    std::size_t portrait_streamlines = 12;
    double portrait_t_span = 0.0; // 0: automatic
    double separatrix_offset = 1e-6;
    double capture_radius = 1e-5;

    std::size_t res_m_max = 40;
    std::size_t res_n_max = 2;
    std::size_t res_pair_index = 0;
    double res_t_min = 0.0; // 0: from the scan
    double res_t_max = 0.0;
    bool dump_trajectories = false;

    json resolved;     // fully materialized config echo
    std::string hash;  // fnv1a of the canonical echo
};

void reject_unknown(const json& j, const std::vector<std::string>& keys,
                    const std::string& where) {
    for (const auto& [k, v] : j.items()) {
        if (std::find(keys.begin(), keys.end(), k) == keys.end())
            throw DomainError("config: unknown key '" + k + "' in " + where);
    }
}

double num(const json& j, const char* key, double dflt) {
    return j.contains(key) ? j.at(key).get<double>() : dflt;
}

std::size_t idx(const json& j, const char* key, std::size_t dflt) {
    return j.contains(key) ? j.at(key).get<std::size_t>() : dflt;
}

struct SweepGrid {
    double rho0_min = 0.01, rho0_max = 0.99;
    std::size_t rho0_count = 100;
    double phi0_min = -30.0, phi0_max = 30.0;
    std::size_t phi0_count = 100;
};

SweepGrid parse_sweep(const json& j) {
    SweepGrid g;
    reject_unknown(j, {"rho0_min", "rho0_max", "rho0_count", "phi0_min",
                       "phi0_max", "phi0_count"}, "sweep");
    g.rho0_min = num(j, "rho0_min", g.rho0_min);
    g.rho0_max = num(j, "rho0_max", g.rho0_max);
    g.rho0_count = idx(j, "rho0_count", g.rho0_count);
    g.phi0_min = num(j, "phi0_min", g.phi0_min);
    g.phi0_max = num(j, "phi0_max", g.phi0_max);
    g.phi0_count = idx(j, "phi0_count", g.phi0_count);
    if (!(g.rho0_min > 0.0) || !(g.rho0_max < 1.0) ||
        g.rho0_min > g.rho0_max || g.rho0_count < 1 || g.phi0_count < 1 ||
        !(g.phi0_min <= g.phi0_max))
        throw DomainError("config: malformed sweep grid");
    return g;
}

RunConfig parse_config(const json& j, SweepGrid* sweep_out) {
    RunConfig c;
    reject_unknown(j,
                   {"params", "protocol", "tolerances", "output_dir",
                    "seed_grid", "scan", "portrait", "periodic", "sweep",
                    "threads"},
                   "top level");

    if (!j.contains("params"))
        throw DomainError("config: missing 'params'");
    {
        const json& p = j.at("params");
        reject_unknown(p, {"R", "Gamma", "theta0", "r0"}, "params");
        c.params.R = num(p, "R", 1.0);
        c.params.Gamma = p.at("Gamma").get<double>();
        c.params.theta0 = p.at("theta0").get<double>();
        c.params.r0 = p.at("r0").get<double>();
        c.params.validate();
    }

    if (j.contains("protocol") && !j.at("protocol").is_null()) {
        const json& pr = j.at("protocol");
        reject_unknown(pr, {"r0", "epsilon", "T", "f_cos", "f_sin", "g_cos",
                            "g_sin"}, "protocol");
        c.has_protocol = true;
        c.protocol.r0 = num(pr, "r0", c.params.r0);
        c.protocol.epsilon = num(pr, "epsilon", 0.0);
        c.protocol.T = num(pr, "T", 1.0);
        auto coeffs = [&](const char* key) {
            return pr.contains(key) ? pr.at(key).get<std::vector<double>>()
                                    : std::vector<double>{};
        };
        c.protocol.f_cos = coeffs("f_cos");
        c.protocol.f_sin = coeffs("f_sin");
        c.protocol.g_cos = coeffs("g_cos");
        c.protocol.g_sin = coeffs("g_sin");
        validate_protocol(c.protocol, c.params);
    }

    if (j.contains("tolerances")) {
        const json& t = j.at("tolerances");
        reject_unknown(t, {"integrator", "curve", "residual", "det",
                           "newton"}, "tolerances");
        c.tol_integrator = num(t, "integrator", c.tol_integrator);
        c.tol_curve = num(t, "curve", c.tol_curve);
        c.tol_residual = num(t, "residual", c.tol_residual);
        c.tol_det = num(t, "det", c.tol_det);
        c.tol_newton = num(t, "newton", c.tol_newton);
    }

    if (j.contains("output_dir"))
        c.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("threads"))
        c.threads = j.at("threads").get<std::size_t>();

    if (j.contains("seed_grid")) {
        const json& s = j.at("seed_grid");
        reject_unknown(s, {"radial", "angular", "inner", "outer", "fd_step",
                           "dedup_radius", "max_iter", "verify_samples"},
                       "seed_grid");
        c.seed_grid.radial = idx(s, "radial", c.seed_grid.radial);
        c.seed_grid.angular = idx(s, "angular", c.seed_grid.angular);
        c.seed_grid.seed_inner = num(s, "inner", c.seed_grid.seed_inner);
        c.seed_grid.seed_outer = num(s, "outer", c.seed_grid.seed_outer);
        c.seed_grid.fd_step = num(s, "fd_step", c.seed_grid.fd_step);
        c.seed_grid.dedup_radius =
            num(s, "dedup_radius", c.seed_grid.dedup_radius);
        c.seed_grid.max_iter = idx(s, "max_iter", c.seed_grid.max_iter);
        c.seed_grid.verify_samples =
            idx(s, "verify_samples", c.seed_grid.verify_samples);
    }

    if (j.contains("scan")) {
        const json& s = j.at("scan");
        reject_unknown(s, {"n_samples", "first_fraction", "last_fraction",
                           "target_period_factor", "cap_factor"}, "scan");
        c.scan_samples = idx(s, "n_samples", c.scan_samples);
        c.scan_first_fraction =
            num(s, "first_fraction", c.scan_first_fraction);
        c.scan_last_fraction = num(s, "last_fraction", c.scan_last_fraction);
        c.scan_target_factor =
            num(s, "target_period_factor", c.scan_target_factor);
        c.scan_cap_factor = num(s, "cap_factor", c.scan_cap_factor);
    }

    if (j.contains("portrait")) {
        const json& s = j.at("portrait");
        reject_unknown(s, {"n_streamlines", "t_span", "separatrix_offset",
                           "capture_radius"}, "portrait");
        c.portrait_streamlines =
            idx(s, "n_streamlines", c.portrait_streamlines);
        c.portrait_t_span = num(s, "t_span", c.portrait_t_span);
        c.separatrix_offset =
            num(s, "separatrix_offset", c.separatrix_offset);
        c.capture_radius = num(s, "capture_radius", c.capture_radius);
    }

    if (j.contains("periodic")) {
        const json& s = j.at("periodic");
        reject_unknown(s, {"m_max", "n_max", "pair_index", "t_min", "t_max",
                           "dump_trajectories"}, "periodic");
        c.res_m_max = idx(s, "m_max", c.res_m_max);
        c.res_n_max = idx(s, "n_max", c.res_n_max);
        c.res_pair_index = idx(s, "pair_index", c.res_pair_index);
        c.res_t_min = num(s, "t_min", c.res_t_min);
        c.res_t_max = num(s, "t_max", c.res_t_max);
        if (s.contains("dump_trajectories"))
            c.dump_trajectories = s.at("dump_trajectories").get<bool>();
    }

    if (j.contains("sweep") && sweep_out)
        *sweep_out = parse_sweep(j.at("sweep"));
    else if (sweep_out)
        *sweep_out = SweepGrid{};

    return c;
}

json materialize(const RunConfig& c, const SweepGrid& g) {
    json out;
    out["params"] = {{"R", c.params.R},
                     {"Gamma", c.params.Gamma},
                     {"theta0", c.params.theta0},
                     {"r0", c.params.r0}};
    if (c.has_protocol)
        out["protocol"] = {{"r0", c.protocol.r0},
                           {"epsilon", c.protocol.epsilon},
                           {"T", c.protocol.T},
                           {"f_cos", c.protocol.f_cos},
                           {"f_sin", c.protocol.f_sin},
                           {"g_cos", c.protocol.g_cos},
                           {"g_sin", c.protocol.g_sin}};
    else
        out["protocol"] = nullptr;
    out["tolerances"] = {{"integrator", c.tol_integrator},
                         {"curve", c.tol_curve},
                         {"residual", c.tol_residual},
                         {"det", c.tol_det},
                         {"newton", c.tol_newton}};
    out["output_dir"] = c.output_dir;
    out["threads"] = c.threads;
    out["seed_grid"] = {{"radial", c.seed_grid.radial},
                        {"angular", c.seed_grid.angular},
                        {"inner", c.seed_grid.seed_inner},
                        {"outer", c.seed_grid.seed_outer},
                        {"fd_step", c.seed_grid.fd_step},
                        {"dedup_radius", c.seed_grid.dedup_radius},
                        {"max_iter", c.seed_grid.max_iter},
                        {"verify_samples", c.seed_grid.verify_samples}};
    out["scan"] = {{"n_samples", c.scan_samples},
                   {"first_fraction", c.scan_first_fraction},
                   {"last_fraction", c.scan_last_fraction},
                   {"target_period_factor", c.scan_target_factor},
                   {"cap_factor", c.scan_cap_factor}};
    out["portrait"] = {{"n_streamlines", c.portrait_streamlines},
                       {"t_span", c.portrait_t_span},
                       {"separatrix_offset", c.separatrix_offset},
                       {"capture_radius", c.capture_radius}};
    out["periodic"] = {{"m_max", c.res_m_max},
                       {"n_max", c.res_n_max},
                       {"pair_index", c.res_pair_index},
                       {"t_min", c.res_t_min},
                       {"t_max", c.res_t_max},
                       {"dump_trajectories", c.dump_trajectories}};
    out["sweep"] = {{"rho0_min", g.rho0_min},   {"rho0_max", g.rho0_max},
                    {"rho0_count", g.rho0_count}, {"phi0_min", g.phi0_min},
                    {"phi0_max", g.phi0_max},   {"phi0_count", g.phi0_count}};
    return out;
}

// The hash identifies the physics of a run: output location and worker
// count do not affect results and stay out of it.
std::string config_hash(const json& resolved) {
    json canonical = resolved;
    canonical.erase("output_dir");
    canonical.erase("threads");
    return hash_hex(canonical.dump());
}

RunConfig load_config(const std::string& path, SweepGrid* grid) {
    std::ifstream in(path);
    if (!in)
        throw DomainError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw DomainError(std::string("config parse error: ") + e.what());
    }
    SweepGrid g;
    RunConfig c = parse_config(j, &g);
    if (grid) *grid = g;
    c.resolved = materialize(c, g);
    c.hash = config_hash(c.resolved);
    return c;
}

void echo_config(const RunConfig& c) {
    fs::create_directories(c.output_dir);
    std::ofstream out(fs::path(c.output_dir) / "config.json",
                      std::ios::binary);
    out << c.resolved.dump(2) << "\n";
}

std::ofstream open_output(const RunConfig& c, const std::string& name) {
    fs::create_directories(c.output_dir);
    std::ofstream out(fs::path(c.output_dir) / name, std::ios::binary);
    if (!out)
        throw Error("cannot open output file: " + name);
    return out;
}

// ---------------------------------------------------------------------
// JSON helpers
// ---------------------------------------------------------------------

json params_json(const Params& p) {
    return {{"R", p.R},       {"Gamma", p.Gamma}, {"theta0", p.theta0},
            {"r0", p.r0},     {"rho0", p.rho0()}, {"phi0", p.phi0()},
            {"c", p.c()},     {"lambda", p.lambda()}};
}

json equilibrium_json(const Equilibrium& eq) {
    json j = {{"x", eq.location.x},
              {"y", eq.location.y},
              {"kind", std::string(kind_name(eq.kind))}};
    if (eq.jacobian_det)
        j["jacobian_det"] = *eq.jacobian_det;
    else
        j["jacobian_det"] = nullptr;
    return j;
}

json collect_equilibria(const RunConfig& c) {
    const Params& p = c.params;
    const RegionLabel rl =
        classify_parameters(p.rho0(), p.phi0(), c.tol_curve);
    EquilibriaOptions opt{c.tol_residual, c.tol_det};

    json eqs = json::array();
    eqs.push_back(equilibrium_json(
        {{p.r0, 0.0, std::nullopt}, EquilibriumKind::Vortex, std::nullopt}));
    for (const Equilibrium& eq : axis_equilibria(p, opt))
        eqs.push_back(equilibrium_json(eq));
    if (const auto bs = boundary_saddles(p, opt)) {
        eqs.push_back(equilibrium_json(bs->first));
        eqs.push_back(equilibrium_json(bs->second));
    }

    const CubicLandmarks lm = cubic_landmarks(p);
    json out;
    out["params"] = params_json(p);
    out["region"] = {{"label", std::string(region_name(rl.label))},
                     {"boundary_distance", rl.boundary_distance}};
    out["landmarks"] = {{"x_local_max", lm.x_local_max},
                        {"x_local_min", lm.x_local_min},
                        {"x_cusp", lm.x_cusp}};
    if (p.Gamma > 0.0) {
        const Theta0Thresholds th = bifurcation_thresholds(p);
        out["thresholds"] = {{"theta0_first", th.first},
                             {"theta0_second", th.second}};
    } else {
        out["thresholds"] = nullptr;
    }
    out["equilibria"] = eqs;
    return out;
}

// ---------------------------------------------------------------------
// portrait helpers
// ---------------------------------------------------------------------

struct EigenPair {
    double lam = 0.0;
    double vx = 0.0, vy = 0.0;
};

// real eigen-decomposition of a trace-free 2x2 with det < 0
std::pair<EigenPair, EigenPair> saddle_eigen(const Jacobian2& J) {
    const double disc = J.trace() * J.trace() - 4.0 * J.det();
    const double s = std::sqrt(std::max(disc, 0.0));
    auto vec = [&](double lam) {
        EigenPair e;
        e.lam = lam;
        // nullspace of J - lam I from the better conditioned row
        const double r1 = std::hypot(J.a11 - lam, J.a12);
        const double r2 = std::hypot(J.a21, J.a22 - lam);
        if (r1 >= r2) {
            e.vx = -J.a12;
            e.vy = J.a11 - lam;
        } else {
            e.vx = J.a22 - lam;
            e.vy = -J.a21;
        }
        const double n = std::hypot(e.vx, e.vy);
        e.vx /= n;
        e.vy /= n;
        return e;
    };
    return {vec(0.5 * (J.trace() + s)), vec(0.5 * (J.trace() - s))};
}

struct Branch {
    int id;
    std::vector<PhaseState> points;
};

// Trace one separatrix branch from a saddle along +-(unstable/stable)
// eigenvector; stable branches integrate backward in time.
Branch trace_branch(const RunConfig& c, const PhaseState& saddle,
                    const EigenPair& dir, double sign, bool unstable,
                    const std::vector<PhaseState>& other_saddles, int id) {
    const Params& p = c.params;
    const double off = c.separatrix_offset * p.R;
    const PhaseState s0{saddle.x + sign * off * dir.vx,
                        saddle.y + sign * off * dir.vy, 0.0};
    Branch br{id, {}};
    if (s0.radius2() > p.R * p.R) return br; // branch leaves the disk

    const double cap2 = c.capture_radius * p.R * c.capture_radius * p.R;
    // the branch must leave the capture ball before a return counts
    const double esc2 = 9.0 * cap2;
    // time to traverse the disk scales with |ln offset| / |lam|
    const double t_span = 4.0 * std::log(p.R / off) / std::abs(dir.lam);

    auto rhs = [&p](double, const Vec2& y) {
        const Velocity v = detail::field_at(y[0], y[1], p.r0, p.image_x(),
                                            p.c(), p.theta0);
        return Vec2{v.dx, v.dy};
    };

    IntegrationOptions io;
    io.rel_tol = c.tol_integrator;
    io.abs_tol = c.tol_integrator * p.R;
    io.length_scale = p.R;

    br.points.push_back({saddle.x, saddle.y, 0.0});
    bool escaped = false;
    const double delta = p.exclusion_radius();
    try {
        integrate_dopri5(
            rhs, 0.0, {s0.x, s0.y}, unstable ? t_span : -t_span, io,
            [&](const DenseStep& ds) {
                br.points.push_back({ds.y1[0], ds.y1[1], ds.t1()});
                const double dx0 = ds.y1[0] - saddle.x;
                const double dy0 = ds.y1[1] - saddle.y;
                if (!escaped && dx0 * dx0 + dy0 * dy0 > esc2) escaped = true;
                if (escaped && dx0 * dx0 + dy0 * dy0 < cap2)
                    return StepControl::kHalt; // homoclinic return
                for (const PhaseState& s : other_saddles) {
                    const double dx = ds.y1[0] - s.x;
                    const double dy = ds.y1[1] - s.y;
                    if (dx * dx + dy * dy < cap2)
                        return StepControl::kHalt; // heteroclinic arrival
                }
                const double dv = std::hypot(ds.y1[0] - p.r0, ds.y1[1]);
                const double di =
                    std::hypot(ds.y1[0] - p.image_x(), ds.y1[1]);
                if (dv < 10.0 * delta || di < 10.0 * delta)
                    return StepControl::kHalt;
                if (ds.y1[0] * ds.y1[0] + ds.y1[1] * ds.y1[1] >
                    p.R * p.R * (1.0 + 1e-6))
                    return StepControl::kHalt;
                return StepControl::kContinue;
            });
    } catch (const StepFailure&) {
        // keep the partial branch
    }
    return br;
}

void write_branches(std::ostream& os, const RunConfig& c,
                    const std::vector<Branch>& branches) {
    os << params_header(c.params, c.hash);
    os << "branch,t,x,y,psi\n";
    for (const Branch& br : branches)
        for (const PhaseState& s : br.points) {
            const double psi =
                eval_hamiltonian(c.params, {s.x, s.y, std::nullopt});
            os << br.id << ',' << format_double(s.t.value_or(0.0)) << ','
               << format_double(s.x) << ',' << format_double(s.y) << ','
               << format_double(psi) << '\n';
        }
}

// ---------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------

int cmd_classify(double rho0, double phi0, double tol) {
    const RegionLabel rl = classify_parameters(rho0, phi0, tol);
    json out = {{"label", std::string(region_name(rl.label))},
                {"boundary_distance", rl.boundary_distance}};
    std::cout << out.dump() << "\n";
    return kExitOk;
}

int cmd_equilibria(const RunConfig& c) {
    echo_config(c);
    auto out = open_output(c, "equilibria.json");
    out << collect_equilibria(c).dump(2) << "\n";
    return kExitOk;
}

int cmd_portrait(const RunConfig& c) {
    echo_config(c);
    const Params& p = c.params;
    {
        auto out = open_output(c, "equilibria.json");
        out << collect_equilibria(c).dump(2) << "\n";
    }

    EquilibriaOptions opt{c.tol_residual, c.tol_det};
    std::vector<Equilibrium> saddles;
    for (const Equilibrium& eq : axis_equilibria(p, opt))
        if (eq.kind == EquilibriumKind::HyperbolicSaddle)
            saddles.push_back(eq);
    if (const auto bs = boundary_saddles(p, opt)) {
        saddles.push_back(bs->first);
        saddles.push_back(bs->second);
    }

    std::vector<Branch> branches;
    int id = 0;
    for (std::size_t i = 0; i < saddles.size(); ++i) {
        const PhaseState at = saddles[i].location;
        std::vector<PhaseState> others;
        for (std::size_t k = 0; k < saddles.size(); ++k)
            if (k != i) others.push_back(saddles[k].location);
        const Jacobian2 J = eval_jacobian(p, at);
        const auto [eu, es] = saddle_eigen(J);
        for (const double sign : {+1.0, -1.0}) {
            branches.push_back(
                trace_branch(c, at, eu, sign, true, others, id++));
            branches.push_back(
                trace_branch(c, at, es, sign, false, others, id++));
        }
    }
    {
        auto out = open_output(c, "separatrices.csv");
        write_branches(out, c, branches);
    }

    // streamline fan: around the vortex always, across the period
    // annulus when a center exists
    std::vector<PhaseState> seeds;
    std::optional<CenterGeometry> geom;
    try {
        geom = center_geometry(p);
    } catch (const NotACenter&) {
    }
    const std::size_t n = std::max<std::size_t>(2, c.portrait_streamlines);
    const std::size_t n_annulus = geom ? n / 2 : 0;
    const std::size_t n_vortex = n - n_annulus;
    if (geom) {
        const double gap = geom->section_end_x - geom->center.x;
        for (std::size_t i = 0; i < n_annulus; ++i) {
            const double f = 0.15 + 0.7 * static_cast<double>(i) /
                                        std::max<std::size_t>(1, n_annulus - 1);
            seeds.push_back({geom->center.x + f * gap, 0.0, 0.0});
        }
    }
    const double d_out = p.R - p.r0;
    for (std::size_t i = 0; i < n_vortex; ++i) {
        const double f = 0.1 + 0.6 * static_cast<double>(i) /
                                   std::max<std::size_t>(1, n_vortex - 1);
        seeds.push_back({p.r0 + f * d_out, 0.0, 0.0});
    }

    double t_span = c.portrait_t_span;
    if (t_span <= 0.0) {
        t_span = 30.0 / std::abs(p.theta0);
        if (geom) {
            try {
                t_span = std::max(
                    t_span, 3.0 * linearized_period(p, geom->center.x));
            } catch (const NotACenter&) {
            }
        }
    }

    for (std::size_t i = 0; i < seeds.size(); ++i) {
        char name[64];
        std::snprintf(name, sizeof(name), "streamline_%03zu.csv", i);
        try {
            const Orbit orb =
                integrate_orbit(p, seeds[i], t_span, c.tol_integrator);
            auto out = open_output(c, name);
            write_orbit_csv(out, orb, c.hash);
        } catch (const Error&) {
            // seeds colliding with an exclusion ball are skipped
        }
    }
    return kExitOk;
}

int cmd_period_scan(const RunConfig& c) {
    echo_config(c);
    ScanOptions so;
    so.tol = c.tol_integrator;
    so.first_fraction = c.scan_first_fraction;
    so.last_fraction = c.scan_last_fraction;
    so.target_period_factor = c.scan_target_factor;
    so.period.cap_factor = c.scan_cap_factor;
    const PeriodScan scan = period_scan(c.params, c.scan_samples, so);
    auto out = open_output(c, "period_scan.csv");
    write_period_scan_csv(out, scan, c.params, c.hash);
    return kExitOk;
}

int cmd_periodic(const RunConfig& c) {
    echo_config(c);
    if (!c.has_protocol)
        throw DomainError("periodic-orbits: config has no protocol");
    const Params& p = c.params;

    double t_min = c.res_t_min, t_max = c.res_t_max;
    json scan_json;
    if (t_min <= 0.0 || t_max <= t_min) {
        ScanOptions so;
        so.tol = c.tol_integrator;
        so.target_period_factor = c.scan_target_factor;
        const PeriodScan scan = period_scan(p, c.scan_samples, so);
        t_min = scan.section_points.front().period;
        t_max = scan.section_points.back().period;
        auto out = open_output(c, "period_scan.csv");
        write_period_scan_csv(out, scan, p, c.hash);
    }

    const auto pairs =
        resonance_pairs(t_min, t_max, c.protocol.T, c.res_m_max, c.res_n_max);
    if (pairs.empty())
        throw NotACenter("periodic-orbits: no resonance pair in the period "
                         "window");
    if (c.res_pair_index >= pairs.size())
        throw DomainError("periodic-orbits: pair_index out of range");
    const ResonancePair pair = pairs[c.res_pair_index];

    SearchConfig cfg = c.seed_grid;
    cfg.newton_tol = c.tol_newton;
    cfg.threads = c.threads;
    const auto orbits = find_periodic_orbits(p, c.protocol, pair, cfg);

    json jorbits = json::array();
    for (std::size_t i = 0; i < orbits.size(); ++i) {
        const PeriodicOrbitResult& o = orbits[i];
        json jo = {{"x", o.fixed_point.x},
                   {"y", o.fixed_point.y},
                   {"m", o.m},
                   {"n", o.n},
                   {"winding_about_vortex", o.winding_about_vortex},
                   {"winding_about_vortex_lab", o.winding_about_vortex_lab},
                   {"rotation_count", o.rotation_count},
                   {"residual", o.residual}};
        if (o.degenerate) jo["degenerate"] = "unperturbed";
        jorbits.push_back(jo);

        if (c.dump_trajectories) {
            const PhaseState fp{o.fixed_point.x, o.fixed_point.y, 0.0};
            const auto traj = perturbed_orbit(
                p, c.protocol, fp, static_cast<std::size_t>(o.m),
                cfg.integ_rel_tol, 256 * static_cast<std::size_t>(o.m));
            char name[64];
            std::snprintf(name, sizeof(name), "orbit_%03zu.csv", i);
            auto out = open_output(c, name);
            out << params_header(p, c.hash);
            out << "t,x,y\n";
            for (const PhaseState& s : traj)
                out << format_double(s.t.value_or(0.0)) << ','
                    << format_double(s.x) << ',' << format_double(s.y)
                    << '\n';
        }
    }

    json out;
    out["params"] = params_json(p);
    out["pair"] = {{"m", pair.m}, {"n", pair.n}, {"ratio", pair.ratio}};
    out["t_window"] = {t_min, t_max};
    out["orbits"] = jorbits;
    auto f = open_output(c, "periodic_orbits.json");
    f << out.dump(2) << "\n";
    std::cout << "periodic-orbits: " << orbits.size()
              << " fixed points for (m,n)=(" << pair.m << "," << pair.n
              << ")\n";
    return kExitOk;
}

int cmd_sweep(const RunConfig& c, const SweepGrid& g) {
    echo_config(c);
    std::vector<double> rho0s(g.rho0_count), phi0s(g.phi0_count);
    for (std::size_t i = 0; i < g.rho0_count; ++i)
        rho0s[i] = g.rho0_count == 1
                       ? g.rho0_min
                       : g.rho0_min + (g.rho0_max - g.rho0_min) *
                                          static_cast<double>(i) /
                                          static_cast<double>(g.rho0_count - 1);
    for (std::size_t j = 0; j < g.phi0_count; ++j)
        phi0s[j] = g.phi0_count == 1
                       ? g.phi0_min
                       : g.phi0_min + (g.phi0_max - g.phi0_min) *
                                          static_cast<double>(j) /
                                          static_cast<double>(g.phi0_count - 1);

    const std::size_t total = g.rho0_count * g.phi0_count;
    std::vector<std::string> labels(total);
    parallel_for(total, c.threads, [&](std::size_t k) {
        const double rho0 = rho0s[k / g.phi0_count];
        const double phi0 = phi0s[k % g.phi0_count];
        if (phi0 == 0.0) return; // excluded from the parameter space
        const RegionLabel rl = classify_parameters(rho0, phi0, c.tol_curve);
        labels[k] = std::string(region_name(rl.label));
    });

    auto out = open_output(c, "sweep.csv");
    out << "# vortexstir sweep config=" << c.hash << "\n";
    out << "rho0,phi0,label\n";
    for (std::size_t k = 0; k < total; ++k) {
        if (labels[k].empty()) continue; // phi0 == 0 rows are omitted
        out << format_double(rho0s[k / g.phi0_count]) << ','
            << format_double(phi0s[k % g.phi0_count]) << ',' << labels[k]
            << '\n';
    }
    return kExitOk;
}

int cmd_schema() {
    std::cout <<
        R"(vortexstir output schema
========================

All CSV files: LF line endings, '.' decimal separator, full round-trip
decimal precision, one '#'-prefixed header line carrying the physical
parameters and the config hash, then a column-name line.

config.json          echo of the fully resolved configuration (defaults
                     materialized); its FNV-1a hash stamps every CSV.

equilibria.json      params (with derived rho0/phi0/c/lambda), region
                     {label R1..R5|C1..C3, boundary_distance}, landmarks
                     {x_local_max, x_local_min, x_cusp}, thresholds
                     {theta0_first, theta0_second} (Gamma > 0 only),
                     equilibria [{x, y, kind, jacobian_det}] where kind is
                     vortex|center|hyperbolic_saddle|degenerate_saddle|cusp.

separatrices.csv     branch,t,x,y,psi -- separatrix branches seeded a small
                     offset along the saddle eigenvectors (stable branches
                     integrated backward in time); branch ids are opaque.

streamline_NNN.csv   t,x,y,psi -- one integrated streamline per file.

period_scan.csv      x,period,energy -- section abscissa, first-return
                     time and stream-function level, ordered outward from
                     the center.

periodic_orbits.json pair {m,n,ratio}, t_window [T_min,T_max], orbits
                     [{x, y, m, n, winding_about_vortex,
                       winding_about_vortex_lab, rotation_count, residual,
                       degenerate?}].
                     winding_about_vortex is computed in the corotating
                     frame against the moving vortex (r_eps(t), 0); the
                     _lab variant transforms the trajectory to the lab
                     frame and removes the rigid frame rotation theta0*mT.

orbit_NNN.csv        t,x,y -- stroboscopic checkpoints of a located orbit
                     (written when periodic.dump_trajectories is true).

sweep.csv            rho0,phi0,label -- one row per grid point, row-major
                     in (rho0, phi0); points with phi0 == 0 are omitted.

Exit codes: 0 success, 2 usage or domain error, 3 analytic precondition
unmet (no center / empty period window). VORTEX_STIR_THREADS caps worker
threads; outputs are byte-identical for any thread count.
)";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"point-vortex stirring in a disk: bifurcation analysis, "
                 "period scans and periodic-orbit search"};
    app.require_subcommand(1);

    // classify
    double rho0 = 0.0, phi0 = 0.0, tol = kCurveTol;
    CLI::App* classify =
        app.add_subcommand("classify", "classify a (rho0, phi0) pair");
    classify->add_option("--rho0", rho0, "path radius / domain radius")
        ->required();
    classify->add_option("--phi0", phi0, "2 pi R^2 theta0 / Gamma")
        ->required();
    classify->add_option("--tol", tol, "curve tolerance");

    std::string config_path;
    std::string output_dir_override;
    std::size_t threads_override = 0;
    bool threads_set = false;

    auto add_config_opts = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file")
            ->required();
        cmd->add_option("--output-dir", output_dir_override,
                        "override config output_dir");
        cmd->add_option("--threads", threads_override,
                        "override config threads")
            ->each([&](const std::string&) { threads_set = true; });
    };

    CLI::App* equilibria_cmd = app.add_subcommand(
        "equilibria", "locate and classify all relative equilibria");
    add_config_opts(equilibria_cmd);
    CLI::App* portrait_cmd = app.add_subcommand(
        "portrait", "equilibria, separatrices and a streamline fan");
    add_config_opts(portrait_cmd);
    CLI::App* scan_cmd = app.add_subcommand(
        "period-scan", "period function across the period annulus");
    add_config_opts(scan_cmd);
    CLI::App* periodic_cmd = app.add_subcommand(
        "periodic-orbits",
        "fixed points of the stroboscopic map under the perturbed protocol");
    add_config_opts(periodic_cmd);
    CLI::App* sweep_cmd = app.add_subcommand(
        "sweep", "classification over a (rho0, phi0) grid");
    add_config_opts(sweep_cmd);
    app.add_subcommand("schema", "describe all output files and columns");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("classify"))
            return cmd_classify(rho0, phi0, tol);
        if (app.got_subcommand("schema"))
            return cmd_schema();

        SweepGrid grid;
        RunConfig cfg = load_config(config_path, &grid);
        if (!output_dir_override.empty()) {
            cfg.output_dir = output_dir_override;
            cfg.resolved["output_dir"] = cfg.output_dir;
        }
        if (threads_set) {
            cfg.threads = threads_override;
            cfg.resolved["threads"] = cfg.threads;
        }

        if (app.got_subcommand("equilibria")) return cmd_equilibria(cfg);
        if (app.got_subcommand("portrait")) return cmd_portrait(cfg);
        if (app.got_subcommand("period-scan")) return cmd_period_scan(cfg);
        if (app.got_subcommand("periodic-orbits")) return cmd_periodic(cfg);
        if (app.got_subcommand("sweep")) return cmd_sweep(cfg, grid);
    } catch (const NotACenter& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoCenter;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitUsage;
}
