#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "vortexstir/model.hpp"

#include "support/oracles.hpp"

using namespace vortexstir;

namespace {

// R=1, Gamma=2pi, theta0=1, r0=0.5, so c = 1 and the image sits at (2,0).
Params reference_params() { return {1.0, 2.0 * kPi, 1.0, 0.5}; }

} // namespace

TEST_CASE("derived parameters") {
    const Params p = reference_params();
    CHECK(p.rho0() == doctest::Approx(0.5));
    CHECK(p.phi0() == doctest::Approx(1.0));
    CHECK(p.c() == doctest::Approx(1.0));
    CHECK(p.lambda() == doctest::Approx(-1.5));
    CHECK(p.phi0() == doctest::Approx(p.R * p.R / p.c()));

    CHECK_THROWS_AS((Params{1.0, 0.0, 1.0, 0.5}).validate(), DomainError);
    CHECK_THROWS_AS((Params{1.0, 1.0, 0.0, 0.5}).validate(), DomainError);
    CHECK_THROWS_AS((Params{1.0, 1.0, 1.0, 1.5}).validate(), DomainError);
    CHECK_THROWS_AS((Params{-1.0, 1.0, 1.0, 0.5}).validate(), DomainError);
}

TEST_CASE("field at the origin") {
    const Params p = reference_params();
    const Velocity v = eval_field(p, {0.0, 0.0, std::nullopt});
    // dy = -c theta0 (1/a(0) - 1/b(0)) with a(0) = -0.5, b(0) = -2
    const double expected_dy = -(1.0 / (0.0 - 0.5) - 1.0 / (0.0 - 2.0));
    CHECK(v.dx == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(v.dy == doctest::Approx(expected_dy).epsilon(1e-15));
    CHECK(expected_dy == doctest::Approx(1.5));
}

TEST_CASE("dx vanishes on the axis") {
    const Params p = reference_params();
    for (const double x : {-0.9, -0.3, 0.1, 0.3, 0.7, 0.9}) {
        const Velocity v = eval_field(p, {x, 0.0, std::nullopt});
        CHECK(v.dx == 0.0);
    }
}

TEST_CASE("boundary circle is invariant") {
    const Params p = reference_params();
    for (int i = 0; i < 100; ++i) {
        const double ang = 2.0 * kPi * i / 100.0;
        const double x = p.R * std::cos(ang), y = p.R * std::sin(ang);
        const Velocity v = eval_field(p, {x, y, std::nullopt});
        const double radial = x * v.dx + y * v.dy;
        const double scale = p.R * std::hypot(v.dx, v.dy) + 1e-30;
        CHECK(std::abs(radial) <= 1e-13 * scale);
    }
}

TEST_CASE("stream function values") {
    const Params p = reference_params();
    // ln(0.25/4)/2 and -1/8 + ln(0.5/4.25)/2, evaluated independently
    CHECK(eval_hamiltonian(p, {0.0, 0.0, std::nullopt}) ==
          doctest::Approx(-1.3862943611198906).epsilon(1e-14));
    CHECK(eval_hamiltonian(p, {0.0, 0.5, std::nullopt}) ==
          doctest::Approx(-1.1950330817481354).epsilon(1e-14));

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-0.65, 0.65);
    for (int i = 0; i < 50; ++i) {
        const double x = u(rng), y = u(rng);
        CHECK(eval_hamiltonian(p, {x, y, std::nullopt}) ==
              doctest::Approx(eval_hamiltonian(p, {x, -y, std::nullopt}))
                  .epsilon(1e-15));
    }
}

TEST_CASE("field is the symplectic gradient of the stream function") {
    const Params p = reference_params();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ur(0.0, 0.9);
    std::uniform_real_distribution<double> ua(0.0, 2.0 * kPi);
    const double h = 1e-6 * p.R;
    int checked = 0;
    while (checked < 100) {
        const double r = ur(rng), ang = ua(rng);
        const double x = r * std::cos(ang), y = r * std::sin(ang);
        if (std::hypot(x - p.r0, y) < 0.05) continue; // keep FD well conditioned
        const Velocity v = eval_field(p, {x, y, std::nullopt});
        const double dpsi_dy = oracles::central_diff(
            [&](double yy) {
                return eval_hamiltonian(p, {x, yy, std::nullopt});
            },
            y, h);
        const double dpsi_dx = oracles::central_diff(
            [&](double xx) {
                return eval_hamiltonian(p, {xx, y, std::nullopt});
            },
            x, h);
        const double scale = std::hypot(v.dx, v.dy);
        CHECK(std::abs(v.dx - dpsi_dy) <= 1e-6 * scale);
        CHECK(std::abs(v.dy + dpsi_dx) <= 1e-6 * scale);
        ++checked;
    }
}

TEST_CASE("reversibility of the field") {
    const Params p = reference_params();
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-0.6, 0.6);
    for (int i = 0; i < 50; ++i) {
        const double x = u(rng), y = u(rng);
        const Velocity v = eval_field(p, {x, y, std::nullopt});
        const Velocity w = eval_field(p, {x, -y, std::nullopt});
        CHECK(w.dx == doctest::Approx(-v.dx).epsilon(1e-15));
        CHECK(w.dy == doctest::Approx(v.dy).epsilon(1e-15));
    }
}

TEST_CASE("Jacobian at the origin") {
    const Params p = reference_params();
    const Jacobian2 J = eval_jacobian(p, {0.0, 0.0, std::nullopt});
    // off-diagonals theta0 (-+1 + c (1/a^2 - 1/b^2)), 1/a^2 - 1/b^2 = 3.75
    CHECK(J.a11 == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(J.a22 == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(J.a12 == doctest::Approx(2.75).epsilon(1e-14));
    CHECK(J.a21 == doctest::Approx(4.75).epsilon(1e-14));
}

TEST_CASE("Jacobian matches finite differences of the field") {
    const Params p = reference_params();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.6, 0.6);
    const double h = 1e-6;
    int checked = 0;
    while (checked < 60) {
        const double x = u(rng), y = u(rng);
        if (std::hypot(x - p.r0, y) < 0.08) continue;
        const Jacobian2 J = eval_jacobian(p, {x, y, std::nullopt});
        auto fx = [&](double xx, double yy) {
            return eval_field(p, {xx, yy, std::nullopt});
        };
        const double a11 = (fx(x + h, y).dx - fx(x - h, y).dx) / (2 * h);
        const double a12 = (fx(x, y + h).dx - fx(x, y - h).dx) / (2 * h);
        const double a21 = (fx(x + h, y).dy - fx(x - h, y).dy) / (2 * h);
        const double a22 = (fx(x, y + h).dy - fx(x, y - h).dy) / (2 * h);
        const double scale =
            std::abs(J.a11) + std::abs(J.a12) + std::abs(J.a21) +
            std::abs(J.a22) + 1.0;
        CHECK(std::abs(J.a11 - a11) <= 1e-6 * scale);
        CHECK(std::abs(J.a12 - a12) <= 1e-6 * scale);
        CHECK(std::abs(J.a21 - a21) <= 1e-6 * scale);
        CHECK(std::abs(J.a22 - a22) <= 1e-6 * scale);
        CHECK(J.trace() == doctest::Approx(0.0).epsilon(1e-13));
        ++checked;
    }

    // on the axis the diagonal vanishes identically
    for (const double x : {-0.9, -0.4, 0.05, 0.3, 0.8}) {
        const Jacobian2 J = eval_jacobian(p, {x, 0.0, std::nullopt});
        CHECK(J.a11 == 0.0);
        CHECK(J.a22 == 0.0);
    }
}

TEST_CASE("Jacobian at an axis equilibrium has the nu form") {
    // c = -0.05: center at x ~ 0.0981 (root of x(x-1/2)(x-2) = 0.075)
    Params p = reference_params();
    p.Gamma = 2.0 * kPi * p.theta0 * (-0.05);
    const double xc = 0.09812777000372607;
    const Jacobian2 J = eval_jacobian(p, {xc, 0.0, std::nullopt});
    const double nu =
        (xc * xc - p.R * p.R) / ((xc - p.r0) * (xc - p.image_x()));
    CHECK(J.a11 == 0.0);
    CHECK(J.a22 == 0.0);
    CHECK(J.a12 == doctest::Approx(p.theta0 * nu).epsilon(1e-9));
    CHECK(J.a21 == doctest::Approx(p.theta0 * (2.0 + nu)).epsilon(1e-9));
}

TEST_CASE("image point") {
    CHECK(image_point({1.0, 1.0, 1.0, 0.5}).x == doctest::Approx(2.0));
    CHECK(image_point({2.0, 1.0, 1.0, 1.0}).x == doctest::Approx(4.0));
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int i = 0; i < 20; ++i) {
        const double R = 1.0 + u(rng);
        const Params p{R, 1.0, 1.0, u(rng) * R};
        CHECK(image_point(p).x > p.R);
        CHECK(image_point(p).y == 0.0);
    }
}

TEST_CASE("singularity exclusion") {
    const Params p = reference_params();
    const double d = 0.5 * p.exclusion_radius();
    CHECK_THROWS_AS(eval_field(p, {0.5 + d, 0.0, std::nullopt}),
                    SingularityProximity);
    CHECK_THROWS_AS(eval_hamiltonian(p, {2.0, d, std::nullopt}),
                    SingularityProximity);
    CHECK_THROWS_AS(eval_jacobian(p, {0.5, d, std::nullopt}),
                    SingularityProximity);
    CHECK_NOTHROW(eval_field(p, {0.5 + 1e-6, 0.0, std::nullopt}));
}

TEST_CASE("lab frame transform") {
    const Params p = reference_params();

    std::vector<PhaseState> orbit{{0.3, 0.4, 0.0}};
    auto lab = to_lab_frame(orbit, p);
    CHECK(lab[0].x == doctest::Approx(0.3));
    CHECK(lab[0].y == doctest::Approx(0.4));

    orbit = {{1.0, 0.0, kPi / (2.0 * p.theta0)}};
    lab = to_lab_frame(orbit, p);
    CHECK(lab[0].x == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(lab[0].y == doctest::Approx(1.0));

    // the constant corotating state (r0, 0) traces the vortex path itself
    orbit.clear();
    for (int i = 0; i <= 32; ++i)
        orbit.push_back({p.r0, 0.0, 2.0 * kPi * i / 32.0});
    lab = to_lab_frame(orbit, p);
    for (const PhaseState& s : lab)
        CHECK(std::hypot(s.x, s.y) == doctest::Approx(p.r0).epsilon(1e-14));

    std::vector<PhaseState> untagged{{0.1, 0.1, std::nullopt}};
    CHECK_THROWS_AS(to_lab_frame(untagged, p), MissingTimeTag);
}
