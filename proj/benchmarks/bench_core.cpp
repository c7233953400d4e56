#include <benchmark/benchmark.h>

#include "vortexstir/dynamics.hpp"
#include "vortexstir/model.hpp"
#include "vortexstir/perturbation.hpp"

using namespace vortexstir;

namespace {

const Params kR2{1.0, 2.0 * kPi, 1.0, 0.5};
const Params kR4{1.0, 2.0 * kPi * (-0.05), 1.0, 0.5};

void FieldEval(benchmark::State& state) {
    const PhaseState s{0.21, -0.34, std::nullopt};
    for (auto _ : state) {
        const Velocity v = eval_field(kR2, s);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(FieldEval);

void HamiltonianEval(benchmark::State& state) {
    const PhaseState s{0.21, -0.34, std::nullopt};
    for (auto _ : state) {
        const double e = eval_hamiltonian(kR2, s);
        benchmark::DoNotOptimize(e);
    }
}
BENCHMARK(HamiltonianEval);

void JacobianEval(benchmark::State& state) {
    const PhaseState s{0.21, -0.34, std::nullopt};
    for (auto _ : state) {
        const Jacobian2 J = eval_jacobian(kR2, s);
        benchmark::DoNotOptimize(J);
    }
}
BENCHMARK(JacobianEval);

void Classify(benchmark::State& state) {
    double phi0 = -30.0;
    for (auto _ : state) {
        const RegionLabel rl = classify_parameters(0.5, phi0);
        benchmark::DoNotOptimize(rl);
        phi0 = phi0 >= 30.0 ? -30.0 : phi0 + 0.37;
        if (phi0 == 0.0) phi0 = 0.1;
    }
}
BENCHMARK(Classify);

void AxisEquilibria(benchmark::State& state) {
    for (auto _ : state) {
        const auto eqs = axis_equilibria(kR4);
        benchmark::DoNotOptimize(eqs);
    }
}
BENCHMARK(AxisEquilibria);

void OrbitIntegration(benchmark::State& state) {
    const double t_end = static_cast<double>(state.range(0));
    for (auto _ : state) {
        const Orbit orb = integrate_orbit(kR4, {0.25, 0.0, 0.0}, t_end, 1e-10);
        benchmark::DoNotOptimize(orb.samples.back());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(OrbitIntegration)->Arg(10)->Arg(100)->Complexity();

void OrbitPeriod(benchmark::State& state) {
    for (auto _ : state) {
        const double T = orbit_period(kR4, {0.25, 0.0, 0.0}, 1e-10);
        benchmark::DoNotOptimize(T);
    }
}
BENCHMARK(OrbitPeriod);

void StroboscopicMap(benchmark::State& state) {
    const StirringProtocol pr = StirringProtocol::cosine(kR4.r0, 1e-3, 1.0);
    for (auto _ : state) {
        const PhaseState out =
            stroboscopic_map(kR4, pr, {0.25, 0.0, 0.0}, 7, 1e-12);
        benchmark::DoNotOptimize(out);
    }
}
BENCHMARK(StroboscopicMap);

} // namespace

BENCHMARK_MAIN();
