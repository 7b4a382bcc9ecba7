#include <benchmark/benchmark.h>

#include <numbers>
#include <random>

#include "virtspin/encoding.hpp"
#include "virtspin/gates.hpp"
#include "virtspin/pulse.hpp"
#include "virtspin/qlin.hpp"
#include "virtspin/spectrum.hpp"
#include "virtspin/spinsys.hpp"
#include "virtspin/stability.hpp"

using namespace virtspin;

namespace {

spinsys::SystemParams benchmark_params() {
    spinsys::SystemParams p;
    p.omega0 = 500.0;
    p.delta = 40.0;
    p.j_coupling = 30.0;
    return p;
}

qlin::CMatrix random_hermitian(std::mt19937_64& eng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    qlin::CMatrix m(4);
    for (int r = 0; r < 4; ++r) {
        m(r, r) = u(eng) * 500.0;
        for (int c = r + 1; c < 4; ++c) {
            m(r, c) = qlin::cplx(u(eng), u(eng)) * 20.0;
            m(c, r) = std::conj(m(r, c));
        }
    }
    return m;
}

void bm_jacobi_eigensystem(benchmark::State& state) {
    std::mt19937_64 eng(2718);
    const qlin::CMatrix m = random_hermitian(eng);
    for (auto _ : state) {
        const qlin::EigenDecomp d = qlin::hermitian_eigensystem(m);
        benchmark::DoNotOptimize(d.eigenvalues[0]);
    }
}
BENCHMARK(bm_jacobi_eigensystem);

void bm_expm_step(benchmark::State& state) {
    std::mt19937_64 eng(2719);
    const qlin::CMatrix m = random_hermitian(eng);
    for (auto _ : state) {
        const qlin::CMatrix u = qlin::expm_i(m, 1e-5);
        benchmark::DoNotOptimize(u(0, 0));
    }
}
BENCHMARK(bm_expm_step);

void bm_diagonalize_system(benchmark::State& state) {
    const spinsys::SystemParams p = benchmark_params();
    for (auto _ : state) {
        const spinsys::Eigensystem es = spinsys::diagonalize(p);
        benchmark::DoNotOptimize(es.theta);
    }
}
BENCHMARK(bm_diagonalize_system);

void bm_transition_table(benchmark::State& state) {
    const spinsys::Eigensystem es = spinsys::diagonalize(benchmark_params());
    for (auto _ : state) {
        const auto lines = spectrum::transition_table(es);
        benchmark::DoNotOptimize(lines[0].frequency);
    }
}
BENCHMARK(bm_transition_table);

// cost of one simulated millisecond of a driven pulse, by drive strength
void bm_lab_propagation(benchmark::State& state) {
    const spinsys::SystemParams p = benchmark_params();
    const qlin::CMatrix h0 = spinsys::build_hamiltonian(p, false);
    pulse::PulseProgram prog;
    prog.segments.push_back(
        {{{460.0, static_cast<double>(state.range(0)), 0.0}}, 1e-3});
    for (auto _ : state) {
        const pulse::Propagator u = pulse::lab_propagator(prog, h0, 1e-5);
        benchmark::DoNotOptimize(u.matrix(0, 0));
    }
    state.SetItemsProcessed(state.iterations() * 100);  // integrator steps
}
BENCHMARK(bm_lab_propagation)->Arg(1)->Arg(10);

void bm_cnot_synthesis_and_score(benchmark::State& state) {
    const spinsys::SystemParams p = benchmark_params();
    const spinsys::Eigensystem es = spinsys::diagonalize(p);
    const encoding::BasisMap vmap =
        encoding::basis_map(encoding::EncodingScheme::virtual_spin, es);
    gates::GateSpec spec;
    spec.kind = gates::GateKind::cnot_q_to_r;
    // strong drive keeps the wall time per iteration manageable
    const double omega1 = 0.2 * es.theta;
    for (auto _ : state) {
        const pulse::PulseProgram prog = gates::synthesize(spec, es, omega1);
        const gates::GateReport rep = gates::score(prog, spec, es, vmap);
        benchmark::DoNotOptimize(rep.fidelity_phase_opt);
    }
}
BENCHMARK(bm_cnot_synthesis_and_score)->Unit(benchmark::kMillisecond);

void bm_encoded_fidelity_grid(benchmark::State& state) {
    const spinsys::SystemParams p = benchmark_params();
    const spinsys::Eigensystem es = spinsys::diagonalize(p);
    const std::vector<double> grid =
        stability::default_time_grid(es.theta, static_cast<int>(state.range(0)));
    encoding::LogicalState l{};
    l.amps[1] = 1.0;
    for (auto _ : state) {
        const auto f = stability::encoded_fidelity(l, encoding::EncodingScheme::zeeman, p, grid);
        benchmark::DoNotOptimize(f.back());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_encoded_fidelity_grid)->Arg(501)->Arg(2001);

void bm_ensemble_stability(benchmark::State& state) {
    spinsys::SystemParams p = benchmark_params();
    p.perturbation = spinsys::PerturbationSpec{
        spinsys::PerturbationSpec::Kind::random_local_fields, 1.0, 42,
        static_cast<int>(state.range(0))};
    const spinsys::Eigensystem es = spinsys::diagonalize(p);
    const std::vector<double> grid = stability::default_time_grid(es.theta, 501);
    encoding::LogicalState l{};
    l.amps[1] = 1.0;
    for (auto _ : state) {
        const auto rep = stability::compare_encodings(l, p, grid, 0.9);
        benchmark::DoNotOptimize(rep.virtual_max_infidelity);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_ensemble_stability)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
