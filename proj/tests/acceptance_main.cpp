// End-to-end acceptance gate. Each numbered check prints one PASS/FAIL line
// with the measured values against the stated tolerance; the process exits
// with the number of failed checks. Links only the core library (plus a
// subprocess call to the CLI for the determinism check).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "virtspin/encoding.hpp"
#include "virtspin/gates.hpp"
#include "virtspin/pulse.hpp"
#include "virtspin/qlin.hpp"
#include "virtspin/spectrum.hpp"
#include "virtspin/spinsys.hpp"
#include "virtspin/stability.hpp"

namespace fs = std::filesystem;
using namespace virtspin;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Field {
    char buf[64];
    explicit Field(double v) { std::snprintf(buf, sizeof buf, "%.3g", v); }
    const char* c_str() const { return buf; }
};

std::string g(double v) { return Field(v).c_str(); }

spinsys::SystemParams benchmark_params() {
    spinsys::SystemParams p;
    p.omega0 = 500.0;
    p.delta = 40.0;
    p.j_coupling = 30.0;
    return p;
}

spinsys::SystemParams random_params(std::mt19937_64& eng) {
    auto unit = [&]() { return std::ldexp(static_cast<double>(eng() >> 11), -53); };
    spinsys::SystemParams p;
    p.omega0 = 200.0 + 1800.0 * unit();
    p.delta = -100.0 + 200.0 * unit();
    p.j_coupling = 0.5 + 99.5 * unit();
    return p;
}

encoding::LogicalState logical_basis(int k) {
    encoding::LogicalState l{};
    l.amps[k] = 1.0;
    return l;
}

// --- 1: closed-form eigensystem reproduction --------------------------------

Outcome check_eigensystem() {
    std::mt19937_64 eng(0x5eed0001);
    double max_de = 0, max_res = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const spinsys::SystemParams p = random_params(eng);
        const spinsys::Eigensystem es = spinsys::diagonalize(p);
        const auto closed = spinsys::closed_form_energies(p);
        const qlin::CMatrix h = spinsys::build_hamiltonian(p, false);
        for (int k = 0; k < 4; ++k) {
            max_de = std::max(max_de, std::abs(es.energies[k] - closed[k]));
            const qlin::StateVec hv = qlin::apply(h, es.states[k]);
            for (int r = 0; r < 4; ++r)
                max_res = std::max(max_res,
                                   std::abs(hv[r] - es.energies[k] * es.states[k][r]));
        }
    }
    Outcome o;
    o.pass = max_de <= 1e-9 && max_res <= 1e-10;
    o.detail = "200 random sets: max |E_numeric - E_closed| = " + g(max_de) +
               " (tol 1e-9), max eigenvector residual = " + g(max_res) + " (tol 1e-10)";
    return o;
}

// --- 2: spectrum table, combination rules, documented form offsets ----------

Outcome check_spectrum() {
    Outcome o;

    const spinsys::Eigensystem es = spinsys::diagonalize(benchmark_params());
    const auto lines = spectrum::transition_table(es);  // (1,2) (1,3) (2,4) (3,4)
    const double want_f[4] = {490.0, 540.0, 510.0, 460.0};
    const double want_a[4] = {1.6, 0.4, 1.6, 0.4};
    double max_df = 0, max_da = 0;
    for (int i = 0; i < 4; ++i) {
        max_df = std::max(max_df, std::abs(lines[i].frequency - want_f[i]));
        max_da = std::max(max_da, std::abs(lines[i].rel_intensity - want_a[i]));
    }

    std::mt19937_64 eng(0x5eed0002);
    double max_rule = 0, max_theta = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const spinsys::SystemParams p = random_params(eng);
        const spinsys::Eigensystem rs = spinsys::diagonalize(p);
        const auto rl = spectrum::transition_table(rs);
        const auto rep = spectrum::combination_rules_check(rl, 1e-9);
        for (const auto& rule : rep.rules)
            max_rule = std::max(max_rule, std::abs(rule.residual));
        max_theta = std::max(max_theta, std::abs(rep.theta_recovered - rs.theta));
        if (!rep.pass) max_rule = std::max(max_rule, 1.0);
    }

    // shorthand frequency forms as printed carry a -J/4 (and one theta-sign)
    // slip against the eigenvalue differences; the offsets are exact
    const double j = 30.0, th = es.theta, w0 = 500.0;
    const double printed[4] = {w0 + j / 4 - th / 2, w0 + j / 4 + th / 2,
                               w0 - j / 4 - th / 2, w0 - j / 4 - th / 2};
    const double want_off[4] = {j / 4, j / 4, th - j / 4, -j / 4};
    double max_doff = 0;
    for (int i = 0; i < 4; ++i)
        max_doff = std::max(
            max_doff, std::abs((lines[i].frequency - printed[i]) - want_off[i]));

    o.pass = max_df <= 1e-9 && max_da <= 1e-9 && max_rule <= 1e-9 &&
             max_theta <= 1e-9 && max_doff <= 1e-9;
    o.detail = "benchmark line err " + g(max_df) + "/" + g(max_da) +
               ", 200-set rule residual " + g(max_rule) + ", theta err " + g(max_theta) +
               ", shorthand-form offset err " + g(max_doff) + " (tol 1e-9 each)";
    return o;
}

// --- 3: synthesized gate set fidelities --------------------------------------

Outcome check_gates() {
    const spinsys::SystemParams p = benchmark_params();
    const spinsys::Eigensystem es = spinsys::diagonalize(p);
    const encoding::BasisMap vmap = encoding::basis_map(encoding::EncodingScheme::virtual_spin, es);
    const double omega1 = 0.02 * es.theta;

    gates::GateSpec cnot;
    cnot.kind = gates::GateKind::cnot_q_to_r;
    const pulse::PulseProgram cprog = gates::synthesize(cnot, es, omega1);
    const gates::GateReport crep = gates::score(cprog, cnot, es, vmap);
    const int want_out[4] = {0, 1, 3, 2};
    double min_truth = 1.0;
    for (int i = 0; i < 4; ++i)
        min_truth = std::min(min_truth, crep.truth_table[i][want_out[i]]);

    double min_rot = 1.0;
    bool single_double_tone = true;
    for (const gates::GateKind kind : {gates::GateKind::rot_q, gates::GateKind::rot_r}) {
        gates::GateSpec rot;
        rot.kind = kind;
        rot.angle = kPi;
        const pulse::PulseProgram rprog = gates::synthesize(rot, es, omega1);
        single_double_tone = single_double_tone && rprog.segments.size() == 1 &&
                             rprog.segments[0].tones.size() == 2;
        const gates::GateReport rrep = gates::score(rprog, rot, es, vmap);
        min_rot = std::min(min_rot, rrep.fidelity_phase_opt);
    }

    Outcome o;
    o.pass = crep.fidelity_phase_opt >= 0.999 && min_truth >= 0.999 && min_rot >= 0.998 &&
             single_double_tone;
    o.detail = "cnot F_opt = " + g(crep.fidelity_phase_opt) + ", min truth transfer = " +
               g(min_truth) + " (>= 0.999); pi-rotation min F_opt = " + g(min_rot) +
               " (>= 0.998, one two-tone segment each: " +
               (single_double_tone ? "yes" : "no") + ")";
    return o;
}

// --- 4: lab frame against the rotating-wave propagator -----------------------

// propagator of the co-rotating (counter-rotating terms dropped) Hamiltonian,
// integrated in the energy eigenbasis on the same global clock as the lab frame:
//   H_rwa(t) = diag(E) + sum_tones (amp/2) [e^{-i(w t + chi)} A+ + h.c.]
// with A+ the upper triangle of the drive operator in the eigenbasis.
qlin::CMatrix rwa_reference(const pulse::PulseProgram& prog, const spinsys::Eigensystem& es) {
    const qlin::CMatrix m = es.eigenvector_matrix();
    const qlin::CMatrix x = m.adjoint() * pulse::drive_operator(spinsys::spin_ops()) * m;
    qlin::CMatrix u = qlin::CMatrix::identity(4);
    double t0 = 0;
    for (const auto& seg : prog.segments) {
        const int steps = std::max(1, static_cast<int>(std::ceil(seg.duration / 2e-5)));
        const double dt = seg.duration / steps;
        for (int s = 0; s < steps; ++s) {
            const double tm = t0 + (s + 0.5) * dt;
            qlin::CMatrix h(4);
            for (int k = 0; k < 4; ++k) h(k, k) = es.energies[k];
            for (const auto& tone : seg.tones) {
                const qlin::cplx rot = std::polar(tone.amplitude / 2,
                                                  -(tone.carrier * tm + tone.phase));
                for (int r = 0; r < 4; ++r)
                    for (int c = r + 1; c < 4; ++c) {
                        h(r, c) += rot * x(r, c);
                        h(c, r) += std::conj(rot * x(r, c));
                    }
            }
            u = qlin::expm_i(h, dt) * u;
        }
        t0 += seg.duration;
    }
    return u;
}

struct RwaPoint {
    double deviation = 0;
    double direct_sum_deviation = 0;
};

RwaPoint rwa_point(double omega1, const spinsys::SystemParams& p,
                   const spinsys::Eigensystem& es) {
    gates::GateSpec cnot;
    cnot.kind = gates::GateKind::cnot_q_to_r;
    const pulse::PulseProgram prog = gates::synthesize(cnot, es, omega1);
    const qlin::CMatrix h0 = spinsys::build_hamiltonian(p, false);
    const qlin::CMatrix m = es.eigenvector_matrix();
    const qlin::CMatrix u_lab = pulse::lab_propagator(prog, h0, 2e-5).matrix;
    RwaPoint pt;
    pt.deviation = (m.adjoint() * u_lab * m).max_abs_diff(rwa_reference(prog, es));
    // the two-level direct sum additionally ignores co-rotating crosstalk on
    // the neighboring lines, so its deviation runs an order larger
    pt.direct_sum_deviation =
        (qlin::expm_i(h0, prog.total_duration()) * pulse::rwa_propagator(prog, es).matrix)
            .max_abs_diff(u_lab);
    return pt;
}

Outcome check_rwa() {
    const spinsys::SystemParams p = benchmark_params();
    const spinsys::Eigensystem es = spinsys::diagonalize(p);
    const RwaPoint pt1 = rwa_point(0.02 * es.theta, p, es);
    const RwaPoint pt2 = rwa_point(0.04 * es.theta, p, es);
    const double d1 = pt1.deviation;
    const double ratio = pt2.deviation / pt1.deviation;
    const double d_direct = pt1.direct_sum_deviation;

    Outcome o;
    o.pass = d1 <= 5e-3 && ratio >= 2.0 / 1.5 && ratio <= 2.0 * 1.5;
    o.detail = "entrywise deviation " + g(d1) + " at omega1 = 0.02 theta (tol 5e-3), x2 ratio " +
               g(ratio) + " (2 within factor 1.5); two-level direct sum deviates " +
               g(d_direct) + " (info)";
    return o;
}

// --- 5: encoding stabilization under the bare Hamiltonian --------------------

Outcome check_stabilization() {
    const spinsys::SystemParams p = benchmark_params();
    const spinsys::Eigensystem es = spinsys::diagonalize(p);
    const std::vector<double> grid = stability::default_time_grid(es.theta);  // 50 periods

    double max_virtual = 0;
    for (int k = 0; k < 4; ++k) {
        const auto rep = stability::compare_encodings(logical_basis(k), p, grid, 0.9);
        max_virtual = std::max(max_virtual, rep.virtual_max_infidelity);
    }

    const auto rep01 = stability::compare_encodings(logical_basis(1), p, grid, 0.9);
    const double dip_err = std::abs(rep01.zeeman_dip_amplitude - 0.36);
    // the beat minima all reach the same floor; locate the first one
    const auto& fz = rep01.fidelity_zeeman;
    std::size_t arg_min = fz.size() - 1;
    for (std::size_t i = 1; i + 1 < fz.size(); ++i)
        if (fz[i] <= fz[i - 1] && fz[i] <= fz[i + 1]) { arg_min = i; break; }
    const double t_min_err = std::abs(rep01.times[arg_min] - kPi / es.theta);

    Outcome o;
    o.pass = max_virtual <= 1e-10 && dip_err <= 1e-9 && t_min_err <= 1e-9;
    o.detail = "virtual max infidelity " + g(max_virtual) +
               " over 50 beat periods, all basis states (tol 1e-10); zeeman dip err " +
               g(dip_err) + " vs 1 - sin^2 phi (tol 1e-9); first-minimum time err " +
               g(t_min_err) + " vs pi/theta";
    return o;
}

// --- 6: perturbation hierarchy -----------------------------------------------

Outcome check_perturbations() {
    spinsys::SystemParams p = benchmark_params();
    const spinsys::Eigensystem es = spinsys::diagonalize(p);
    const std::vector<double> grid = stability::default_time_grid(es.theta);
    const double dvals[2] = {0.03 * es.theta, 0.06 * es.theta};

    // the secular coupling commutes with H, so encoded basis states ride it
    // exactly; the d^2 mixing budget is spent by the non-commuting local-field
    // draw instead (see the scaling sweep below)
    double max_dip_drift = 0, max_over_bound = 0;
    for (const double d : dvals) {
        p.perturbation = spinsys::PerturbationSpec{
            spinsys::PerturbationSpec::Kind::dipolar_zz, d, 0, 256};
        const double bound = 4.0 * (d / es.theta) * (d / es.theta);
        for (int k = 0; k < 4; ++k) {
            const auto rep = stability::compare_encodings(logical_basis(k), p, grid, 0.9);
            max_over_bound = std::max(max_over_bound, rep.virtual_max_infidelity / bound);
        }
        const auto rep01 = stability::compare_encodings(logical_basis(1), p, grid, 0.9);
        max_dip_drift =
            std::max(max_dip_drift, std::abs(rep01.zeeman_dip_amplitude - 0.36) / 0.36);
    }

    spinsys::SystemParams base = benchmark_params();
    base.perturbation = spinsys::PerturbationSpec{
        spinsys::PerturbationSpec::Kind::random_local_fields, dvals[0], 20260815, 256};
    const stability::ScalingTable table =
        stability::timescale_scaling_sweep(base, {}, std::vector<double>{dvals[0], dvals[1]});
    double field_over_bound = 0;
    for (const auto& row : table.d_rows)
        field_over_bound = std::max(
            field_over_bound,
            row.max_infidelity / (4.0 * (row.value / es.theta) * (row.value / es.theta)));
    const double slope = table.virtual_infidelity_exponent;

    Outcome o;
    o.pass = max_over_bound <= 1.0 && max_dip_drift <= 0.10 && std::abs(slope - 2.0) <= 0.1 &&
             field_over_bound <= 1.0;
    o.detail = "secular-coupling infidelity/bound " + g(max_over_bound) +
               " (<= 1), zeeman dip drift " + g(max_dip_drift) +
               " (<= 0.1); local-field d^2 slope " + g(slope) +
               " (2 +- 0.1), infidelity/bound " + g(field_over_bound) + " (<= 1)";
    return o;
}

// --- 7: CLI determinism -------------------------------------------------------

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return in.good() || in.eof() ? ss.str() : std::string("<unreadable>");
}

Outcome check_determinism() {
    Outcome o;
    const fs::path dir =
        fs::temp_directory_path() / ("virtspin_accept_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    {
        std::ofstream cfg(dir / "cfg.json");
        cfg << R"({"schema_version": 1,
  "system": {"omega0": 500.0, "delta": 40.0, "j": 30.0,
             "perturbation": {"kind": "random_local_fields", "strength": 2.0,
                               "seed": 7, "ensemble_size": 128}},
  "stability": {"logical": "01", "threshold": 0.9}})";
    }
    int rc = 0;
    for (const char* out : {"r1", "r2"}) {
        const std::string cmd = "cd '" + dir.string() + "' && '" + VIRTSPIN_CLI_PATH +
                                "' stability --config cfg.json --out " + out +
                                " > /dev/null 2>&1";
        rc |= std::system(cmd.c_str());
    }
    if (rc != 0) {
        o.pass = false;
        o.detail = "CLI invocation failed (binary: " VIRTSPIN_CLI_PATH ")";
    } else {
        const bool curve_ok =
            slurp(dir / "r1/stability_curve.csv") == slurp(dir / "r2/stability_curve.csv");
        const bool summary_ok = slurp(dir / "r1/stability_summary.json") ==
                                slurp(dir / "r2/stability_summary.json");
        o.pass = curve_ok && summary_ok;
        o.detail = std::string("repeated seeded stability runs byte-identical: curve ") +
                   (curve_ok ? "yes" : "NO") + ", summary " + (summary_ok ? "yes" : "NO");
    }
    std::error_code ec;
    fs::remove_all(dir, ec);
    return o;
}

}  // namespace

int main() {
    struct Item {
        const char* name;
        Outcome (*run)();
    };
    const Item items[] = {
        {"eigensystem closed forms", check_eigensystem},
        {"spectrum rules", check_spectrum},
        {"gate set", check_gates},
        {"RWA cross-validation", check_rwa},
        {"encoding stabilization", check_stabilization},
        {"perturbation hierarchy", check_perturbations},
        {"CLI determinism", check_determinism},
    };

    int failures = 0;
    int index = 0;
    for (const Item& item : items) {
        ++index;
        const auto start = std::chrono::steady_clock::now();
        const Outcome o = item.run();
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] %d %-26s %s  [%.2f s]\n", o.pass ? "PASS" : "FAIL", index,
                    item.name, o.detail.c_str(), secs);
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    if (failures == 0)
        std::printf("all %d acceptance checks passed\n", index);
    else
        std::printf("%d of %d acceptance checks FAILED\n", failures, index);
    return failures;
}
