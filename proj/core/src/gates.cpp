#include "virtspin/gates.hpp"

#include <cmath>
#include <stdexcept>

namespace virtspin::gates {

using qlin::CMatrix;
using qlin::cplx;

namespace {

constexpr double kPi = std::numbers::pi;

// 2x2 rotation exp(-i angle/2 (cos(ax) X + sin(ax) Y))
CMatrix su2_rotation(double angle, double axis_phase) {
    CMatrix r(2);
    const double c = std::cos(0.5 * angle), s = std::sin(0.5 * angle);
    r(0, 0) = c;
    r(1, 1) = c;
    r(0, 1) = cplx(-s * std::sin(axis_phase), -s * std::cos(axis_phase));
    r(1, 0) = cplx(s * std::sin(axis_phase), -s * std::cos(axis_phase));
    return r;
}

void check_angle(double angle) {
    if (!std::isfinite(angle) || angle <= -2 * kPi || angle > 2 * kPi)
        throw std::invalid_argument("rotation angle must lie in (-2pi, 2pi]");
}

// Two simultaneous tones with a common Rabi rate on lines (a1,b1), (a2,b2).
pulse::PulseProgram two_tone_rotation(const spinsys::Eigensystem& es, double omega1,
                                      double angle, double axis_phase, int a1, int b1, int a2,
                                      int b2) {
    const double m1 = pulse::transition_matrix_element(a1, b1, es);
    const double m2 = pulse::transition_matrix_element(a2, b2, es);
    if (m1 * m1 <= 1e-12 || m2 * m2 <= 1e-12)
        throw std::invalid_argument(
            "rotation needs both lines allowed; a degenerate drive (delta ~ 0) suppresses the (" +
            std::to_string(a1) + "," + std::to_string(b1) + ")/(" + std::to_string(a2) + "," +
            std::to_string(b2) + ") pair");
    const double m_min = std::min(m1, m2);
    const double omega = omega1 * m_min;  // common Rabi rate; weaker line gets full omega1
    double phase = axis_phase;
    double ang = angle;
    if (ang < 0) {
        ang = -ang;
        phase += kPi;
    }
    pulse::PulseProgram prog;
    if (ang == 0) return prog;
    pulse::PulseSegment seg;
    seg.duration = ang / omega;
    seg.tones.push_back({std::abs(es.energies[a1 - 1] - es.energies[b1 - 1]),
                         omega1 * m_min / m1, phase});
    seg.tones.push_back({std::abs(es.energies[a2 - 1] - es.energies[b2 - 1]),
                         omega1 * m_min / m2, phase});
    prog.segments.push_back(std::move(seg));
    return prog;
}

}  // namespace

pulse::PulseProgram synthesize(const GateSpec& spec, const spinsys::Eigensystem& es,
                               double omega1) {
    if (!(omega1 > 0) || !std::isfinite(omega1))
        throw std::invalid_argument("omega1 must be positive");
    switch (spec.kind) {
        case GateKind::rot_q:
            check_angle(spec.angle);
            return two_tone_rotation(es, omega1, spec.angle, spec.axis_phase, 1, 3, 2, 4);
        case GateKind::rot_r:
            check_angle(spec.angle);
            return two_tone_rotation(es, omega1, spec.angle, spec.axis_phase, 1, 2, 3, 4);
        case GateKind::cnot_q_to_r:
            return pulse::calibrate_pi(3, 4, omega1, es);
        case GateKind::cnot_r_to_q:
            return pulse::calibrate_pi(2, 4, omega1, es);
    }
    throw std::invalid_argument("unknown gate kind");
}

qlin::CMatrix ideal_unitary(const GateSpec& spec) {
    switch (spec.kind) {
        case GateKind::rot_q:
            check_angle(spec.angle);
            return qlin::tensor(su2_rotation(spec.angle, spec.axis_phase),
                                CMatrix::identity(2));
        case GateKind::rot_r:
            check_angle(spec.angle);
            return qlin::tensor(CMatrix::identity(2),
                                su2_rotation(spec.angle, spec.axis_phase));
        case GateKind::cnot_q_to_r: {
            CMatrix u(4);  // |00>,|01> fixed; |10> <-> |11>
            u(0, 0) = 1;
            u(1, 1) = 1;
            u(3, 2) = 1;
            u(2, 3) = 1;
            return u;
        }
        case GateKind::cnot_r_to_q: {
            CMatrix u(4);  // |00>,|10> fixed; |01> <-> |11>
            u(0, 0) = 1;
            u(2, 2) = 1;
            u(3, 1) = 1;
            u(1, 3) = 1;
            return u;
        }
    }
    throw std::invalid_argument("unknown gate kind");
}

double phase_optimized_fidelity(const CMatrix& u_sim_logical, const CMatrix& u_ideal) {
    const CMatrix w = u_sim_logical * u_ideal.adjoint();
    double s = 0;
    for (int k = 0; k < 4; ++k) s += std::abs(w(k, k));
    return s * s / 16.0;
}

GateReport score(const pulse::PulseProgram& prog, const GateSpec& spec,
                 const spinsys::Eigensystem& es, const encoding::BasisMap& map,
                 double dt_max) {
    const CMatrix h0 = es.hamiltonian();
    const double total = prog.total_duration();
    const CMatrix u_lab = pulse::lab_propagator(prog, h0, dt_max).matrix;
    // undo the free evolution accumulated over the program window
    const CMatrix u_int = qlin::expm_i(h0, -total) * u_lab;
    const CMatrix u_logical = map.matrix.adjoint() * u_int * map.matrix;
    const CMatrix u_ideal = ideal_unitary(spec);

    GateReport rep;
    rep.duration = total;
    const cplx tr = (u_ideal.adjoint() * u_logical).trace();
    rep.fidelity_raw = std::norm(tr) / 16.0;
    rep.fidelity_phase_opt = phase_optimized_fidelity(u_logical, u_ideal);
    for (int in = 0; in < 4; ++in)
        for (int out = 0; out < 4; ++out)
            rep.truth_table[in][out] = std::norm(u_logical(out, in));
    return rep;
}

}  // namespace virtspin::gates
