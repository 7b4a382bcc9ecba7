#pragma once

// Logical one- and two-qubit operations on the virtual-spin basis, realized
// as resonant pulse programs:
//   rot_q:       simultaneous tones on the (1,3) and (2,4) lines
//   rot_r:       simultaneous tones on the (1,2) and (3,4) lines
//   cnot_q_to_r: single pi tone on the (3,4) line
//   cnot_r_to_q: single pi tone on the (2,4) line
// Rotations drive both lines at a common Rabi rate Omega = omega1 * m_min
// (the weaker line gets the full amplitude omega1), duration |angle| / Omega.

#include <array>
#include <numbers>

#include "virtspin/encoding.hpp"
#include "virtspin/pulse.hpp"
#include "virtspin/qlin.hpp"
#include "virtspin/spinsys.hpp"

namespace virtspin::gates {

enum class GateKind { rot_q, rot_r, cnot_q_to_r, cnot_r_to_q };

struct GateSpec {
    GateKind kind = GateKind::cnot_q_to_r;
    double angle = std::numbers::pi;   // rotations only; in (-2pi, 2pi]
    double axis_phase = 0.0;           // rotation axis in the logical xy plane
};

// angle == 0 returns an empty program (identity). Throws when a required
// line is forbidden (e.g. delta = 0 makes the (1,3)/(3,4) elements vanish).
pulse::PulseProgram synthesize(const GateSpec& spec, const spinsys::Eigensystem& es,
                               double omega1);

qlin::CMatrix ideal_unitary(const GateSpec& spec);

struct GateReport {
    double fidelity_raw = 0;        // |Tr(U_ideal^dag U_logical)|^2 / 16
    double fidelity_phase_opt = 0;  // max over diagonal logical phase corrections
    double duration = 0;
    std::array<std::array<double, 4>, 4> truth_table{};  // [input][output] populations
};

// Simulates the program in the lab frame, removes the free evolution
// (interaction picture at the program end), maps to the logical basis and
// scores against the ideal unitary.
GateReport score(const pulse::PulseProgram& prog, const GateSpec& spec,
                 const spinsys::Eigensystem& es, const encoding::BasisMap& map,
                 double dt_max = 1e-5);

// (sum_k |(u_sim u_ideal^dag)_kk|)^2 / 16 — the exact maximum of
// |Tr((D u_ideal)^dag u_sim)|^2/16 over diagonal phase matrices D.
double phase_optimized_fidelity(const qlin::CMatrix& u_sim_logical,
                                const qlin::CMatrix& u_ideal);

}  // namespace virtspin::gates
