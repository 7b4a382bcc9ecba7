#pragma once

// Two coupled spin-1/2 nuclei (heteronuclear AX-type system), hbar = 1.
//   H = omega0*(Iz+Sz) + (delta/2)*(Iz-Sz) + J*(I.S) [+ V]
// Product basis order: |++>, |+->, |-+>, |--> with the I spin's m first.
// Level labels follow descending energy in the operating regime
// omega0 >> theta, theta = sqrt(J^2 + delta^2):
//   E1 = |++>,  E2 = p|+-> + q|-+>,  E3 = p|-+> - q|+->,  E4 = |-->
// with p = cos(phi/2), q = sin(phi/2), phi = atan2(J, delta) in [0, pi).

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "virtspin/qlin.hpp"

namespace virtspin::spinsys {

struct PerturbationSpec {
    enum class Kind { dipolar_zz, random_local_fields };
    Kind kind = Kind::dipolar_zz;
    double strength = 0.0;          // d, rad/s
    std::uint64_t seed = 0;
    int ensemble_size = 256;        // used by random_local_fields only
};

struct SystemParams {
    double omega0 = 0.0;            // mean Zeeman frequency, rad/s
    double delta = 0.0;             // Zeeman frequency difference, rad/s
    double j_coupling = 0.0;        // scalar coupling J >= 0, rad/s
    std::optional<PerturbationSpec> perturbation;
};

// Throws std::invalid_argument on hard errors (j_coupling < 0, non-finite
// values, bad ensemble size); returns human-readable warnings for parameter
// sets outside the weak-coupling operating regime.
std::vector<std::string> validate(const SystemParams& p);

struct SpinOps {
    qlin::CMatrix ix, iy, iz, sx, sy, sz;
    qlin::CMatrix i_dot_s;          // IxSx + IySy + IzSz
    SpinOps();
};

SpinOps build_spin_ops();
const SpinOps& spin_ops();          // shared immutable instance

// Static Hamiltonian in the product basis. With include_perturbation, adds
//   dipolar_zz:           V = 2d * IzSz
//   random_local_fields:  V = hI*Iz + hS*Sz, hI,hS ~ U[-d,d] per (seed, member)
qlin::CMatrix build_hamiltonian(const SystemParams& p, bool include_perturbation,
                                int ensemble_member = 0);

// The (hI, hS) draw for one ensemble member; deterministic in (seed, member).
std::array<double, 2> random_field_draw(const PerturbationSpec& spec, int ensemble_member);

struct Eigensystem {
    std::array<double, 4> energies;       // E1..E4, descending in-regime
    std::array<qlin::StateVec, 4> states; // matching eigenvectors
    double theta = 0, phi = 0, p = 1, q = 0;

    qlin::CMatrix eigenvector_matrix() const;  // columns = states
    qlin::CMatrix hamiltonian() const;         // sum_k E_k |k><k|
    Eigensystem();
};

// Numeric diagonalization (Jacobi) with the level-label and phase conventions
// above. phi is continuous through J -> 0+: phi -> 0 for delta > 0, pi for
// delta < 0.
Eigensystem diagonalize(const SystemParams& p);

// (omega0 + J/4, -J/4 + theta/2, -J/4 - theta/2, -omega0 + J/4)
std::array<double, 4> closed_form_energies(const SystemParams& p);

}  // namespace virtspin::spinsys
