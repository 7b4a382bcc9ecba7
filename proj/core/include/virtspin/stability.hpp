#pragma once

// Free-evolution fidelity of encoded logical states.
//
// A logical state is prepared through its encoding, evolved under the full
// static Hamiltonian (including the perturbation, when one is configured),
// and compared with the reference evolution generated by the encoding's own
// Hamiltonian:
//   zeeman:       H_enc = omega0*(Iz+Sz) + (delta/2)*(Iz-Sz)
//   virtual_spin: H_enc = full H (V = 0)
// F(t) = |<psi_ref(t)|psi(t)>|^2; random-field ensembles average F(t) over
// members (per-member deterministic seeding).

#include <span>
#include <vector>

#include "virtspin/encoding.hpp"
#include "virtspin/spinsys.hpp"

namespace virtspin::stability {

// 'points' samples, uniform on [0, periods * 2*pi/theta]. The first dip of
// the Zeeman-encoded mixed-sector states (t = pi/theta) lands exactly on a
// grid node. Falls back to a 1-second window when theta == 0.
std::vector<double> default_time_grid(double theta, int points = 2001, double periods = 50.0);

std::vector<double> encoded_fidelity(const encoding::LogicalState& state,
                                     encoding::EncodingScheme scheme,
                                     const spinsys::SystemParams& params,
                                     std::span<const double> times);

struct StabilityReport {
    std::vector<double> times;
    std::vector<double> fidelity_zeeman;
    std::vector<double> fidelity_virtual;
    double zeeman_dip_amplitude = 0;    // 1 - min F_zeeman
    double virtual_max_infidelity = 0;  // 1 - min F_virtual
    double t1_estimate = 0;             // first zeeman crossing below threshold
    double t2_estimate = 0;             // first virtual crossing below threshold
};

// Crossing times are linearly interpolated between the bracketing samples;
// +inf when the curve never drops below the threshold in the window.
StabilityReport compare_encodings(const encoding::LogicalState& state,
                                  const spinsys::SystemParams& params,
                                  std::span<const double> times, double threshold);

struct ScalingRow {
    double value = 0;           // swept J or d
    double theta = 0;
    double first_min_time = 0;  // J rows: time of the first zeeman fidelity minimum
    double max_infidelity = 0;  // d rows: 1 - min averaged virtual fidelity
};

struct ScalingTable {
    std::vector<ScalingRow> j_rows;
    std::vector<ScalingRow> d_rows;
    double zeeman_time_exponent = 0;        // log-log slope of first_min_time vs theta
    double virtual_infidelity_exponent = 0; // log-log slope of max_infidelity vs d
};

// J sweep: V = 0, logical |01>, zeeman encoding, default grid per theta(J).
// d sweep: logical |01>, virtual encoding, perturbation kind/seed/ensemble
// taken from base.perturbation (required when d_values is non-empty).
ScalingTable timescale_scaling_sweep(const spinsys::SystemParams& base,
                                     std::span<const double> j_values,
                                     std::span<const double> d_values);

}  // namespace virtspin::stability
