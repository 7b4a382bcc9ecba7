#pragma once

// Resonant pulse programs and their propagators.
//
// Lab-frame drive convention (global clock; t runs continuously from 0
// across the whole program):
//   H(t) = H0 + sum_tones amplitude * cos(carrier*t + phase) * (Ix + Sx)
// so a tone of amplitude w1 has co-rotating amplitude w1/2 and drives the
// (j,k) transition at effective Rabi rate Omega = w1 * |<Ej|Ix+Sx|Ek>|.
//
// rwa_propagator drops everything except the static co-rotating term of each
// tone at its resonant transition (a direct sum of two-level rotors when the
// driven pairs are disjoint) and returns the interaction-picture propagator:
//   U_lab ~= expm_i(H0, T) * rwa_propagator(...).matrix

#include <span>
#include <string>
#include <vector>

#include "virtspin/qlin.hpp"
#include "virtspin/spinsys.hpp"

namespace virtspin::pulse {

struct PulseTone {
    double carrier = 0;    // rad/s, >= 0
    double amplitude = 0;  // peak amplitude w1, rad/s, >= 0
    double phase = 0;      // rad
};

struct PulseSegment {
    std::vector<PulseTone> tones;  // at most 2; empty = free evolution
    double duration = 0;           // s, > 0
};

struct PulseProgram {
    std::vector<PulseSegment> segments;
    double total_duration() const;
};

// Throws std::invalid_argument on malformed programs (non-positive durations,
// >2 simultaneous tones, negative amplitudes/carriers, non-finite values).
void validate_program(const PulseProgram& prog);

// Soft diagnostics: tones whose amplitude exceeds 0.2x the gap to the nearest
// other allowed line (poor selectivity), or tones resonant with nothing.
std::vector<std::string> selectivity_warnings(const PulseProgram& prog,
                                              const spinsys::Eigensystem& es);

struct Propagator {
    qlin::CMatrix matrix;
    Propagator() : matrix(qlin::CMatrix::identity(4)) {}
};

qlin::CMatrix drive_operator(const spinsys::SpinOps& ops);  // Ix + Sx

// |<E_j|Ix+Sx|E_k>| for 1-based level labels.
double transition_matrix_element(int level_j, int level_k, const spinsys::Eigensystem& es);

// Midpoint-rule product integrator with one exact exponential per step
// (unitary to roundoff). Step size <= min(dt_max, 1/(50*scale)) where scale
// covers both H0 and the carriers. Tone-free segments are propagated with a
// single exact exponential.
Propagator lab_propagator(const PulseProgram& prog, const qlin::CMatrix& h0, double dt_max);

// Cumulative lab propagators U(0 -> t_i) at the requested times (ascending,
// within [0, total_duration]); emission times are hit exactly by splitting
// integration intervals at them.
std::vector<qlin::CMatrix> lab_propagator_trace(const PulseProgram& prog,
                                                const qlin::CMatrix& h0, double dt_max,
                                                std::span<const double> times);

// Every tone must be resonant (1e-6 relative) with an allowed transition;
// otherwise throws std::invalid_argument naming the nearest allowed line.
Propagator rwa_propagator(const PulseProgram& prog, const spinsys::Eigensystem& es);

// Single resonant tone of amplitude omega1 on (level_j, level_k) with
// duration pi / (omega1 * |<Ej|Ix+Sx|Ek>|): a population-inverting pi-pulse.
// Throws for forbidden transitions (|matrix element|^2 <= 1e-12).
PulseProgram calibrate_pi(int level_j, int level_k, double omega1,
                          const spinsys::Eigensystem& es);

std::string program_to_json(const PulseProgram& prog);
PulseProgram program_from_json(const std::string& text);

}  // namespace virtspin::pulse
