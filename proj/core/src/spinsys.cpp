#include "virtspin/spinsys.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace virtspin::spinsys {

using qlin::CMatrix;
using qlin::cplx;
using qlin::StateVec;

namespace {

CMatrix half_x() {
    CMatrix m(2);
    m(0, 1) = 0.5;
    m(1, 0) = 0.5;
    return m;
}
CMatrix half_y() {
    CMatrix m(2);
    m(0, 1) = cplx(0, -0.5);
    m(1, 0) = cplx(0, 0.5);
    return m;
}
CMatrix half_z() {
    CMatrix m(2);
    m(0, 0) = 0.5;
    m(1, 1) = -0.5;
    return m;
}

}  // namespace

SpinOps::SpinOps()
    : ix(qlin::tensor(half_x(), CMatrix::identity(2))),
      iy(qlin::tensor(half_y(), CMatrix::identity(2))),
      iz(qlin::tensor(half_z(), CMatrix::identity(2))),
      sx(qlin::tensor(CMatrix::identity(2), half_x())),
      sy(qlin::tensor(CMatrix::identity(2), half_y())),
      sz(qlin::tensor(CMatrix::identity(2), half_z())),
      i_dot_s(ix * sx + iy * sy + iz * sz) {}

SpinOps build_spin_ops() { return SpinOps{}; }

const SpinOps& spin_ops() {
    static const SpinOps ops;
    return ops;
}

std::vector<std::string> validate(const SystemParams& p) {
    if (!std::isfinite(p.omega0) || !std::isfinite(p.delta) || !std::isfinite(p.j_coupling))
        throw std::invalid_argument("system parameters must be finite");
    if (p.j_coupling < 0)
        throw std::invalid_argument("j_coupling must be >= 0");
    if (p.perturbation) {
        const auto& v = *p.perturbation;
        if (!std::isfinite(v.strength) || v.strength < 0)
            throw std::invalid_argument("perturbation strength must be finite and >= 0");
        if (v.ensemble_size < 1)
            throw std::invalid_argument("ensemble_size must be >= 1");
    }

    std::vector<std::string> warnings;
    const double theta = std::hypot(p.j_coupling, p.delta);
    if (p.omega0 < 10.0 * theta)
        warnings.push_back("omega0 = " + std::to_string(p.omega0) +
                           " is not large compared to theta = " + std::to_string(theta) +
                           "; level ordering may leave the weak-coupling regime");
    if (p.perturbation && theta > 0 && p.perturbation->strength >= 0.5 * theta)
        warnings.push_back("perturbation strength " + std::to_string(p.perturbation->strength) +
                           " is not small against theta = " + std::to_string(theta));
    return warnings;
}

std::array<double, 2> random_field_draw(const PerturbationSpec& spec, int ensemble_member) {
    if (ensemble_member < 0 || ensemble_member >= spec.ensemble_size)
        throw std::invalid_argument("ensemble member index out of range");
    std::seed_seq sq{static_cast<std::uint32_t>(spec.seed & 0xffffffffu),
                     static_cast<std::uint32_t>(spec.seed >> 32),
                     static_cast<std::uint32_t>(ensemble_member)};
    std::mt19937_64 rng(sq);
    auto unit = [&rng] { return (rng() >> 11) * 0x1.0p-53; };  // [0,1)
    const double d = spec.strength;
    const double hi = -d + 2.0 * d * unit();
    const double hs = -d + 2.0 * d * unit();
    return {hi, hs};
}

CMatrix build_hamiltonian(const SystemParams& p, bool include_perturbation, int ensemble_member) {
    validate(p);
    const SpinOps& op = spin_ops();
    CMatrix h = (op.iz + op.sz) * p.omega0 + (op.iz - op.sz) * (0.5 * p.delta) +
                op.i_dot_s * p.j_coupling;
    if (include_perturbation && p.perturbation) {
        const auto& v = *p.perturbation;
        switch (v.kind) {
            case PerturbationSpec::Kind::dipolar_zz:
                h = h + (op.iz * op.sz) * (2.0 * v.strength);
                break;
            case PerturbationSpec::Kind::random_local_fields: {
                const auto [hi, hs] = random_field_draw(v, ensemble_member);
                h = h + op.iz * hi + op.sz * hs;
                break;
            }
        }
    }
    return h;
}

std::array<double, 4> closed_form_energies(const SystemParams& p) {
    const double theta = std::hypot(p.j_coupling, p.delta);
    const double j4 = 0.25 * p.j_coupling;
    return {p.omega0 + j4, -j4 + 0.5 * theta, -j4 - 0.5 * theta, -p.omega0 + j4};
}

Eigensystem::Eigensystem()
    : energies{},
      states{StateVec(4), StateVec(4), StateVec(4), StateVec(4)} {}

CMatrix Eigensystem::eigenvector_matrix() const {
    CMatrix m(4);
    for (int k = 0; k < 4; ++k)
        for (int r = 0; r < 4; ++r) m(r, k) = states[k][r];
    return m;
}

CMatrix Eigensystem::hamiltonian() const {
    CMatrix h(4);
    for (int k = 0; k < 4; ++k)
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c)
                h(r, c) += energies[k] * states[k][r] * std::conj(states[k][c]);
    return h;
}

namespace {

// Multiply by a global phase so that vec[anchor] is real >= 0; if that
// component is negligible, anchor on `fallback` instead (real, sign per
// `fallback_sign`). Keeps the p/q structure continuous through phi -> 0, pi.
void fix_phase(StateVec& vec, int anchor, int fallback, int fallback_sign) {
    cplx c = vec[anchor];
    double sign = 1.0;
    if (std::abs(c) < 1e-8) {
        c = vec[fallback];
        sign = fallback_sign;
    }
    if (std::abs(c) == 0.0) return;
    const cplx ph = std::conj(c) / std::abs(c) * sign;
    for (int r = 0; r < 4; ++r) vec[r] = vec[r] * ph;
}

}  // namespace

Eigensystem diagonalize(const SystemParams& p) {
    const CMatrix h = build_hamiltonian(p, false);
    const qlin::EigenDecomp eig = qlin::hermitian_eigensystem(h);
    const std::array<double, 4> target = closed_form_energies(p);

    Eigensystem es;
    es.theta = std::hypot(p.j_coupling, p.delta);
    es.phi = std::atan2(p.j_coupling, p.delta);
    es.p = std::cos(0.5 * es.phi);
    es.q = std::sin(0.5 * es.phi);

    // Assign level labels by nearest closed-form energy (bijective greedy;
    // in-regime this is just descending order).
    std::array<int, 4> pick{-1, -1, -1, -1};
    std::array<bool, 4> used{};
    for (int k = 0; k < 4; ++k) {
        int best = -1;
        double bestd = 0;
        for (int i = 0; i < 4; ++i) {
            if (used[i]) continue;
            const double dd = std::abs(eig.eigenvalues[i] - target[k]);
            if (best < 0 || dd < bestd) { best = i; bestd = dd; }
        }
        pick[k] = best;
        used[best] = true;
    }
    for (int k = 0; k < 4; ++k) {
        es.energies[k] = eig.eigenvalues[pick[k]];
        for (int r = 0; r < 4; ++r) es.states[k][r] = eig.eigenvectors(r, pick[k]);
    }

    // Degenerate central doublet (theta ~ 0): eigenvalue order cannot separate
    // the labels, so project the analytic p/q combinations onto the numeric
    // eigenspace (still exact eigenvectors of the degenerate block).
    const double scale = std::max(1.0, h.frobenius_norm());
    if (std::abs(es.energies[1] - es.energies[2]) <= 1e-9 * scale) {
        StateVec r2(4), r3(4);
        r2[1] = es.p; r2[2] = es.q;
        r3[1] = -es.q; r3[2] = es.p;
        const StateVec va = es.states[1], vb = es.states[2];
        auto project = [&](const StateVec& ref) {
            StateVec out(4);
            const cplx ca = qlin::inner(va, ref), cb = qlin::inner(vb, ref);
            for (int r = 0; r < 4; ++r) out[r] = va[r] * ca + vb[r] * cb;
            return out;
        };
        StateVec w2 = project(r2);
        StateVec w3 = project(r3);
        const cplx ov = qlin::inner(w2, w3);
        const double n2 = w2.norm();
        for (int r = 0; r < 4; ++r) w2[r] = w2[r] * (1.0 / n2);
        for (int r = 0; r < 4; ++r) w3[r] -= ov / (n2 * n2) * w2[r];
        const double n3 = w3.norm();
        for (int r = 0; r < 4; ++r) w3[r] = w3[r] * (1.0 / n3);
        es.states[1] = w2;
        es.states[2] = w3;
    }

    fix_phase(es.states[0], 0, 1, +1);
    fix_phase(es.states[1], 1, 2, +1);   // <+-|E2> = p >= 0, fallback <-+|E2> = q
    fix_phase(es.states[2], 2, 1, -1);   // <-+|E3> = p >= 0, fallback <+-|E3> = -q
    fix_phase(es.states[3], 3, 2, +1);
    return es;
}

}  // namespace virtspin::spinsys
