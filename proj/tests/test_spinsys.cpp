#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <set>

#include "support.hpp"
#include "virtspin/spinsys.hpp"

using namespace virtspin;
using qlin::CMatrix;
using qlin::cplx;
using qlin::StateVec;
using Catch::Approx;
using testsupport::Rng;

namespace {

// Independent construction of the spin operators from the basis-index bits:
// index 0..3 = |++>, |+->, |-+>, |-->; bit 1 (value 2) is the I spin,
// bit 0 the S spin, with bit set <-> m = -1/2.
double m_of(int idx, int spin_bit) { return (idx & spin_bit) ? -0.5 : 0.5; }

CMatrix expected_op(char axis, int spin_bit) {
    CMatrix m(4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            if (axis == 'z') {
                if (r == c) m(r, c) = m_of(c, spin_bit);
            } else if ((r ^ c) == spin_bit) {
                // single flip of the chosen spin: <r|Ix|c> = 1/2,
                // <r|Iy|c> = -i/2 when the flip lowers m (r above c), +i/2 when it raises
                if (axis == 'x') m(r, c) = 0.5;
                if (axis == 'y') m(r, c) = (r < c) ? cplx(0, -0.5) : cplx(0, 0.5);
            }
        }
    return m;
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

spinsys::SystemParams params345() {
    spinsys::SystemParams p;
    p.omega0 = 500.0;
    p.delta = 40.0;
    p.j_coupling = 30.0;
    return p;
}

}  // namespace

TEST_CASE("spin operators match the bit-indexed construction", "[spinsys]") {
    const spinsys::SpinOps& op = spinsys::spin_ops();
    CHECK(op.ix.max_abs_diff(expected_op('x', 2)) < 1e-15);
    CHECK(op.iy.max_abs_diff(expected_op('y', 2)) < 1e-15);
    CHECK(op.iz.max_abs_diff(expected_op('z', 2)) < 1e-15);
    CHECK(op.sx.max_abs_diff(expected_op('x', 1)) < 1e-15);
    CHECK(op.sy.max_abs_diff(expected_op('y', 1)) < 1e-15);
    CHECK(op.sz.max_abs_diff(expected_op('z', 1)) < 1e-15);
}

TEST_CASE("spin operators satisfy the su(2) algebra", "[spinsys]") {
    const spinsys::SpinOps& op = spinsys::spin_ops();

    // [Ia, Ib] = i eps_abc Ic, same for S
    CHECK(commutator(op.ix, op.iy).max_abs_diff(op.iz * cplx(0, 1)) < 1e-15);
    CHECK(commutator(op.iy, op.iz).max_abs_diff(op.ix * cplx(0, 1)) < 1e-15);
    CHECK(commutator(op.iz, op.ix).max_abs_diff(op.iy * cplx(0, 1)) < 1e-15);
    CHECK(commutator(op.sx, op.sy).max_abs_diff(op.sz * cplx(0, 1)) < 1e-15);

    // different spins commute
    for (const CMatrix* a : {&op.ix, &op.iy, &op.iz})
        for (const CMatrix* b : {&op.sx, &op.sy, &op.sz})
            CHECK(commutator(*a, *b).max_abs() < 1e-15);

    // Casimir I^2 = S^2 = (3/4) 1
    const CMatrix i2 = op.ix * op.ix + op.iy * op.iy + op.iz * op.iz;
    const CMatrix s2 = op.sx * op.sx + op.sy * op.sy + op.sz * op.sz;
    CHECK(i2.max_abs_diff(CMatrix::identity(4) * 0.75) < 1e-15);
    CHECK(s2.max_abs_diff(CMatrix::identity(4) * 0.75) < 1e-15);
}

TEST_CASE("I.S has the singlet-triplet spectrum", "[spinsys]") {
    const spinsys::SpinOps& op = spinsys::spin_ops();

    // explicit entries: diag(1/4,-1/4,-1/4,1/4), central flip-flop 1/2
    CMatrix expect(4);
    expect(0, 0) = 0.25;
    expect(1, 1) = -0.25;
    expect(2, 2) = -0.25;
    expect(3, 3) = 0.25;
    expect(1, 2) = 0.5;
    expect(2, 1) = 0.5;
    CHECK(op.i_dot_s.max_abs_diff(expect) < 1e-15);

    // minimal polynomial (x - 1/4)(x + 3/4) = 0
    const CMatrix x = op.i_dot_s;
    const CMatrix poly = x * x + x * 0.5 - CMatrix::identity(4) * (3.0 / 16.0);
    CHECK(poly.max_abs() < 1e-15);
}

TEST_CASE("static Hamiltonian entries at the 3-4-5 point", "[spinsys]") {
    const CMatrix h = spinsys::build_hamiltonian(params345(), false);

    CMatrix expect(4);
    expect(0, 0) = 507.5;   // omega0 + J/4
    expect(1, 1) = 12.5;    // delta/2 - J/4
    expect(2, 2) = -27.5;   // -delta/2 - J/4
    expect(3, 3) = -492.5;  // -omega0 + J/4
    expect(1, 2) = 15.0;    // J/2 flip-flop
    expect(2, 1) = 15.0;
    CHECK(h.max_abs_diff(expect) < 1e-12);
    CHECK(h.hermiticity_defect() < 1e-15);
}

TEST_CASE("eigensystem at the 3-4-5 point", "[spinsys]") {
    const spinsys::Eigensystem es = spinsys::diagonalize(params345());

    CHECK(es.theta == Approx(50.0).margin(1e-12));
    CHECK(es.phi == Approx(std::atan2(30.0, 40.0)).margin(1e-14));
    const double p = std::sqrt(0.9), q = std::sqrt(0.1);
    CHECK(es.p == Approx(p).margin(1e-12));
    CHECK(es.q == Approx(q).margin(1e-12));

    CHECK(es.energies[0] == Approx(507.5).margin(1e-9));
    CHECK(es.energies[1] == Approx(17.5).margin(1e-9));
    CHECK(es.energies[2] == Approx(-32.5).margin(1e-9));
    CHECK(es.energies[3] == Approx(-492.5).margin(1e-9));

    // E1 = |++>, E4 = |-->, phases fixed real positive
    CHECK(std::abs(es.states[0][0] - 1.0) < 1e-9);
    CHECK(std::abs(es.states[3][3] - 1.0) < 1e-9);

    // E2 = p|+-> + q|-+>, E3 = p|-+> - q|+->
    CHECK(std::abs(es.states[1][1] - p) < 1e-9);
    CHECK(std::abs(es.states[1][2] - q) < 1e-9);
    CHECK(std::abs(es.states[1][0]) < 1e-9);
    CHECK(std::abs(es.states[1][3]) < 1e-9);
    CHECK(std::abs(es.states[2][1] + q) < 1e-9);
    CHECK(std::abs(es.states[2][2] - p) < 1e-9);

    // label energies recompose as e0 +- a/2 +- b/2 +- c/4 is exercised in the
    // encoding tests; here check the raw sums used there
    CHECK(es.energies[0] + es.energies[3] == Approx(2.0 * 7.5).margin(1e-9));
    CHECK(es.energies[1] + es.energies[2] == Approx(-2.0 * 7.5).margin(1e-9));
}

TEST_CASE("closed-form energies match diagonalization for random parameters", "[spinsys]") {
    Rng rng(0x5331);
    for (int trial = 0; trial < 200; ++trial) {
        spinsys::SystemParams p;
        p.omega0 = rng.sym(1000.0);
        p.delta = rng.sym(100.0);
        p.j_coupling = 0.5 + 99.5 * rng.unit();

        const CMatrix h = spinsys::build_hamiltonian(p, false);
        const double scale = std::max(1.0, h.frobenius_norm());
        const spinsys::Eigensystem es = spinsys::diagonalize(p);
        const std::array<double, 4> cf = spinsys::closed_form_energies(p);

        for (int k = 0; k < 4; ++k) {
            CHECK(std::abs(es.energies[k] - cf[k]) < 1e-9 * scale);

            // eigen residual ||H v - E v||
            StateVec hv = qlin::apply(h, es.states[k]);
            double res = 0;
            for (int r = 0; r < 4; ++r) res += std::norm(hv[r] - es.energies[k] * es.states[k][r]);
            CHECK(std::sqrt(res) < 1e-10 * scale);
        }

        // eigenvectors follow the p/q closed form (central block is
        // omega0-independent)
        const double pp = std::cos(0.5 * std::atan2(p.j_coupling, p.delta));
        const double qq = std::sin(0.5 * std::atan2(p.j_coupling, p.delta));
        CHECK(std::abs(es.states[1][1] - pp) < 1e-7);
        CHECK(std::abs(es.states[1][2] - qq) < 1e-7);
        CHECK(std::abs(es.states[2][1] + qq) < 1e-7);
        CHECK(std::abs(es.states[2][2] - pp) < 1e-7);

        // column-unitary eigenvector matrix, spectral recomposition
        const CMatrix v = es.eigenvector_matrix();
        CHECK((v.adjoint() * v).max_abs_diff(CMatrix::identity(4)) < 1e-12);
        CHECK(es.hamiltonian().max_abs_diff(h) < 1e-9 * scale);
    }
}

TEST_CASE("central doublet stays labelled through J -> 0 for both delta signs", "[spinsys]") {
    for (const double delta : {40.0, -40.0}) {
        spinsys::SystemParams p;
        p.omega0 = 500.0;
        p.delta = delta;

        std::array<double, 3> js{1e-9, 1e-3, 0.0};
        for (const double j : js) {
            p.j_coupling = j;
            const spinsys::Eigensystem es = spinsys::diagonalize(p);
            if (delta > 0) {
                // phi -> 0: E2 -> |+->, E3 -> |-+>
                CHECK(std::abs(es.states[1][1] - 1.0) < 1e-4);
                CHECK(std::abs(es.states[2][2] - 1.0) < 1e-4);
            } else {
                // phi -> pi: E2 -> |-+>, E3 -> -|+->
                CHECK(std::abs(es.states[1][2] - 1.0) < 1e-4);
                CHECK(std::abs(es.states[2][1] + 1.0) < 1e-4);
            }
            CHECK(es.energies[1] == Approx(-0.25 * j + 0.5 * es.theta).margin(1e-9));
        }
    }
}

TEST_CASE("degenerate theta = 0 point keeps an orthonormal labelled basis", "[spinsys]") {
    spinsys::SystemParams p;
    p.omega0 = 500.0;
    p.delta = 0.0;
    p.j_coupling = 0.0;
    const spinsys::Eigensystem es = spinsys::diagonalize(p);
    const CMatrix v = es.eigenvector_matrix();
    CHECK((v.adjoint() * v).max_abs_diff(CMatrix::identity(4)) < 1e-12);
    CHECK(es.energies[1] == Approx(0.0).margin(1e-12));
    CHECK(es.energies[2] == Approx(0.0).margin(1e-12));
    // phi = atan2(0, 0) = 0 convention: E2 projects to |+->
    CHECK(std::abs(es.states[1][1] - 1.0) < 1e-9);
}

TEST_CASE("parameter validation", "[spinsys]") {
    spinsys::SystemParams p = params345();
    CHECK(spinsys::validate(p).empty());

    p.omega0 = 100.0;  // < 10 * theta = 500
    const auto warns = spinsys::validate(p);
    REQUIRE_FALSE(warns.empty());
    CHECK(warns.front().find("omega0") != std::string::npos);

    p = params345();
    p.j_coupling = -1.0;
    CHECK_THROWS_AS(spinsys::validate(p), std::invalid_argument);

    p = params345();
    p.delta = std::nan("");
    CHECK_THROWS_AS(spinsys::validate(p), std::invalid_argument);

    p = params345();
    p.perturbation = spinsys::PerturbationSpec{};
    p.perturbation->strength = -0.5;
    CHECK_THROWS_AS(spinsys::validate(p), std::invalid_argument);

    p.perturbation->strength = 1.0;
    p.perturbation->ensemble_size = 0;
    CHECK_THROWS_AS(spinsys::validate(p), std::invalid_argument);

    // strong perturbation relative to theta draws a warning
    p.perturbation->ensemble_size = 16;
    p.perturbation->strength = 40.0;
    CHECK_FALSE(spinsys::validate(p).empty());
}

TEST_CASE("dipolar zz perturbation adds the exact diagonal", "[spinsys]") {
    spinsys::SystemParams p = params345();
    p.perturbation = spinsys::PerturbationSpec{};
    p.perturbation->kind = spinsys::PerturbationSpec::Kind::dipolar_zz;
    p.perturbation->strength = 7.0;

    const CMatrix v =
        spinsys::build_hamiltonian(p, true) - spinsys::build_hamiltonian(p, false);
    const double d2[4] = {3.5, -3.5, -3.5, 3.5};
    CHECK(v.max_abs_diff(CMatrix::diag(d2)) < 1e-12);

    // commutes with the unperturbed Hamiltonian (equal diagonal entries on
    // the +-/-+ flip-flop block)
    const CMatrix h0 = spinsys::build_hamiltonian(p, false);
    CHECK((h0 * v - v * h0).max_abs() < 1e-12);
}

TEST_CASE("random field draws are deterministic, bounded, and member-distinct", "[spinsys]") {
    spinsys::PerturbationSpec spec;
    spec.kind = spinsys::PerturbationSpec::Kind::random_local_fields;
    spec.strength = 2.5;
    spec.seed = 0x1234abcd9876ULL;
    spec.ensemble_size = 512;

    const auto a = spinsys::random_field_draw(spec, 17);
    const auto b = spinsys::random_field_draw(spec, 17);
    CHECK(a[0] == b[0]);
    CHECK(a[1] == b[1]);

    std::set<double> seen;
    double mean_i = 0, max_abs = 0;
    for (int m = 0; m < spec.ensemble_size; ++m) {
        const auto [hi, hs] = spinsys::random_field_draw(spec, m);
        CHECK(std::abs(hi) <= spec.strength);
        CHECK(std::abs(hs) <= spec.strength);
        seen.insert(hi);
        mean_i += hi;
        max_abs = std::max({max_abs, std::abs(hi), std::abs(hs)});
    }
    CHECK(seen.size() == 512);                       // all members distinct
    CHECK(std::abs(mean_i / 512) < 0.15 * spec.strength);
    CHECK(max_abs > 0.9 * spec.strength);            // range actually exercised

    // different seed, different draw
    spinsys::PerturbationSpec other = spec;
    other.seed += 1;
    CHECK(spinsys::random_field_draw(other, 17)[0] != a[0]);

    CHECK_THROWS_AS(spinsys::random_field_draw(spec, -1), std::invalid_argument);
    CHECK_THROWS_AS(spinsys::random_field_draw(spec, 512), std::invalid_argument);
}

TEST_CASE("random field Hamiltonian matches its draw", "[spinsys]") {
    spinsys::SystemParams p = params345();
    p.perturbation = spinsys::PerturbationSpec{};
    p.perturbation->kind = spinsys::PerturbationSpec::Kind::random_local_fields;
    p.perturbation->strength = 1.25;
    p.perturbation->seed = 99;
    p.perturbation->ensemble_size = 8;

    for (int m = 0; m < 8; ++m) {
        const auto [hi, hs] = spinsys::random_field_draw(*p.perturbation, m);
        const CMatrix v =
            spinsys::build_hamiltonian(p, true, m) - spinsys::build_hamiltonian(p, false);
        const double diag[4] = {0.5 * (hi + hs), 0.5 * (hi - hs), 0.5 * (hs - hi),
                                -0.5 * (hi + hs)};
        CHECK(v.max_abs_diff(CMatrix::diag(diag)) < 1e-12);
    }
}

TEST_CASE("diagonalization ignores the perturbation", "[spinsys]") {
    spinsys::SystemParams p = params345();
    p.perturbation = spinsys::PerturbationSpec{};
    p.perturbation->kind = spinsys::PerturbationSpec::Kind::dipolar_zz;
    p.perturbation->strength = 5.0;
    const spinsys::Eigensystem with = spinsys::diagonalize(p);
    p.perturbation.reset();
    const spinsys::Eigensystem without = spinsys::diagonalize(p);
    for (int k = 0; k < 4; ++k)
        CHECK(with.energies[k] == Approx(without.energies[k]).margin(1e-12));
}
