#pragma once

// Two-qubit logical bases for the physical two-spin system.
//
// zeeman:       |00> = |-->, |01> = |-+>, |10> = |+->, |11> = |++>
//               (logical 0 <-> m = -1/2, first bit <-> the I spin)
// virtual_spin: |00> = E1, |01> = E2, |10> = E3, |11> = E4
//               (two fictitious spin-1/2 labels (mQ, mR); first bit <-> Q,
//                bit value 1 <-> m = +1/2: E1=(-,-), E2=(-,+), E3=(+,-),
//                E4=(+,+))

#include <array>

#include "virtspin/qlin.hpp"
#include "virtspin/spinsys.hpp"

namespace virtspin::encoding {

enum class EncodingScheme { zeeman, virtual_spin };

struct BasisMap {
    EncodingScheme scheme = EncodingScheme::zeeman;
    qlin::CMatrix matrix;  // column k = physical state of logical |k>, unitary
    BasisMap() : matrix(4) {}
};

struct LogicalState {
    std::array<qlin::cplx, 4> amps{};  // |00>, |01>, |10>, |11>
    double norm() const;
};

BasisMap basis_map(EncodingScheme scheme, const spinsys::Eigensystem& es);

// Throws std::invalid_argument unless the input is normalized to 1e-10.
qlin::StateVec encode(const LogicalState& l, const BasisMap& map);
LogicalState decode(const qlin::StateVec& v, const BasisMap& map);

// Diagonal resolution of the eigenenergies in the fictitious-spin labels:
//   E(mQ, mR) = e0 + a*mQ + b*mR + c*mQ*mR
struct VirtualZeemanCoeffs {
    double a = 0, b = 0, c = 0, e0 = 0;
    double energy(double mq, double mr) const { return e0 + a * mq + b * mr + c * mq * mr; }
};

VirtualZeemanCoeffs virtual_zeeman_decomposition(const spinsys::Eigensystem& es);

}  // namespace virtspin::encoding
