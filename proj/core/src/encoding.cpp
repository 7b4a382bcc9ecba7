#include "virtspin/encoding.hpp"

#include <cmath>
#include <stdexcept>

namespace virtspin::encoding {

using qlin::cplx;
using qlin::StateVec;

double LogicalState::norm() const {
    double s = 0;
    for (const auto& a : amps) s += std::norm(a);
    return std::sqrt(s);
}

BasisMap basis_map(EncodingScheme scheme, const spinsys::Eigensystem& es) {
    BasisMap map;
    map.scheme = scheme;
    if (scheme == EncodingScheme::zeeman) {
        // logical k -> product state: |00>=|-->(3), |01>=|-+>(2), |10>=|+->(1), |11>=|++>(0)
        static constexpr std::array<int, 4> perm{3, 2, 1, 0};
        for (int k = 0; k < 4; ++k) map.matrix(perm[k], k) = 1.0;
    } else {
        map.matrix = es.eigenvector_matrix();
    }
    return map;
}

StateVec encode(const LogicalState& l, const BasisMap& map) {
    if (std::abs(l.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("logical state must be normalized");
    StateVec v(4);
    for (int r = 0; r < 4; ++r) {
        cplx s{};
        for (int k = 0; k < 4; ++k) s += map.matrix(r, k) * l.amps[k];
        v[r] = s;
    }
    return v;
}

LogicalState decode(const StateVec& v, const BasisMap& map) {
    if (std::abs(v.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("physical state must be normalized");
    LogicalState l;
    for (int k = 0; k < 4; ++k) {
        cplx s{};
        for (int r = 0; r < 4; ++r) s += std::conj(map.matrix(r, k)) * v[r];
        l.amps[k] = s;
    }
    return l;
}

VirtualZeemanCoeffs virtual_zeeman_decomposition(const spinsys::Eigensystem& es) {
    const auto& e = es.energies;  // labels (mQ,mR): E1=(-,-), E2=(-,+), E3=(+,-), E4=(+,+)
    VirtualZeemanCoeffs c;
    c.e0 = 0.25 * (e[0] + e[1] + e[2] + e[3]);
    c.a = 0.5 * ((e[2] + e[3]) - (e[0] + e[1]));
    c.b = 0.5 * ((e[1] + e[3]) - (e[0] + e[2]));
    c.c = e[0] - e[1] - e[2] + e[3];
    return c;
}

}  // namespace virtspin::encoding
