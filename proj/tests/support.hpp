#pragma once

// Shared helpers for the unit tests: deterministic RNG (raw 64-bit mapping so
// sequences are platform-stable) and random matrix factories.

#include <cstdint>
#include <random>

#include "virtspin/qlin.hpp"

namespace testsupport {

using virtspin::qlin::CMatrix;
using virtspin::qlin::cplx;

struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}
    double unit() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }  // [0,1)
    double sym(double a = 1.0) { return a * (2.0 * unit() - 1.0); }         // [-a,a)
    cplx c(double a = 1.0) { return {sym(a), sym(a)}; }
};

inline CMatrix random_complex(Rng& rng, int n, double scale = 1.0) {
    CMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = rng.c(scale);
    return m;
}

inline CMatrix random_hermitian(Rng& rng, int n, double scale = 1.0) {
    CMatrix r = random_complex(rng, n, scale);
    CMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = 0.5 * (r(i, j) + std::conj(r(j, i)));
    return m;
}

}  // namespace testsupport
