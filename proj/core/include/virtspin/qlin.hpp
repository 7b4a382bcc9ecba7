#pragma once

// Small dense complex-Hermitian linear algebra, fixed capacity 4.
// Deterministic: fixed cyclic Jacobi sweep order, deterministic
// eigenvector phase convention, no parallelism, no allocation in the
// eigensolver hot path.

#include <array>
#include <complex>
#include <span>

namespace virtspin::qlin {

using cplx = std::complex<double>;

class CMatrix {
public:
    explicit CMatrix(int dim);
    static CMatrix identity(int dim);
    static CMatrix diag(std::span<const double> entries);

    int dim() const { return dim_; }

    cplx& operator()(int r, int c) { return a_[r * dim_ + c]; }
    const cplx& operator()(int r, int c) const { return a_[r * dim_ + c]; }

    CMatrix operator+(const CMatrix& o) const;
    CMatrix operator-(const CMatrix& o) const;
    CMatrix operator*(const CMatrix& o) const;
    CMatrix operator*(cplx s) const;
    CMatrix adjoint() const;
    cplx trace() const;

    double frobenius_norm() const;
    double max_abs() const;                     // max entry magnitude
    double max_abs_diff(const CMatrix& o) const;
    double hermiticity_defect() const;          // max |a_rc - conj(a_cr)|

private:
    int dim_;
    std::array<cplx, 16> a_{};
};

class StateVec {
public:
    explicit StateVec(int dim);
    static StateVec basis(int dim, int k);

    int dim() const { return dim_; }
    cplx& operator[](int i) { return a_[i]; }
    const cplx& operator[](int i) const { return a_[i]; }

    double norm() const;

private:
    int dim_;
    std::array<cplx, 4> a_{};
};

struct EigenDecomp {
    int dim = 0;
    std::array<double, 4> eigenvalues{};  // ascending
    CMatrix eigenvectors;                 // column k <-> eigenvalues[k]
    EigenDecomp() : eigenvectors(2) {}
};

// Kronecker product of two 2x2 matrices (first factor = spin I, second = spin S).
CMatrix tensor(const CMatrix& a, const CMatrix& b);

// Cyclic complex Jacobi. Input must be Hermitian (max |M - M^dag| <= 1e-12).
// Eigenvalues ascending; eigenvectors orthonormal, degenerate clusters
// re-orthonormalized in index order; each column phased so its
// largest-magnitude component is real positive.
EigenDecomp hermitian_eigensystem(const CMatrix& m);

// exp(-i m t) for Hermitian m, via the eigensystem (exactly unitary up to roundoff).
CMatrix expm_i(const CMatrix& m, double t);

StateVec apply(const CMatrix& m, const StateVec& v);
cplx inner(const StateVec& a, const StateVec& b);  // <a|b>, conjugate-linear in a

}  // namespace virtspin::qlin
