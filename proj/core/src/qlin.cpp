#include "virtspin/qlin.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace virtspin::qlin {

namespace {

void check_dim(int dim) {
    if (dim != 2 && dim != 4)
        throw std::invalid_argument("matrix dimension must be 2 or 4");
}

}  // namespace

CMatrix::CMatrix(int dim) : dim_(dim) { check_dim(dim); }

CMatrix CMatrix::identity(int dim) {
    CMatrix m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::diag(std::span<const double> entries) {
    CMatrix m(static_cast<int>(entries.size()));
    for (int i = 0; i < m.dim_; ++i) m(i, i) = entries[i];
    return m;
}

CMatrix CMatrix::operator+(const CMatrix& o) const {
    if (dim_ != o.dim_) throw std::invalid_argument("dimension mismatch");
    CMatrix r(dim_);
    for (int i = 0; i < dim_ * dim_; ++i) r.a_[i] = a_[i] + o.a_[i];
    return r;
}

CMatrix CMatrix::operator-(const CMatrix& o) const {
    if (dim_ != o.dim_) throw std::invalid_argument("dimension mismatch");
    CMatrix r(dim_);
    for (int i = 0; i < dim_ * dim_; ++i) r.a_[i] = a_[i] - o.a_[i];
    return r;
}

CMatrix CMatrix::operator*(const CMatrix& o) const {
    if (dim_ != o.dim_) throw std::invalid_argument("dimension mismatch");
    CMatrix r(dim_);
    const int n = dim_;
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const cplx aik = a_[i * n + k];
            if (aik == cplx{}) continue;
            for (int j = 0; j < n; ++j) r.a_[i * n + j] += aik * o.a_[k * n + j];
        }
    return r;
}

CMatrix CMatrix::operator*(cplx s) const {
    CMatrix r(dim_);
    for (int i = 0; i < dim_ * dim_; ++i) r.a_[i] = a_[i] * s;
    return r;
}

CMatrix CMatrix::adjoint() const {
    CMatrix r(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) r(i, j) = std::conj((*this)(j, i));
    return r;
}

cplx CMatrix::trace() const {
    cplx t{};
    for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

double CMatrix::frobenius_norm() const {
    double s = 0;
    for (int i = 0; i < dim_ * dim_; ++i) s += std::norm(a_[i]);
    return std::sqrt(s);
}

double CMatrix::max_abs() const {
    double m = 0;
    for (int i = 0; i < dim_ * dim_; ++i) m = std::max(m, std::abs(a_[i]));
    return m;
}

double CMatrix::max_abs_diff(const CMatrix& o) const {
    double m = 0;
    for (int i = 0; i < dim_ * dim_; ++i) m = std::max(m, std::abs(a_[i] - o.a_[i]));
    return m;
}

double CMatrix::hermiticity_defect() const {
    double m = 0;
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return m;
}

StateVec::StateVec(int dim) : dim_(dim) { check_dim(dim); }

StateVec StateVec::basis(int dim, int k) {
    StateVec v(dim);
    if (k < 0 || k >= dim) throw std::invalid_argument("basis index out of range");
    v.a_[k] = 1.0;
    return v;
}

double StateVec::norm() const {
    double s = 0;
    for (int i = 0; i < dim_; ++i) s += std::norm(a_[i]);
    return std::sqrt(s);
}

CMatrix tensor(const CMatrix& a, const CMatrix& b) {
    if (a.dim() != 2 || b.dim() != 2)
        throw std::invalid_argument("tensor expects two 2x2 factors");
    CMatrix r(4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    r(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
    return r;
}

namespace {

double off_diag_frobenius(const CMatrix& m) {
    double s = 0;
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j)
            if (i != j) s += std::norm(m(i, j));
    return std::sqrt(s);
}

// One cyclic sweep of two-sided complex Jacobi rotations on a (zeroing a_pq).
// v accumulates the unitary.
void jacobi_sweep(CMatrix& a, CMatrix& v, double skip_below) {
    const int n = a.dim();
    for (int p = 0; p < n - 1; ++p) {
        for (int q = p + 1; q < n; ++q) {
            const cplx apq = a(p, q);
            const double zmag = std::abs(apq);
            if (zmag <= skip_below) continue;
            const double app = a(p, p).real();
            const double aqq = a(q, q).real();
            // annihilating a(p,q) needs |apq|(1 - t^2) + (aqq - app) t = 0,
            // i.e. t^2 - 2 tau t - 1 = 0; take the smaller-magnitude root.
            const double tau = (aqq - app) / (2.0 * zmag);
            const double t = (tau >= 0 ? -1.0 : 1.0) / (std::abs(tau) + std::hypot(1.0, tau));
            const double c = 1.0 / std::hypot(1.0, t);
            const double s = t * c;
            const cplx phase = apq / zmag;             // e^{i arg(apq)}
            const cplx u_pq = -s * phase;              // rotation columns: (c, s*conj(phase)) and (u_pq, c)
            const cplx u_qp = s * std::conj(phase);

            for (int k = 0; k < n; ++k) {              // A <- A U  (columns p,q)
                const cplx akp = a(k, p), akq = a(k, q);
                a(k, p) = akp * c + akq * u_qp;
                a(k, q) = akp * u_pq + akq * c;
            }
            for (int k = 0; k < n; ++k) {              // A <- U^dag A  (rows p,q)
                const cplx apk = a(p, k), aqk = a(q, k);
                a(p, k) = apk * c + aqk * std::conj(u_qp);
                a(q, k) = apk * std::conj(u_pq) + aqk * c;
            }
            for (int k = 0; k < n; ++k) {              // V <- V U
                const cplx vkp = v(k, p), vkq = v(k, q);
                v(k, p) = vkp * c + vkq * u_qp;
                v(k, q) = vkp * u_pq + vkq * c;
            }
            a(p, q) = 0.0;                             // zeroed by construction
            a(q, p) = 0.0;
        }
    }
}

}  // namespace

EigenDecomp hermitian_eigensystem(const CMatrix& m) {
    if (m.hermiticity_defect() > 1e-12)
        throw std::invalid_argument("hermitian_eigensystem: input is not Hermitian");

    const int n = m.dim();
    CMatrix a = m;
    CMatrix v = CMatrix::identity(n);

    const double scale = std::max(1.0, a.frobenius_norm());
    const double tol = 1e-14 * scale;
    const double skip = 1e-18 * scale;
    for (int sweep = 0; sweep < 50; ++sweep) {
        if (off_diag_frobenius(a) <= tol) break;
        jacobi_sweep(a, v, skip);
    }

    EigenDecomp d;
    d.dim = n;
    d.eigenvectors = CMatrix(n);

    std::array<int, 4> idx{0, 1, 2, 3};
    std::stable_sort(idx.begin(), idx.begin() + n,
                     [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

    for (int k = 0; k < n; ++k) {
        d.eigenvalues[k] = a(idx[k], idx[k]).real();
        for (int r = 0; r < n; ++r) d.eigenvectors(r, k) = v(r, idx[k]);
    }

    // Gram-Schmidt inside (near-)degenerate clusters, in index order, so the
    // returned basis is a deterministic function of the input alone.
    const double deg_tol = 1e-12 * scale;
    int start = 0;
    while (start < n) {
        int stop = start + 1;
        while (stop < n && d.eigenvalues[stop] - d.eigenvalues[stop - 1] <= deg_tol) ++stop;
        for (int k = start; k < stop; ++k) {
            for (int j = start; j < k; ++j) {
                cplx ov{};
                for (int r = 0; r < n; ++r)
                    ov += std::conj(d.eigenvectors(r, j)) * d.eigenvectors(r, k);
                for (int r = 0; r < n; ++r) d.eigenvectors(r, k) -= ov * d.eigenvectors(r, j);
            }
            double nrm = 0;
            for (int r = 0; r < n; ++r) nrm += std::norm(d.eigenvectors(r, k));
            nrm = std::sqrt(nrm);
            for (int r = 0; r < n; ++r) d.eigenvectors(r, k) = d.eigenvectors(r, k) * (1.0 / nrm);
        }
        start = stop;
    }

    // Phase convention: largest-|component| of each column made real positive
    // (first index wins ties).
    for (int k = 0; k < n; ++k) {
        int imax = 0;
        double amax = -1;
        for (int r = 0; r < n; ++r) {
            const double ar = std::abs(d.eigenvectors(r, k));
            if (ar > amax) { amax = ar; imax = r; }
        }
        const cplx pivot = d.eigenvectors(imax, k);
        if (std::abs(pivot) > 0) {
            const cplx ph = std::conj(pivot) / std::abs(pivot);
            for (int r = 0; r < n; ++r) d.eigenvectors(r, k) = d.eigenvectors(r, k) * ph;
            d.eigenvectors(imax, k) = cplx(std::abs(pivot), 0.0);
        }
    }
    return d;
}

CMatrix expm_i(const CMatrix& m, double t) {
    const EigenDecomp d = hermitian_eigensystem(m);
    const int n = m.dim();
    CMatrix r(n);
    std::array<cplx, 4> ph;
    for (int k = 0; k < n; ++k) {
        const double x = -d.eigenvalues[k] * t;
        ph[k] = cplx(std::cos(x), std::sin(x));
    }
    // r = V diag(ph) V^dag
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cplx s{};
            for (int k = 0; k < n; ++k)
                s += d.eigenvectors(i, k) * ph[k] * std::conj(d.eigenvectors(j, k));
            r(i, j) = s;
        }
    return r;
}

StateVec apply(const CMatrix& m, const StateVec& v) {
    if (m.dim() != v.dim()) throw std::invalid_argument("dimension mismatch");
    StateVec r(v.dim());
    for (int i = 0; i < m.dim(); ++i) {
        cplx s{};
        for (int j = 0; j < m.dim(); ++j) s += m(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

cplx inner(const StateVec& a, const StateVec& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
    cplx s{};
    for (int i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

}  // namespace virtspin::qlin
