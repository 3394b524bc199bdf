#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

namespace gcs {

using cplx = std::complex<double>;

/// 2x2 complex matrix with value semantics. The shared shape of the gain
/// matrix, the dissipation matrices, the Hamiltonian blocks and chi.
struct Mat2 {
    cplx m11{}, m12{}, m21{}, m22{};

    static Mat2 zero() { return {}; }
    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 ones() { return {1.0, 1.0, 1.0, 1.0}; }

    cplx det() const { return m11 * m22 - m12 * m21; }
    cplx trace() const { return m11 + m22; }

    Mat2 adjoint() const {
        return {std::conj(m11), std::conj(m21), std::conj(m12), std::conj(m22)};
    }

    // squared Frobenius norm
    double frobenius_sq() const {
        return std::norm(m11) + std::norm(m12) + std::norm(m21) + std::norm(m22);
    }

    // largest entrywise deviation from A = A^dagger
    double hermitian_defect() const {
        double d = std::abs(m12 - std::conj(m21));
        d = std::max(d, std::abs(cplx(0.0, m11.imag())));
        return std::max(d, std::abs(cplx(0.0, m22.imag())));
    }
    bool is_hermitian(double tol) const { return hermitian_defect() <= tol; }

    bool operator==(const Mat2&) const = default;
};

inline Mat2 operator+(const Mat2& a, const Mat2& b) {
    return {a.m11 + b.m11, a.m12 + b.m12, a.m21 + b.m21, a.m22 + b.m22};
}
inline Mat2 operator-(const Mat2& a, const Mat2& b) {
    return {a.m11 - b.m11, a.m12 - b.m12, a.m21 - b.m21, a.m22 - b.m22};
}
inline Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
            a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
}
inline Mat2 operator*(cplx s, const Mat2& a) {
    return {s * a.m11, s * a.m12, s * a.m21, s * a.m22};
}
inline Mat2 operator*(const Mat2& a, cplx s) { return s * a; }

struct Vec2 {
    cplx v1{}, v2{};
};

inline Vec2 operator*(const Mat2& a, const Vec2& x) {
    return {a.m11 * x.v1 + a.m12 * x.v2, a.m21 * x.v1 + a.m22 * x.v2};
}

/// Plain cofactor inverse; callers are responsible for gating on det().
inline Mat2 inverse(const Mat2& a) {
    const cplx d = a.det();
    return {a.m22 / d, -a.m12 / d, -a.m21 / d, a.m11 / d};
}

}  // namespace gcs
