// linalg.hpp - closed-form 2x2 complex linear algebra for a single qubit

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include "qthermo/errors.hpp"

namespace qthermo {

using cplx = std::complex<double>;

// Column 2-vector in the {|0>, |1>} basis.
using Ket = std::array<cplx, 2>;

inline constexpr double kPi = 3.14159265358979323846;

/// 2x2 complex matrix, row-major (a00, a01, a10, a11).
struct ComplexMat2 {
    cplx a00{}, a01{}, a10{}, a11{};

    static constexpr ComplexMat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static constexpr ComplexMat2 zero() { return {}; }
    static constexpr ComplexMat2 diag(cplx d0, cplx d1) { return {d0, 0.0, 0.0, d1}; }

    constexpr cplx trace() const { return a00 + a11; }
    constexpr cplx det() const { return a00 * a11 - a01 * a10; }

    ComplexMat2 adjoint() const {
        return {std::conj(a00), std::conj(a10), std::conj(a01), std::conj(a11)};
    }

    bool finite() const {
        for (cplx z : {a00, a01, a10, a11}) {
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        }
        return true;
    }

    ComplexMat2& operator+=(const ComplexMat2& o) {
        a00 += o.a00; a01 += o.a01; a10 += o.a10; a11 += o.a11;
        return *this;
    }
    ComplexMat2& operator-=(const ComplexMat2& o) {
        a00 -= o.a00; a01 -= o.a01; a10 -= o.a10; a11 -= o.a11;
        return *this;
    }
    ComplexMat2& operator*=(cplx s) {
        a00 *= s; a01 *= s; a10 *= s; a11 *= s;
        return *this;
    }

    friend ComplexMat2 operator+(ComplexMat2 a, const ComplexMat2& b) { return a += b; }
    friend ComplexMat2 operator-(ComplexMat2 a, const ComplexMat2& b) { return a -= b; }
    friend ComplexMat2 operator*(ComplexMat2 a, cplx s) { return a *= s; }
    friend ComplexMat2 operator*(cplx s, ComplexMat2 a) { return a *= s; }
    friend ComplexMat2 operator*(ComplexMat2 a, double s) { return a *= cplx{s}; }
    friend ComplexMat2 operator*(double s, ComplexMat2 a) { return a *= cplx{s}; }

    friend ComplexMat2 operator*(const ComplexMat2& a, const ComplexMat2& b) {
        return {a.a00 * b.a00 + a.a01 * b.a10, a.a00 * b.a01 + a.a01 * b.a11,
                a.a10 * b.a00 + a.a11 * b.a10, a.a10 * b.a01 + a.a11 * b.a11};
    }
    friend Ket operator*(const ComplexMat2& a, const Ket& v) {
        return {a.a00 * v[0] + a.a01 * v[1], a.a10 * v[0] + a.a11 * v[1]};
    }
};

namespace pauli {
inline constexpr ComplexMat2 I{1.0, 0.0, 0.0, 1.0};
inline constexpr ComplexMat2 X{0.0, 1.0, 1.0, 0.0};
inline constexpr ComplexMat2 Y{0.0, cplx{0.0, -1.0}, cplx{0.0, 1.0}, 0.0};
inline constexpr ComplexMat2 Z{1.0, 0.0, 0.0, -1.0};
}  // namespace pauli

// Largest absolute entry of a - b.
inline double max_abs_diff(const ComplexMat2& a, const ComplexMat2& b) {
    const ComplexMat2 d = a - b;
    return std::max({std::abs(d.a00), std::abs(d.a01), std::abs(d.a10), std::abs(d.a11)});
}

inline double hermiticity_defect(const ComplexMat2& m) {
    return std::max({std::abs(m.a00.imag()), std::abs(m.a11.imag()),
                     std::abs(m.a01 - std::conj(m.a10))});
}

inline bool is_hermitian(const ComplexMat2& m, double tol = 1e-10) {
    return hermiticity_defect(m) <= tol;
}

inline double norm(const Ket& v) { return std::sqrt(std::norm(v[0]) + std::norm(v[1])); }

inline cplx inner(const Ket& a, const Ket& b) {
    return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1];
}

// |a><b|
inline ComplexMat2 outer(const Ket& a, const Ket& b) {
    return {a[0] * std::conj(b[0]), a[0] * std::conj(b[1]),
            a[1] * std::conj(b[0]), a[1] * std::conj(b[1])};
}

inline ComplexMat2 projector(const Ket& v) { return outer(v, v); }

inline bool is_unitary(const ComplexMat2& u, double tol = 1e-12) {
    return max_abs_diff(u.adjoint() * u, ComplexMat2::identity()) <= tol;
}

/// Spectral decomposition of a Hermitian 2x2 matrix.
///
/// Eigenvalues are sorted descending; `vectors[k]` belongs to `values[k]`.
struct Eigen2 {
    std::array<double, 2> values{};
    std::array<Ket, 2> vectors{};

    ComplexMat2 reconstruct() const {
        return values[0] * projector(vectors[0]) + values[1] * projector(vectors[1]);
    }
};

/// Closed-form eigendecomposition. Throws InvalidState when `m` is not
/// Hermitian within `tol`.
///
/// Writing m = c I + b.sigma, the eigenvalues are c +- |b| and the
/// eigenvectors are the Bloch-sphere kets along +-b/|b|.
inline Eigen2 eig_hermitian2(const ComplexMat2& m, double tol = 1e-10) {
    if (!m.finite()) throw InvalidState("eig_hermitian2: non-finite entries");
    if (!is_hermitian(m, tol)) throw InvalidState("eig_hermitian2: matrix is not Hermitian");

    const double c = 0.5 * (m.a00.real() + m.a11.real());
    const double bz = 0.5 * (m.a00.real() - m.a11.real());
    const cplx off = 0.5 * (m.a10 + std::conj(m.a01));  // bx + i by
    const double bx = off.real();
    const double by = off.imag();
    const double r = std::hypot(bx, by, bz);

    Eigen2 out;
    out.values = {c + r, c - r};
    if (r == 0.0) {
        out.vectors = {Ket{1.0, 0.0}, Ket{0.0, 1.0}};
        return out;
    }
    // Ket along b/|b| is (cos(t/2), e^{i f} sin(t/2)); the larger half-angle
    // factor comes from the square root, the smaller from rho to avoid
    // cancellation near the poles.
    const double rho = std::hypot(bx, by);
    const cplx phase = rho > 0.0 ? cplx{bx, by} / rho : cplx{1.0, 0.0};
    double cos_half_up = 0.0;
    double sin_half_up = 0.0;
    if (bz >= 0.0) {
        cos_half_up = std::sqrt((r + bz) / (2.0 * r));
        sin_half_up = rho / std::sqrt(2.0 * r * (r + bz));
    } else {
        sin_half_up = std::sqrt((r - bz) / (2.0 * r));
        cos_half_up = rho / std::sqrt(2.0 * r * (r - bz));
    }
    out.vectors[0] = Ket{cos_half_up, phase * sin_half_up};
    out.vectors[1] = Ket{-std::conj(phase) * sin_half_up, cos_half_up};
    return out;
}

}  // namespace qthermo
