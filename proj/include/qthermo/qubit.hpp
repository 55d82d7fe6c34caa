// qubit.hpp - qubit states, Bloch-sphere conversions and thermodynamic functionals
//
// Basis convention used throughout the library:
//   index 0 = |0> = excited = |H>,   index 1 = |1> = ground = |V>.
// Energies are in units of hbar*omega, entropies in units of k_B (natural
// log), temperatures in units of hbar*omega/k_B.

#pragma once

#include <cmath>
#include <string>

#include "qthermo/errors.hpp"
#include "qthermo/linalg.hpp"

namespace qthermo {

inline constexpr double kConstructionTol = 1e-12;
inline constexpr double kInputTol = 1e-10;

struct BlochVector {
    double rx = 0.0;
    double ry = 0.0;
    double rz = 0.0;

    double norm() const { return std::hypot(rx, ry, rz); }

    friend BlochVector operator-(const BlochVector& a, const BlochVector& b) {
        return {a.rx - b.rx, a.ry - b.ry, a.rz - b.rz};
    }
    friend bool operator==(const BlochVector&, const BlochVector&) = default;
};

inline double distance(const BlochVector& a, const BlochVector& b) { return (a - b).norm(); }

/// Hermitian, positive semidefinite, unit-trace 2x2 matrix.
///
/// Instances can only be obtained through validating factories, so every
/// DensityMatrix in the program satisfies the invariants.
class DensityMatrix {
public:
    /// Validates Hermiticity, unit trace and positivity within `tol`.
    static DensityMatrix from_matrix(const ComplexMat2& m, double tol = kConstructionTol) {
        if (!m.finite()) throw InvalidState("density matrix has non-finite entries");
        if (!is_hermitian(m, tol)) throw InvalidState("density matrix is not Hermitian");
        if (std::abs(m.trace() - cplx{1.0}) > tol) throw InvalidState("density matrix trace is not 1");
        const Eigen2 e = eig_hermitian2(m, tol);
        if (e.values[1] < -tol) throw InvalidState("density matrix has a negative eigenvalue");
        return DensityMatrix(m);
    }

    /// |psi><psi| for a ket normalized within `tol`.
    static DensityMatrix pure(const Ket& psi, double tol = kConstructionTol) {
        if (std::abs(norm(psi) - 1.0) > tol) throw InvalidState("ket is not normalized");
        return DensityMatrix(projector(psi));
    }

    static DensityMatrix maximally_mixed() { return DensityMatrix(0.5 * ComplexMat2::identity()); }

    const ComplexMat2& mat() const { return mat_; }

    double population(int level) const { return (level == 0 ? mat_.a00 : mat_.a11).real(); }
    double purity() const { return (mat_ * mat_).trace().real(); }

private:
    explicit DensityMatrix(const ComplexMat2& m) : mat_(m) {}
    ComplexMat2 mat_;
};

/// Pure probe state cos(theta/2)|0> + e^{i phase} sin(theta/2)|1>.
class ProbeState {
public:
    explicit ProbeState(double theta, double relative_phase = 0.0)
        : theta_(theta), relative_phase_(relative_phase) {
        if (!(theta >= 0.0 && theta <= kPi)) throw DomainError("probe theta must lie in [0, pi]");
        if (!std::isfinite(relative_phase)) throw DomainError("probe relative phase must be finite");
    }

    static ProbeState excited() { return ProbeState(0.0); }     // |H>
    static ProbeState ground() { return ProbeState(kPi); }      // |V>
    static ProbeState plus() { return ProbeState(kPi / 2.0); }  // |+>

    double theta() const { return theta_; }
    double relative_phase() const { return relative_phase_; }

private:
    double theta_;
    double relative_phase_;
};

/// H_S = (omega/2) sigma_z.
class Hamiltonian {
public:
    explicit Hamiltonian(double omega = 1.0) : omega_(omega) {
        if (!(omega > 0.0) || !std::isfinite(omega)) throw DomainError("omega must be positive");
    }
    double omega() const { return omega_; }
    ComplexMat2 matrix() const { return (0.5 * omega_) * pauli::Z; }

private:
    double omega_;
};

inline Ket ket_from_probe(const ProbeState& probe) {
    const double half = 0.5 * probe.theta();
    return {cplx{std::cos(half)}, std::polar(std::sin(half), probe.relative_phase())};
}

inline DensityMatrix density_from_probe(const ProbeState& probe) {
    return DensityMatrix::pure(ket_from_probe(probe));
}

/// rho = (I + r.sigma) / 2. Throws InvalidState when |r| > 1 + tol.
inline DensityMatrix density_from_bloch(const BlochVector& r, double tol = kConstructionTol) {
    if (!(r.norm() <= 1.0 + tol)) throw InvalidState("Bloch vector lies outside the unit ball");
    const ComplexMat2 m{0.5 * (1.0 + r.rz), cplx{0.5 * r.rx, -0.5 * r.ry},
                        cplx{0.5 * r.rx, 0.5 * r.ry}, 0.5 * (1.0 - r.rz)};
    return DensityMatrix::from_matrix(m, std::max(tol, kConstructionTol));
}

// Pauli expectation values of an arbitrary (Hermitian, unit-trace) matrix.
inline BlochVector bloch_from_matrix(const ComplexMat2& m) {
    return {2.0 * m.a10.real(), 2.0 * m.a10.imag(), (m.a00 - m.a11).real()};
}

inline BlochVector bloch_from_density(const DensityMatrix& rho) { return bloch_from_matrix(rho.mat()); }

/// -sum p log p over a two-outcome distribution (p, 1-p), with 0 log 0 = 0.
inline double binary_entropy(double p) {
    auto term = [](double x) { return x > 0.0 ? -x * std::log(x) : 0.0; };
    return term(p) + term(1.0 - p);
}

/// Von Neumann entropy in nats; lies in [0, log 2].
inline double von_neumann_entropy(const DensityMatrix& rho) {
    const double r = std::min(1.0, bloch_from_density(rho).norm());
    return binary_entropy(0.5 * (1.0 + r));
}

/// Tr[H_S rho] = (omega/2)(rho00 - rho11).
inline double internal_energy(const DensityMatrix& rho, const Hamiltonian& h) {
    return 0.5 * h.omega() * (rho.mat().a00 - rho.mat().a11).real();
}

/// Re Tr[rho G]. Throws InvalidState if G is not Hermitian (the imaginary
/// residual would then exceed 1e-12).
inline double expectation(const DensityMatrix& rho, const ComplexMat2& g) {
    const cplx value = (rho.mat() * g).trace();
    if (std::abs(value.imag()) > kConstructionTol) {
        throw InvalidState("expectation value has an imaginary residual; observable not Hermitian");
    }
    return value.real();
}

/// Uhlmann fidelity (squared convention), closed form for qubits:
/// F = Tr[rho sigma] + 2 sqrt(det rho det sigma).
inline double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
    const double overlap = (a.mat() * b.mat()).trace().real();
    const double dets = std::max(0.0, a.mat().det().real()) * std::max(0.0, b.mat().det().real());
    return std::min(1.0, overlap + 2.0 * std::sqrt(dets));
}

}  // namespace qthermo
