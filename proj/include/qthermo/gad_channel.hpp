// gad_channel.hpp - generalized amplitude damping (GAD) channel
//
// The same qubit-bath dynamics in three forms: Kraus operators, the affine
// Bloch map, and the closed-form Lindblad solution, together with the
// mappings between bath occupation, interaction time, SLM phase and
// temperature.

#pragma once

#include <cmath>
#include <limits>

#include "qthermo/errors.hpp"
#include "qthermo/linalg.hpp"
#include "qthermo/qubit.hpp"

namespace qthermo {

/// One application of the GAD channel. `p` weights the pair (E0, E1) that
/// damps toward |0>, `1 - p` the pair (E2, E3) that damps toward |1>.
class ChannelParams {
public:
    ChannelParams(double p, double gamma) : ChannelParams(p, gamma, 1.0 - gamma) {}
    // Supplies 1 - gamma separately so it keeps full relative precision when
    // gamma is close to 1.
    ChannelParams(double p, double gamma, double survival) : p_(p), gamma_(gamma), survival_(survival) {
        if (!(p >= 0.0 && p <= 1.0)) throw DomainError("channel weight p must lie in [0, 1]");
        if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("damping rate gamma must lie in [0, 1]");
        if (!(survival >= 0.0 && std::abs(survival + gamma - 1.0) <= 1e-15)) {
            throw DomainError("survival must equal 1 - gamma");
        }
    }
    double p() const { return p_; }
    double gamma() const { return gamma_; }
    double survival() const { return survival_; }

private:
    double p_;
    double gamma_;
    double survival_;
};

/// Thermal bath described by its mean excitation number.
class BathSpec {
public:
    explicit BathSpec(double nbar) : nbar_(nbar) {
        if (!(nbar >= 0.0) || !std::isfinite(nbar)) throw DomainError("bath occupation must be >= 0");
    }
    double nbar() const { return nbar_; }
    // 1 + 2 N, the relaxation rate of the population in spontaneous-emission units.
    double rate() const { return 1.0 + 2.0 * nbar_; }

private:
    double nbar_;
};

struct GADKraus {
    ComplexMat2 e0, e1, e2, e3;

    // sum_k E_k^dagger E_k
    ComplexMat2 completeness() const {
        return e0.adjoint() * e0 + e1.adjoint() * e1 + e2.adjoint() * e2 + e3.adjoint() * e3;
    }
};

inline GADKraus kraus_ops(const ChannelParams& cp) {
    const double sp = std::sqrt(cp.p());
    const double sq = std::sqrt(1.0 - cp.p());
    const double keep = std::sqrt(cp.survival());
    const double jump = std::sqrt(cp.gamma());
    return {
        ComplexMat2{sp, 0.0, 0.0, sp * keep},
        ComplexMat2{0.0, sp * jump, 0.0, 0.0},
        ComplexMat2{sq * keep, 0.0, 0.0, sq},
        ComplexMat2{0.0, 0.0, sq * jump, 0.0},
    };
}

/// sum_k E_k rho E_k^dagger
inline DensityMatrix apply_channel(const DensityMatrix& rho, const ChannelParams& cp) {
    const GADKraus k = kraus_ops(cp);
    const ComplexMat2& m = rho.mat();
    ComplexMat2 out = k.e0 * m * k.e0.adjoint();
    out += k.e1 * m * k.e1.adjoint();
    out += k.e2 * m * k.e2.adjoint();
    out += k.e3 * m * k.e3.adjoint();
    return DensityMatrix::from_matrix(out);
}

/// Action of the channel on the Bloch vector:
/// (rx, ry, rz) -> (rx sqrt(1-g), ry sqrt(1-g), g (2p-1) + rz (1-g)).
inline BlochVector bloch_map(const BlochVector& r, const ChannelParams& cp) {
    const double keep = std::sqrt(cp.survival());
    return {r.rx * keep, r.ry * keep, cp.gamma() * (2.0 * cp.p() - 1.0) + r.rz * cp.survival()};
}

/// Exact solution of the qubit master equation after a dimensionless
/// interaction time `tau`.
inline BlochVector lindblad_closed_form(const BlochVector& r0, const BathSpec& bath, double tau) {
    if (!(tau >= 0.0)) throw DomainError("interaction time must be >= 0");
    const double k = bath.rate();
    const double coherence = std::exp(-0.5 * k * tau);
    const double population = std::exp(-k * tau);
    return {r0.rx * coherence, r0.ry * coherence, (population * (1.0 + k * r0.rz) - 1.0) / k};
}

inline DensityMatrix evolve(const DensityMatrix& rho0, const BathSpec& bath, double tau) {
    return density_from_bloch(lindblad_closed_form(bloch_from_density(rho0), bath, tau));
}

// 1 - 2p = 1 / (1 + 2N): the channel's fixed point then coincides with the
// Lindblad asymptote rz = -1 / (1 + 2N).
inline double weight_from_bath(const BathSpec& bath) { return 0.5 * (1.0 - 1.0 / bath.rate()); }

inline double gamma_from_time(const BathSpec& bath, double tau) {
    if (!(tau >= 0.0)) throw DomainError("interaction time must be >= 0");
    return -std::expm1(-bath.rate() * tau);
}

inline ChannelParams params_from_bath(const BathSpec& bath, double tau) {
    const double gamma = gamma_from_time(bath, tau);
    return ChannelParams(weight_from_bath(bath), gamma, std::exp(-bath.rate() * tau));
}

/// Inverse of weight_from_bath; defined for p in [0, 1/2).
inline BathSpec bath_from_weight(double p) {
    if (!(p >= 0.0 && p < 0.5)) throw DomainError("weight p must lie in [0, 1/2)");
    // 1 + 2N = 1 / (1 - 2p)
    return BathSpec(0.5 * (1.0 / (1.0 - 2.0 * p) - 1.0));
}

inline double gamma_from_phase(double phi) {
    if (!(phi >= 0.0 && phi <= kPi)) throw DomainError("SLM phase must lie in [0, pi]");
    const double s = std::sin(0.5 * phi);
    return s * s;
}

/// Calibration curve tau(phi) = -log(1 - sin^2(phi/2)) / (1 + 2N).
inline double tau_from_phase(double phi, const BathSpec& bath) {
    if (!(phi >= 0.0 && phi <= kPi)) throw DomainError("SLM phase must lie in [0, pi]");
    if (phi == kPi) throw DomainError("phi = pi corresponds to an infinite interaction time");
    // 1 - sin^2(phi/2) = cos^2(phi/2)
    const double c = std::cos(0.5 * phi);
    return -2.0 * std::log(c) / bath.rate() + 0.0;  // no -0 at phi = 0
}

/// Inverse calibration: the SLM phase realizing interaction time `tau`.
/// Throws DomainError when the damping saturates to 1 in double precision
/// (the required phase would be pi).
inline double phase_from_tau(double tau, const BathSpec& bath) {
    const double gamma = gamma_from_time(bath, tau);
    if (!(gamma < 1.0)) throw DomainError("interaction time not representable by an SLM phase below pi");
    return 2.0 * std::asin(std::sqrt(gamma));
}

/// T = 1 / (2 artanh(1 - 2p)), in hbar*omega/k_B units.
inline double temperature_from_p(double p) {
    if (!(p > 0.0 && p < 0.5)) throw DomainError("temperature requires p in (0, 1/2)");
    return 1.0 / (2.0 * std::atanh(1.0 - 2.0 * p));
}

/// Bose-Einstein inversion T = 1 / ln(1 + 1/N); zero for an empty bath.
inline double temperature_from_occupation(const BathSpec& bath) {
    if (bath.nbar() == 0.0) return 0.0;
    return 1.0 / std::log1p(1.0 / bath.nbar());
}

/// Gibbs state of the qubit in contact with `bath`: diagonal with
/// rz = -1 / (1 + 2N).
inline DensityMatrix thermal_state(const BathSpec& bath) {
    return density_from_bloch({0.0, 0.0, -1.0 / bath.rate()});
}

}  // namespace qthermo
