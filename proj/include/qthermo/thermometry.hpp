// thermometry.hpp - two-temperature discrimination with a single qubit probe
//
// A probe is put in contact with either a cold or a hot bath for a time tau
// and then measured. This header provides the optimal (Helstrom) observable
// for that pair of states, the resulting separation curves, the optimal
// interaction time and the Helmholtz free-energy diagnostics.

#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qthermo/errors.hpp"
#include "qthermo/gad_channel.hpp"
#include "qthermo/linalg.hpp"
#include "qthermo/qubit.hpp"

namespace qthermo {

/// Hermitian measurement operator with spectrum inside [-1, 1].
class Observable {
public:
    explicit Observable(const ComplexMat2& m, double tol = kConstructionTol) : mat_(m) {
        if (!m.finite() || !is_hermitian(m, tol)) throw InvalidState("observable must be Hermitian");
        const Eigen2 e = eig_hermitian2(m, tol);
        if (e.values[0] > 1.0 + tol || e.values[1] < -1.0 - tol) {
            throw InvalidState("observable spectrum must lie in [-1, 1]");
        }
    }
    const ComplexMat2& mat() const { return mat_; }

private:
    ComplexMat2 mat_;
};

inline double expectation(const DensityMatrix& rho, const Observable& g) { return expectation(rho, g.mat()); }

/// Trace norm ||rho1 - rho2||_1, the largest achievable expectation gap
/// with a +-1 observable.
inline double separation(const DensityMatrix& rho1, const DensityMatrix& rho2) {
    const Eigen2 e = eig_hermitian2(rho1.mat() - rho2.mat());
    return std::abs(e.values[0]) + std::abs(e.values[1]);
}

inline constexpr double kDegenerateSeparation = 1e-10;

/// Helstrom observable Pi+ - Pi- built on the sign eigenspaces of
/// rho1 - rho2. Its expectation is larger on rho1 and the gap equals
/// separation(rho1, rho2). Throws DegeneratePair when the states are
/// indistinguishable.
inline Observable optimal_observable(const DensityMatrix& rho1, const DensityMatrix& rho2) {
    const Eigen2 e = eig_hermitian2(rho1.mat() - rho2.mat());
    if (std::abs(e.values[0]) + std::abs(e.values[1]) < kDegenerateSeparation) {
        throw DegeneratePair("states are indistinguishable; no discriminating observable");
    }
    ComplexMat2 g = ComplexMat2::zero();
    for (int k = 0; k < 2; ++k) {
        g += (e.values[k] >= 0.0 ? 1.0 : -1.0) * projector(e.vectors[k]);
    }
    // Clean rounding in the diagonal imaginary parts and the off-diagonal pair.
    g.a00 = g.a00.real();
    g.a11 = g.a11.real();
    g.a01 = std::conj(g.a10);
    return Observable(g);
}

/// Helstrom success probability for equiprobable states.
inline double success_probability(const DensityMatrix& rho1, const DensityMatrix& rho2) {
    return 0.5 + 0.25 * separation(rho1, rho2);
}

struct DiscriminationPoint {
    double tau = 0.0;
    std::optional<Observable> g;  // empty when the two states coincide
    double ev_cold = 0.0;
    double ev_hot = 0.0;
    double separation = 0.0;
};

namespace detail {

inline void require_increasing(std::span<const double> taus) {
    for (std::size_t i = 0; i < taus.size(); ++i) {
        if (!(taus[i] >= 0.0)) throw DomainError("interaction times must be >= 0");
        if (i > 0 && !(taus[i] > taus[i - 1])) throw DomainError("interaction times must be strictly increasing");
    }
}

inline void require_ordered(const BathSpec& cold, const BathSpec& hot) {
    if (!(cold.nbar() < hot.nbar())) throw DomainError("cold bath occupation must be below the hot one");
}

}  // namespace detail

/// Evaluate the discrimination protocol at a single interaction time.
/// Ĝ(tau) is oriented so that ev_hot >= ev_cold.
inline DiscriminationPoint discriminate_at(const DensityMatrix& probe, const BathSpec& cold,
                                           const BathSpec& hot, double tau) {
    const DensityMatrix rho_cold = evolve(probe, cold, tau);
    const DensityMatrix rho_hot = evolve(probe, hot, tau);
    DiscriminationPoint pt;
    pt.tau = tau;
    try {
        pt.g = optimal_observable(rho_hot, rho_cold);
    } catch (const DegeneratePair&) {
        return pt;  // null observable: both expectations and the separation are 0
    }
    pt.ev_cold = expectation(rho_cold, *pt.g);
    pt.ev_hot = expectation(rho_hot, *pt.g);
    pt.separation = std::abs(pt.ev_hot - pt.ev_cold);
    return pt;
}

inline std::vector<DiscriminationPoint> discrimination_curve(const ProbeState& probe, const BathSpec& cold,
                                                             const BathSpec& hot, std::span<const double> taus) {
    detail::require_increasing(taus);
    detail::require_ordered(cold, hot);
    const DensityMatrix rho0 = density_from_probe(probe);
    std::vector<DiscriminationPoint> out;
    out.reserve(taus.size());
    for (double tau : taus) out.push_back(discriminate_at(rho0, cold, hot, tau));
    return out;
}

/// Trace distance between the probe evolved under the two baths.
inline double separation_at(const ProbeState& probe, const BathSpec& cold, const BathSpec& hot, double tau) {
    const BlochVector r0 = bloch_from_density(density_from_probe(probe));
    return separation(density_from_bloch(lindblad_closed_form(r0, cold, tau)),
                      density_from_bloch(lindblad_closed_form(r0, hot, tau)));
}

struct OptimalTime {
    double tau_star = 0.0;
    double separation_max = 0.0;
};

struct OptimalTimeOptions {
    double grid_step = 1e-3;
    double tau_max = 2.0;
    double tolerance = 1e-8;
};

/// Maximize the separation over tau in (0, tau_max]: coarse grid, then
/// golden-section refinement around the best grid point.
inline OptimalTime optimal_time(const ProbeState& probe, const BathSpec& cold, const BathSpec& hot,
                                const OptimalTimeOptions& opt = {}) {
    if (cold.nbar() == hot.nbar()) throw DomainError("identical baths cannot be discriminated");
    detail::require_ordered(cold, hot);
    auto f = [&](double tau) { return separation_at(probe, cold, hot, tau); };

    const auto steps = static_cast<std::size_t>(std::llround(opt.tau_max / opt.grid_step));
    std::size_t best = 1;
    double best_value = f(opt.grid_step);
    for (std::size_t i = 2; i <= steps; ++i) {
        const double v = f(static_cast<double>(i) * opt.grid_step);
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }

    double lo = static_cast<double>(best - 1) * opt.grid_step;
    double hi = std::min(opt.tau_max, static_cast<double>(best + 1) * opt.grid_step);
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    while (hi - lo > opt.tolerance) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    const double tau = 0.5 * (lo + hi);
    const double value = f(tau);
    if (value >= best_value) return {tau, value};
    return {static_cast<double>(best) * opt.grid_step, best_value};
}

/// Length of the tau interval on which the separation stays at or above
/// `fraction` of its maximum. Crossings are bracketed on a grid of `step`
/// and refined by bisection.
inline double discrimination_window(const ProbeState& probe, const BathSpec& cold, const BathSpec& hot,
                                    double fraction = 0.8, double tau_max = 2.0, double step = 1e-4) {
    const OptimalTime peak = optimal_time(probe, cold, hot);
    const double level = fraction * peak.separation_max;
    auto g = [&](double tau) { return separation_at(probe, cold, hot, tau) - level; };
    auto bisect = [&](double a, double b) {
        double ga = g(a);
        for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
            const double m = 0.5 * (a + b);
            const double gm = g(m);
            if ((gm >= 0.0) == (ga >= 0.0)) {
                a = m;
                ga = gm;
            } else {
                b = m;
            }
        }
        return 0.5 * (a + b);
    };

    double first = -1.0;
    double last = -1.0;
    double prev_tau = 0.0;
    double prev = g(0.0);
    if (prev >= 0.0) first = 0.0;
    const auto steps = static_cast<std::size_t>(std::llround(tau_max / step));
    for (std::size_t i = 1; i <= steps; ++i) {
        const double tau = static_cast<double>(i) * step;
        const double cur = g(tau);
        if (prev < 0.0 && cur >= 0.0 && first < 0.0) first = bisect(prev_tau, tau);
        if (prev >= 0.0 && cur < 0.0) last = bisect(prev_tau, tau);
        prev = cur;
        prev_tau = tau;
    }
    if (first < 0.0) return 0.0;
    if (last < first) last = tau_max;
    return last - first;
}

struct FreeEnergyChange {
    double dU = 0.0;  // hbar omega
    double dS = 0.0;  // k_B
    double dF = 0.0;  // hbar omega
};

/// Helmholtz free-energy change of an isothermal transformation from a
/// pure state: dU = U(out) - U(in), dS = S(out), dF = dU - T dS.
inline FreeEnergyChange free_energy_change(const DensityMatrix& rho_in, const DensityMatrix& rho_out,
                                           double temperature, const Hamiltonian& h) {
    if (!(temperature > 0.0) || !std::isfinite(temperature)) throw DomainError("temperature must be positive");
    if (rho_in.purity() < 1.0 - kInputTol) throw InvalidState("initial state must be pure");
    FreeEnergyChange out;
    out.dU = internal_energy(rho_out, h) - internal_energy(rho_in, h);
    out.dS = von_neumann_entropy(rho_out);
    out.dF = out.dU - temperature * out.dS;
    return out;
}

struct FreeEnergyRecord {
    double tau = 0.0;
    double temperature = 0.0;
    double dU = 0.0;
    double dS = 0.0;
    double dF = 0.0;
    double dF_normalized = 0.0;  // dF / dF at full thermalisation
};

// Interaction time treated as full thermalisation; exp(-(1 + 2N) * 50) is
// below double precision for every bath of interest.
inline constexpr double kAsymptoticTau = 50.0;

inline std::vector<FreeEnergyRecord> free_energy_trajectory(const ProbeState& probe, const BathSpec& bath,
                                                            std::span<const double> taus,
                                                            const Hamiltonian& h = Hamiltonian{}) {
    detail::require_increasing(taus);
    const double temperature = temperature_from_occupation(bath);
    const DensityMatrix rho0 = density_from_probe(probe);
    const double dF_inf = free_energy_change(rho0, evolve(rho0, bath, kAsymptoticTau), temperature, h).dF;

    std::vector<FreeEnergyRecord> out;
    out.reserve(taus.size());
    for (double tau : taus) {
        const FreeEnergyChange c = free_energy_change(rho0, evolve(rho0, bath, tau), temperature, h);
        out.push_back({tau, temperature, c.dU, c.dS, c.dF, c.dF / dF_inf});
    }
    return out;
}

}  // namespace qthermo
