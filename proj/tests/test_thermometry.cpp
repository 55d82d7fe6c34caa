#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "qthermo/thermometry.hpp"
#include "test_helpers.hpp"

using namespace qthermo;

namespace {

const BathSpec kCold(5.5);
const BathSpec kHot(9.5);

std::vector<double> grid(double start, double stop, double step) {
    std::vector<double> out;
    const auto n = static_cast<int>(std::floor((stop - start) / step + 1e-9));
    for (int i = 0; i <= n; ++i) out.push_back(start + i * step);
    return out;
}

}  // namespace

TEST(OptimalObservable, OrthogonalStates) {
    const DensityMatrix up = density_from_bloch({0, 0, 1});
    const DensityMatrix down = density_from_bloch({0, 0, -1});
    const Observable g = optimal_observable(up, down);
    EXPECT_LE(max_abs_diff(g.mat(), pauli::Z), 1e-12);
    EXPECT_NEAR(expectation(up, g) - expectation(down, g), 2.0, 1e-12);
}

TEST(OptimalObservable, DiagonalPair) {
    const DensityMatrix a = DensityMatrix::from_matrix(ComplexMat2::diag(0.7, 0.3));
    const DensityMatrix b = DensityMatrix::from_matrix(ComplexMat2::diag(0.6, 0.4));
    const Observable g = optimal_observable(a, b);
    EXPECT_LE(max_abs_diff(g.mat(), pauli::Z), 1e-12);
    EXPECT_NEAR(expectation(a, g) - expectation(b, g), 0.2, 1e-12);
    EXPECT_NEAR(separation(a, b), 0.2, 1e-12);
}

TEST(OptimalObservable, IdenticalStatesAreDegenerate) {
    std::mt19937_64 gen(1);
    const DensityMatrix rho = fixtures::random_state(gen);
    EXPECT_THROW(optimal_observable(rho, rho), DegeneratePair);
}

TEST(Observable, ValidatesSpectrum) {
    EXPECT_THROW(Observable(2.0 * pauli::Z), InvalidState);
    EXPECT_THROW(Observable(ComplexMat2{0.0, 1.0, 0.0, 0.0}), InvalidState);
    EXPECT_NO_THROW(Observable(0.5 * pauli::X));
}

TEST(Separation, EqualsBlochDistance) {
    std::mt19937_64 gen(2);
    for (int i = 0; i < 1000; ++i) {
        const BlochVector r1 = fixtures::random_bloch(gen);
        const BlochVector r2 = fixtures::random_bloch(gen);
        // Independent route: Euclidean distance of Bloch vectors.
        const double euclid = std::sqrt((r1.rx - r2.rx) * (r1.rx - r2.rx) + (r1.ry - r2.ry) * (r1.ry - r2.ry) +
                                        (r1.rz - r2.rz) * (r1.rz - r2.rz));
        EXPECT_NEAR(separation(density_from_bloch(r1), density_from_bloch(r2)), euclid, 1e-12);
    }
    EXPECT_EQ(separation(DensityMatrix::maximally_mixed(), DensityMatrix::maximally_mixed()), 0.0);
    EXPECT_NEAR(separation(density_from_bloch({1, 0, 0}), density_from_bloch({-1, 0, 0})), 2.0, 1e-12);
}

TEST(OptimalObservable, BeatsRandomSearch) {
    std::mt19937_64 gen(3);
    for (int pair = 0; pair < 100; ++pair) {
        const DensityMatrix a = fixtures::random_state(gen);
        const DensityMatrix b = fixtures::random_state(gen);
        const double gap = expectation(a, optimal_observable(a, b)) - expectation(b, optimal_observable(a, b));
        EXPECT_NEAR(gap, separation(a, b), 1e-10);
        for (int k = 0; k < 1000; ++k) {
            const ComplexMat2 g = fixtures::random_pm1_observable(gen);
            EXPECT_LE(std::abs(expectation(a, g) - expectation(b, g)), gap + 1e-9);
        }
    }
}

TEST(SuccessProbability, ReferenceValues) {
    const DensityMatrix up = density_from_bloch({0, 0, 1});
    EXPECT_NEAR(success_probability(up, up), 0.5, 1e-15);
    EXPECT_NEAR(success_probability(up, density_from_bloch({0, 0, -1})), 1.0, 1e-12);
    const DensityMatrix a = DensityMatrix::from_matrix(ComplexMat2::diag(0.7, 0.3));
    const DensityMatrix b = DensityMatrix::from_matrix(ComplexMat2::diag(0.6, 0.4));
    EXPECT_NEAR(success_probability(a, b), 0.55, 1e-12);
}

TEST(DiscriminationCurve, StartsDegenerateAndApproachesAsymptote) {
    const auto taus = grid(0.0, 5.0, 0.01);
    for (const ProbeState& probe : {ProbeState::excited(), ProbeState::plus(), ProbeState::ground()}) {
        const auto curve = discrimination_curve(probe, kCold, kHot, taus);
        ASSERT_EQ(curve.size(), taus.size());
        EXPECT_FALSE(curve.front().g.has_value());
        EXPECT_EQ(curve.front().separation, 0.0);
        for (const auto& pt : curve) {
            EXPECT_NEAR(pt.separation, std::abs(pt.ev_hot - pt.ev_cold), 1e-12);
            EXPECT_GE(pt.ev_hot - pt.ev_cold, -1e-12);
        }
        EXPECT_NEAR(curve.back().separation, 1.0 / 12.0 - 1.0 / 20.0, 1e-10);
    }
}

TEST(DiscriminationCurve, InteriorMaximumForPlusProbe) {
    const auto taus = grid(0.0, 1.0, 0.001);
    const auto curve = discrimination_curve(ProbeState::plus(), kCold, kHot, taus);
    std::size_t best = 0;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        if (curve[i].separation > curve[best].separation) best = i;
    }
    EXPECT_GT(best, 0u);
    EXPECT_LT(best, curve.size() - 1);
}

TEST(DiscriminationCurve, RejectsBadInput) {
    const std::vector<double> unordered{0.0, 0.2, 0.1};
    EXPECT_THROW(discrimination_curve(ProbeState::plus(), kCold, kHot, unordered), DomainError);
    const std::vector<double> taus{0.0, 0.1};
    EXPECT_THROW(discrimination_curve(ProbeState::plus(), kHot, kCold, taus), DomainError);
}

TEST(OptimalTime, GroundProbe) {
    const OptimalTime best = optimal_time(ProbeState::ground(), kCold, kHot);
    EXPECT_GT(best.tau_star, 0.0);
    EXPECT_LT(best.tau_star, 2.0);
    EXPECT_GT(best.separation_max, 1.0 / 12.0 - 1.0 / 20.0);
    // Refinement is a local maximum.
    EXPECT_GE(best.separation_max, separation_at(ProbeState::ground(), kCold, kHot, best.tau_star + 1e-4));
    EXPECT_GE(best.separation_max, separation_at(ProbeState::ground(), kCold, kHot, best.tau_star - 1e-4));
}

TEST(OptimalTime, GroundFasterThanCoherent) {
    EXPECT_LT(optimal_time(ProbeState::ground(), kCold, kHot).tau_star,
              optimal_time(ProbeState::plus(), kCold, kHot).tau_star);
}

TEST(OptimalTime, IdenticalBathsRejected) {
    EXPECT_THROW(optimal_time(ProbeState::plus(), kCold, kCold), DomainError);
}

TEST(DiscriminationWindow, CoherentProbeSustainsLongest) {
    const double plus = discrimination_window(ProbeState::plus(), kCold, kHot);
    EXPECT_GT(plus, discrimination_window(ProbeState::excited(), kCold, kHot));
    EXPECT_GT(plus, discrimination_window(ProbeState::ground(), kCold, kHot));
}

TEST(FreeEnergyChange, ReferenceCases) {
    const Hamiltonian h(1.0);
    const DensityMatrix plus = density_from_probe(ProbeState::plus());
    const FreeEnergyChange same = free_energy_change(plus, plus, 3.0, h);
    EXPECT_NEAR(same.dU, 0.0, 1e-15);
    EXPECT_NEAR(same.dS, 0.0, 1e-7);
    EXPECT_NEAR(same.dF, 0.0, 1e-6);

    const FreeEnergyChange mixed = free_energy_change(plus, DensityMatrix::maximally_mixed(), 1.0, h);
    EXPECT_NEAR(mixed.dU, 0.0, 1e-15);
    EXPECT_NEAR(mixed.dS, std::log(2.0), 1e-15);
    EXPECT_NEAR(mixed.dF, -0.693147, 1e-6);

    const BathSpec hot(9.5);
    const FreeEnergyChange relax =
        free_energy_change(density_from_probe(ProbeState::ground()), thermal_state(hot), 9.9917, h);
    EXPECT_LT(relax.dF, 0.0);
}

TEST(FreeEnergyChange, RejectsMixedInitialStateAndBadTemperature) {
    const Hamiltonian h;
    EXPECT_THROW(free_energy_change(DensityMatrix::maximally_mixed(), DensityMatrix::maximally_mixed(), 1.0, h),
                 InvalidState);
    const DensityMatrix plus = density_from_probe(ProbeState::plus());
    EXPECT_THROW(free_energy_change(plus, plus, 0.0, h), DomainError);
}

TEST(FreeEnergyTrajectory, MonotoneAndNormalized) {
    const auto taus = grid(0.0, 5.0, 0.01);
    for (const ProbeState& probe : {ProbeState::excited(), ProbeState::plus(), ProbeState::ground()}) {
        for (const BathSpec& bath : {kCold, kHot}) {
            const auto traj = free_energy_trajectory(probe, bath, taus);
            EXPECT_NEAR(traj.front().dF, 0.0, 1e-12);
            EXPECT_NEAR(traj.front().dF_normalized, 0.0, 1e-12);
            for (std::size_t i = 1; i < traj.size(); ++i) {
                EXPECT_LE(traj[i].dF, traj[i - 1].dF + 1e-12);
                EXPECT_GE(traj[i].dF_normalized, -1e-12);
                EXPECT_LE(traj[i].dF_normalized, 1.0 + 1e-9);
                EXPECT_NEAR(traj[i].dF, traj[i].dU - traj[i].temperature * traj[i].dS, 1e-12);
            }
            EXPECT_NEAR(traj.back().dF_normalized, 1.0, 1e-9);
        }
    }
}

TEST(FreeEnergyTrajectory, HotBathChangesMore) {
    const std::vector<double> late{50.0};
    for (const ProbeState& probe : {ProbeState::excited(), ProbeState::plus(), ProbeState::ground()}) {
        const double cold = free_energy_trajectory(probe, kCold, late).front().dF;
        const double hot = free_energy_trajectory(probe, kHot, late).front().dF;
        EXPECT_GT(std::abs(hot), std::abs(cold));
    }
}

// The entropy of the ground and coherent probes grows monotonically. The
// excited probe passes through the maximally mixed state on its way to the
// (ground-biased) thermal state, so its entropy peaks at ln 2 and then
// decreases.
TEST(EntropyTrajectory, MonotoneExceptForExcitedProbe) {
    const auto taus = grid(0.0, 5.0, 0.01);
    for (const BathSpec& bath : {kCold, kHot}) {
        for (const ProbeState& probe : {ProbeState::plus(), ProbeState::ground()}) {
            const auto traj = free_energy_trajectory(probe, bath, taus);
            for (std::size_t i = 1; i < traj.size(); ++i) EXPECT_GE(traj[i].dS, traj[i - 1].dS - 1e-12);
        }
        const auto excited = free_energy_trajectory(ProbeState::excited(), bath, grid(0.0, 5.0, 1e-4));
        double peak = 0.0;
        for (const auto& r : excited) peak = std::max(peak, r.dS);
        EXPECT_NEAR(peak, std::log(2.0), 1e-6);
        EXPECT_LT(excited.back().dS, peak - 1e-3);
    }
}

TEST(Thermalisation, ErasesInitialState) {
    for (const BathSpec& bath : {kCold, kHot}) {
        const DensityMatrix ref = evolve(density_from_probe(ProbeState::excited()), bath, 50.0);
        for (const ProbeState& probe : {ProbeState::plus(), ProbeState::ground()}) {
            EXPECT_LE(max_abs_diff(evolve(density_from_probe(probe), bath, 50.0).mat(), ref.mat()), 1e-10);
        }
    }
}
