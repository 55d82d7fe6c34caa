// tomography.hpp - simulated six-setting polarisation tomography
//
// Datasets are generated from ideal analyzer probabilities with Gaussian
// multiplicative intensity noise, inverted through the Stokes parameters,
// projected back onto the physical states and, for the GAD experiment,
// recombined with the bath weight p. Monte Carlo repetitions give error
// bars on any scalar functional of the reconstructed state.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qthermo/errors.hpp"
#include "qthermo/format.hpp"
#include "qthermo/linalg.hpp"
#include "qthermo/optics.hpp"
#include "qthermo/qubit.hpp"
#include "qthermo/thermometry.hpp"

namespace qthermo::tomography {

using optics::Setting;

// Detected intensity, in arbitrary units, of a setting with unit overlap.
inline constexpr double kFlux = 1000.0;

class NoiseModel {
public:
    explicit NoiseModel(double relative_sigma = 0.0) : sigma_(relative_sigma) {
        if (!(relative_sigma >= 0.0 && relative_sigma < 0.5)) {
            throw DomainError("relative intensity noise must lie in [0, 0.5)");
        }
    }
    double relative_sigma() const { return sigma_; }

private:
    double sigma_;
};

struct TomographyDataset {
    std::array<double, 6> intensity{};  // indexed by Setting
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;

    double at(Setting s) const { return intensity[static_cast<int>(s)]; }
};

/// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed for one sample: the master seed folded with each index in turn.
/// Depends only on the indices, so results do not depend on the order in
/// which samples are evaluated.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> indices) {
    std::uint64_t h = mix64(master);
    for (std::uint64_t i : indices) h = mix64(h ^ mix64(i + 0x632BE59BD9B4E019ULL));
    return h;
}

/// Ideal probability Tr[rho |s><s|] for each setting.
inline std::array<double, 6> ideal_probabilities(const DensityMatrix& rho) {
    std::array<double, 6> out{};
    for (Setting s : optics::kAllSettings) {
        const Ket k = optics::setting_ket(s);
        out[static_cast<int>(s)] = inner(k, rho.mat() * k).real();
    }
    return out;
}

/// Scale probabilities by the flux and apply (1 + sigma g) noise with g
/// standard normal, drawn in setting order from a generator seeded with
/// `seed`. Negative intensities are clipped to zero.
inline TomographyDataset generate_dataset_from_probabilities(const std::array<double, 6>& probabilities,
                                                             const NoiseModel& noise, std::uint64_t seed) {
    TomographyDataset ds;
    ds.noise_sigma = noise.relative_sigma();
    ds.seed = seed;
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        const double g = normal(gen);
        const double value = kFlux * probabilities[i] * (1.0 + noise.relative_sigma() * g);
        ds.intensity[i] = std::max(0.0, value);
    }
    return ds;
}

inline TomographyDataset generate_dataset(const DensityMatrix& rho, const NoiseModel& noise, std::uint64_t seed) {
    return generate_dataset_from_probabilities(ideal_probabilities(rho), noise, seed);
}

/// Stokes inversion (I + s.sigma)/2 normalized by I_H + I_V. The result is
/// Hermitian with unit trace but may fail positivity under noise.
inline ComplexMat2 linear_reconstruct(const TomographyDataset& ds) {
    const double total = ds.at(Setting::H) + ds.at(Setting::V);
    if (!(total > 0.0)) throw DomainError("tomography dataset has zero total flux");
    const double s1 = (ds.at(Setting::H) - ds.at(Setting::V)) / total;
    const double s2 = (ds.at(Setting::D) - ds.at(Setting::A)) / total;
    const double s3 = (ds.at(Setting::R) - ds.at(Setting::L)) / total;
    return {0.5 * (1.0 + s1), cplx{0.5 * s2, -0.5 * s3}, cplx{0.5 * s2, 0.5 * s3}, 0.5 * (1.0 - s1)};
}

/// Clip negative eigenvalues to zero and renormalize in the eigenbasis.
inline DensityMatrix project_physical(const ComplexMat2& m) {
    if (!is_hermitian(m, kInputTol)) throw InvalidState("projection input is not Hermitian");
    if (std::abs(m.trace() - cplx{1.0}) > kInputTol) throw InvalidState("projection input must have unit trace");
    const Eigen2 e = eig_hermitian2(m, kInputTol);
    if (e.values[1] >= 0.0) return DensityMatrix::from_matrix(m, kInputTol);
    const double top = std::max(0.0, e.values[0]);
    if (top == 0.0) throw InvalidState("projection input has no positive eigenvalue");
    return DensityMatrix::pure(e.vectors[0], kInputTol);
}

/// p rho_a + (1 - p) rho_b.
inline DensityMatrix combine_weighted(const DensityMatrix& a, const DensityMatrix& b, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("combination weight must lie in [0, 1]");
    return DensityMatrix::from_matrix(p * a.mat() + (1.0 - p) * b.mat());
}

inline DensityMatrix reconstruct(const TomographyDataset& ds) { return project_physical(linear_reconstruct(ds)); }

struct McEstimate {
    double mean = 0.0;
    double std = 0.0;  // sample standard deviation (n - 1)
};

inline McEstimate summarize(const std::vector<double>& values) {
    McEstimate out;
    if (values.empty()) return out;
    double sum = 0.0;
    for (double v : values) sum += v;
    out.mean = sum / static_cast<double>(values.size());
    if (values.size() < 2) return out;
    double sq = 0.0;
    for (double v : values) sq += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(sq / static_cast<double>(values.size() - 1));
    return out;
}

using Functional = std::function<double(const DensityMatrix&)>;

namespace functionals {

inline Functional entropy() {
    return [](const DensityMatrix& rho) { return von_neumann_entropy(rho); };
}

inline Functional expectation_of(const Observable& g) {
    return [g](const DensityMatrix& rho) { return expectation(rho, g); };
}

inline Functional free_energy(const DensityMatrix& rho_in, double temperature, const Hamiltonian& h) {
    return [rho_in, temperature, h](const DensityMatrix& rho) {
        return free_energy_change(rho_in, rho, temperature, h).dF;
    };
}

}  // namespace functionals

/// Repeat generate -> reconstruct -> project `n_samples` times; sample i
/// uses derive_seed(master_seed, {i}).
inline McEstimate monte_carlo_errors(const DensityMatrix& rho_true, const NoiseModel& noise, int n_samples,
                                     const Functional& functional, std::uint64_t master_seed) {
    if (n_samples < 2) throw DomainError("Monte Carlo needs at least two samples");
    const std::array<double, 6> probs = ideal_probabilities(rho_true);
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i) {
        const auto seed = derive_seed(master_seed, {static_cast<std::uint64_t>(i)});
        values.push_back(functional(reconstruct(generate_dataset_from_probabilities(probs, noise, seed))));
    }
    return summarize(values);
}

// CSV audit dump: setting,intensity,sigma,seed
inline void write_csv(std::ostream& os, const TomographyDataset& ds) {
    os << "setting,intensity,sigma,seed\n";
    for (Setting s : optics::kAllSettings) {
        os << optics::setting_name(s) << ',' << format_double(ds.at(s)) << ',' << format_double(ds.noise_sigma)
           << ',' << ds.seed << '\n';
    }
}

inline TomographyDataset read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != "setting,intensity,sigma,seed") {
        throw DomainError("tomography CSV: unexpected header");
    }
    TomographyDataset ds;
    std::array<bool, 6> seen{};
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string name, intensity, sigma, seed;
        if (!std::getline(row, name, ',') || !std::getline(row, intensity, ',') || !std::getline(row, sigma, ',') ||
            !std::getline(row, seed)) {
            throw DomainError("tomography CSV: malformed row");
        }
        const Setting s = optics::setting_from_name(name);
        ds.intensity[static_cast<int>(s)] = std::stod(intensity);
        ds.noise_sigma = std::stod(sigma);
        ds.seed = std::stoull(seed);
        seen[static_cast<int>(s)] = true;
    }
    for (bool b : seen) {
        if (!b) throw DomainError("tomography CSV: missing setting");
    }
    return ds;
}

}  // namespace qthermo::tomography
