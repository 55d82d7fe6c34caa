// optics.hpp - Jones-calculus model of the displaced Sagnac interferometer
//
// The qubit is carried by polarisation (|H> = |0>, |V> = |1>), the
// environment by the path. PBS0 sends H into the clockwise loop and V into
// the counter-clockwise loop; each loop passes a half-wave plate at 22.5
// degrees, the SLM, and the second half-wave plate at 22.5 degrees. The SLM
// imprints a birefringent phase on one loop only. On the way back PBS0
// sends the components that kept their polarisation to output 1 and the
// flipped components to output 2.

#pragma once

#include <array>
#include <cmath>
#include <string_view>

#include "qthermo/errors.hpp"
#include "qthermo/gad_channel.hpp"
#include "qthermo/linalg.hpp"
#include "qthermo/qubit.hpp"

namespace qthermo::optics {

enum class Pol { H = 0, V = 1 };
enum class Loop { cw = 0, ccw = 1 };
enum class Port { out1 = 0, out2 = 1 };

/// Which pair of Kraus operators the interferometer realizes.
/// PairA = (E0, E1): phase on the ccw loop, damps |V> into |H>.
/// PairB = (E2, E3): phase on the cw loop, damps |H> into |V>.
enum class KrausPair { PairA, PairB };

// Standard half-wave plate with fast axis at `angle` (radians), up to a
// global phase.
inline ComplexMat2 jones_hwp(double angle) {
    const double c = std::cos(2.0 * angle);
    const double s = std::sin(2.0 * angle);
    return {c, s, s, -c};
}

// Quarter-wave plate R(-angle) diag(1, i) R(angle).
inline ComplexMat2 jones_qwp(double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const cplx i{0.0, 1.0};
    return {c * c + i * s * s, (1.0 - i) * s * c, (1.0 - i) * s * c, s * s + i * c * c};
}

inline constexpr double kHadamardPlateAngle = kPi / 8.0;  // 22.5 degrees

// H_g: |H> -> |+>, |V> -> |->.
inline ComplexMat2 hadamard_plate() { return jones_hwp(kHadamardPlateAngle); }

class PhaseMask {
public:
    PhaseMask(double phi, Loop target) : phi_(phi), target_(target) {
        if (!(phi >= 0.0 && phi <= kPi)) throw DomainError("SLM phase must lie in [0, pi]");
    }
    double phi() const { return phi_; }
    Loop target_loop() const { return target_; }

private:
    double phi_;
    Loop target_;
};

inline PhaseMask mask_for(KrausPair pair, double phi) {
    return PhaseMask(phi, pair == KrausPair::PairA ? Loop::ccw : Loop::cw);
}

/// Amplitudes over polarisation x path. Paths are the two loops before
/// recombination and the two output ports after it.
struct PolPathState {
    enum class Stage { Loops, Outputs };

    Stage stage = Stage::Loops;
    std::array<cplx, 4> amp{};  // index 2 * path + pol

    cplx& at(Pol pol, int path) { return amp[2 * path + static_cast<int>(pol)]; }
    const cplx& at(Pol pol, int path) const { return amp[2 * path + static_cast<int>(pol)]; }

    Ket path_ket(int path) const { return {at(Pol::H, path), at(Pol::V, path)}; }
    void set_path_ket(int path, const Ket& k) {
        at(Pol::H, path) = k[0];
        at(Pol::V, path) = k[1];
    }

    // Unnormalized polarisation state on an output port.
    Ket port_ket(Port port) const {
        if (stage != Stage::Outputs) throw InvalidState("state has not left the interferometer");
        return path_ket(static_cast<int>(port));
    }

    double intensity() const {
        double total = 0.0;
        for (const cplx& a : amp) total += std::norm(a);
        return total;
    }
    double port_intensity(Port port) const {
        const Ket k = port_ket(port);
        return std::norm(k[0]) + std::norm(k[1]);
    }
};

/// PBS0 on the way in: alpha|H>_cw + beta|V>_ccw.
inline PolPathState pbs_split(const Ket& input) {
    PolPathState s;
    s.stage = PolPathState::Stage::Loops;
    s.at(Pol::H, static_cast<int>(Loop::cw)) = input[0];
    s.at(Pol::V, static_cast<int>(Loop::ccw)) = input[1];
    return s;
}

// Same polarisation element in both loops.
inline PolPathState apply_to_loops(PolPathState state, const ComplexMat2& jones) {
    if (state.stage != PolPathState::Stage::Loops) throw InvalidState("state is not inside the interferometer");
    for (int path = 0; path < 2; ++path) state.set_path_ket(path, jones * state.path_ket(path));
    return state;
}

/// exp(i phi/2)|H><H| + exp(-i phi/2)|V><V| on the mask's loop, identity on
/// the other.
inline PolPathState apply_slm(PolPathState state, const PhaseMask& mask) {
    if (state.stage != PolPathState::Stage::Loops) throw InvalidState("state is not inside the interferometer");
    const int path = static_cast<int>(mask.target_loop());
    const double half = 0.5 * mask.phi();
    state.at(Pol::H, path) *= std::polar(1.0, half);
    state.at(Pol::V, path) *= std::polar(1.0, -half);
    return state;
}

/// PBS0 on the way out. Output 1 collects H from cw and V from ccw;
/// output 2 collects the flipped components V from cw and H from ccw.
inline PolPathState pbs_recombine(const PolPathState& loops) {
    if (loops.stage != PolPathState::Stage::Loops) throw InvalidState("state is not inside the interferometer");
    constexpr int cw = static_cast<int>(Loop::cw);
    constexpr int ccw = static_cast<int>(Loop::ccw);
    constexpr int out1 = static_cast<int>(Port::out1);
    constexpr int out2 = static_cast<int>(Port::out2);
    PolPathState out;
    out.stage = PolPathState::Stage::Outputs;
    out.at(Pol::H, out1) = loops.at(Pol::H, cw);
    out.at(Pol::V, out1) = loops.at(Pol::V, ccw);
    out.at(Pol::V, out2) = loops.at(Pol::V, cw);
    out.at(Pol::H, out2) = loops.at(Pol::H, ccw);
    return out;
}

/// Element-by-element pass: H_g, SLM, H_g in both loops.
inline PolPathState sagnac_elementwise(const Ket& input, const PhaseMask& mask) {
    const ComplexMat2 hg = hadamard_plate();
    PolPathState s = pbs_split(input);
    s = apply_to_loops(s, hg);
    s = apply_slm(s, mask);
    s = apply_to_loops(s, hg);
    return pbs_recombine(s);
}

/// Closed form of H_g U(phi) H_g on the masked loop:
/// [[cos(phi/2), i sin(phi/2)], [i sin(phi/2), cos(phi/2)]].
/// The unmasked loop sees H_g H_g = I.
inline ComplexMat2 loop_propagator(double phi) {
    const double c = std::cos(0.5 * phi);
    const double s = std::sin(0.5 * phi);
    return {c, cplx{0.0, s}, cplx{0.0, s}, c};
}

/// Full pass through the interferometer programmed for `pair`.
///
/// For PairA the output ports carry alpha|H> + beta cos(phi/2)|V> and
/// i beta sin(phi/2)|H>, i.e. E0 and E1 of an amplitude-damping channel
/// with gamma = sin^2(phi/2); PairB is the mirror image.
inline PolPathState sagnac_transform(const Ket& input, double phi, KrausPair pair) {
    const PhaseMask mask = mask_for(pair, phi);
    PolPathState s = pbs_split(input);
    const int path = static_cast<int>(mask.target_loop());
    s.set_path_ket(path, loop_propagator(mask.phi()) * s.path_ket(path));
    return pbs_recombine(s);
}

/// Incoherent sum over both output ports for a mixed input, obtained by
/// sending each eigenvector of rho through the interferometer.
inline DensityMatrix simulate_kraus_pair(const DensityMatrix& rho, double phi, KrausPair pair) {
    const Eigen2 e = eig_hermitian2(rho.mat());
    ComplexMat2 out = ComplexMat2::zero();
    for (int k = 0; k < 2; ++k) {
        if (e.values[k] <= 0.0) continue;
        const PolPathState s = sagnac_transform(e.vectors[k], phi, pair);
        out += e.values[k] * (projector(s.port_ket(Port::out1)) + projector(s.port_ket(Port::out2)));
    }
    return DensityMatrix::from_matrix(out);
}

// Polarisation analyzer settings, in the order used for tomography.
enum class Setting { H = 0, V, D, A, R, L };

inline constexpr std::array<Setting, 6> kAllSettings{Setting::H, Setting::V, Setting::D,
                                                     Setting::A, Setting::R, Setting::L};

inline std::string_view setting_name(Setting s) {
    constexpr std::array<std::string_view, 6> names{"H", "V", "D", "A", "R", "L"};
    return names[static_cast<int>(s)];
}

inline Setting setting_from_name(std::string_view name) {
    for (Setting s : kAllSettings) {
        if (setting_name(s) == name) return s;
    }
    throw DomainError("unknown analyzer setting");
}

// Eigenstate projected by each setting; R = (|H> + i|V>)/sqrt2.
inline Ket setting_ket(Setting s) {
    const double r = 1.0 / std::sqrt(2.0);
    switch (s) {
        case Setting::H: return {1.0, 0.0};
        case Setting::V: return {0.0, 1.0};
        case Setting::D: return {r, r};
        case Setting::A: return {r, -r};
        case Setting::R: return {r, cplx{0.0, r}};
        case Setting::L: return {r, cplx{0.0, -r}};
    }
    return {1.0, 0.0};
}

struct AnalyzerPlates {
    double qwp = 0.0;
    double hwp = 0.0;
};

// Plate angles that rotate the setting's eigenstate onto the transmitted
// (H) port of the analyzer PBS.
inline AnalyzerPlates analyzer_plates(Setting s) {
    switch (s) {
        case Setting::H: return {0.0, 0.0};
        case Setting::V: return {0.0, kPi / 4.0};
        case Setting::D: return {kPi / 4.0, kPi / 8.0};
        case Setting::A: return {kPi / 4.0, -kPi / 8.0};
        case Setting::R: return {0.0, -kPi / 8.0};
        case Setting::L: return {0.0, kPi / 8.0};
    }
    return {};
}

/// Intensity transmitted by the QWP + HWP + PBS analyzer on one output
/// port. Not normalized by the port probability.
inline double analyzer_intensity(const PolPathState& state, Port port, Setting setting) {
    const AnalyzerPlates plates = analyzer_plates(setting);
    const Ket after = jones_hwp(plates.hwp) * (jones_qwp(plates.qwp) * state.port_ket(port));
    return std::norm(after[0]);
}

/// Analyzer intensities summed over both ports, for each setting.
inline std::array<double, 6> detected_intensities(const PolPathState& state) {
    std::array<double, 6> out{};
    for (Setting s : kAllSettings) {
        out[static_cast<int>(s)] = analyzer_intensity(state, Port::out1, s) + analyzer_intensity(state, Port::out2, s);
    }
    return out;
}

}  // namespace qthermo::optics
