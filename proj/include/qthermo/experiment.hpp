// experiment.hpp - configuration, simulated experimental pipeline and the
// table-producing commands behind the qthermo CLI.

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "qthermo/errors.hpp"
#include "qthermo/format.hpp"
#include "qthermo/gad_channel.hpp"
#include "qthermo/optics.hpp"
#include "qthermo/qubit.hpp"
#include "qthermo/thermometry.hpp"
#include "qthermo/tomography.hpp"

namespace qthermo::experiment {

inline constexpr const char* kVersion = "qthermo 1.0.0";

class ConfigError : public Error {
public:
    using Error::Error;
};

struct TauGrid {
    double start = 0.0;
    double stop = 1.0;
    double step = 0.005;

    std::vector<double> points() const {
        const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = start + static_cast<double>(i) * step;
        return out;
    }
};

/// Every field defaults to the two-bath experiment: N = 5.5 (cold) and
/// N = 9.5 (hot), probes |H>, |+>, |V>, omega = 1.
struct ExperimentConfig {
    double nbar_cold = 5.5;
    double nbar_hot = 9.5;
    std::vector<double> probe_theta_list{0.0, kPi / 2.0, kPi};
    TauGrid tau_grid{};
    double noise_sigma = 0.01;
    int mc_samples = 500;
    std::uint64_t master_seed = 20170101;
    double omega = 1.0;

    void validate() const {
        if (!(nbar_cold >= 0.0) || !std::isfinite(nbar_cold)) throw ConfigError("nbar_cold must be >= 0");
        if (!std::isfinite(nbar_hot)) throw ConfigError("nbar_hot must be finite");
        if (!(nbar_cold < nbar_hot)) {
            throw ConfigError("nbar_cold must be strictly below nbar_hot; identical baths leave nothing to discriminate");
        }
        if (probe_theta_list.empty()) throw ConfigError("probe_theta_list must not be empty");
        for (double t : probe_theta_list) {
            if (!(t >= 0.0 && t <= kPi)) throw ConfigError("probe angles must lie in [0, pi]");
        }
        if (!(tau_grid.step > 0.0) || !std::isfinite(tau_grid.step)) throw ConfigError("tau_grid step must be > 0");
        if (!(tau_grid.start >= 0.0) || !std::isfinite(tau_grid.stop) || !(tau_grid.stop >= tau_grid.start)) {
            throw ConfigError("tau_grid must satisfy 0 <= start <= stop");
        }
        if (!(noise_sigma >= 0.0 && noise_sigma < 0.5)) throw ConfigError("noise_sigma must lie in [0, 0.5)");
        if (mc_samples < 0 || mc_samples == 1) throw ConfigError("mc_samples must be 0 or at least 2");
        if (!(omega > 0.0) || !std::isfinite(omega)) throw ConfigError("omega must be > 0");
    }
};

inline nlohmann::json to_json(const ExperimentConfig& c) {
    return {{"nbar_cold", c.nbar_cold},
            {"nbar_hot", c.nbar_hot},
            {"probe_theta_list", c.probe_theta_list},
            {"tau_grid", {c.tau_grid.start, c.tau_grid.stop, c.tau_grid.step}},
            {"noise_sigma", c.noise_sigma},
            {"mc_samples", c.mc_samples},
            {"master_seed", c.master_seed},
            {"omega", c.omega}};
}

/// Parse a flat JSON object; missing keys keep their defaults, unknown keys
/// and wrongly typed values are rejected.
inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    ExperimentConfig c;
    auto number = [](const nlohmann::json& v, const std::string& key) {
        if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
        return v.get<double>();
    };
    for (const auto& [key, value] : j.items()) {
        if (key == "nbar_cold") {
            c.nbar_cold = number(value, key);
        } else if (key == "nbar_hot") {
            c.nbar_hot = number(value, key);
        } else if (key == "probe_theta_list") {
            if (!value.is_array()) throw ConfigError("probe_theta_list must be an array of numbers");
            c.probe_theta_list.clear();
            for (const auto& v : value) c.probe_theta_list.push_back(number(v, key));
        } else if (key == "tau_grid") {
            if (!value.is_array() || value.size() != 3) throw ConfigError("tau_grid must be [start, stop, step]");
            c.tau_grid = {number(value[0], key), number(value[1], key), number(value[2], key)};
        } else if (key == "noise_sigma") {
            c.noise_sigma = number(value, key);
        } else if (key == "mc_samples") {
            if (!value.is_number_integer()) throw ConfigError("mc_samples must be an integer");
            c.mc_samples = value.get<int>();
        } else if (key == "master_seed") {
            if (!value.is_number_unsigned()) throw ConfigError("master_seed must be a non-negative integer");
            c.master_seed = value.get<std::uint64_t>();
        } else if (key == "omega") {
            c.omega = number(value, key);
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    c.validate();
    return c;
}

// ---------------------------------------------------------------------------
// Tables

using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (columns[i] == name) return i;
        }
        throw Error("no column named " + name);
    }
};

inline std::string to_csv(const Table& t) {
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i) out += ',';
        out += t.columns[i];
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            const Cell& c = row[i];
            if (const auto* d = std::get_if<double>(&c)) {
                out += format_double(*d);
            } else if (const auto* n = std::get_if<std::int64_t>(&c)) {
                out += std::to_string(*n);
            } else if (const auto* s = std::get_if<std::string>(&c)) {
                out += *s;
            }
        }
        out += '\n';
    }
    return out;
}

inline nlohmann::json to_json(const Table& t) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json r = nlohmann::json::array();
        for (const Cell& c : row) {
            std::visit(
                [&](const auto& v) {
                    using V = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<V, std::monostate>) {
                        r.push_back(nullptr);
                    } else {
                        r.push_back(v);
                    }
                },
                c);
        }
        rows.push_back(std::move(r));
    }
    return {{"columns", t.columns}, {"rows", std::move(rows)}};
}

// ---------------------------------------------------------------------------
// Simulated experiment

/// Seed stream of one tomography run, addressed by grid position.
struct RunAddress {
    std::uint64_t probe = 0;
    std::uint64_t bath = 0;
    std::uint64_t tau = 0;
};

inline std::uint64_t run_seed(std::uint64_t master, const RunAddress& at, optics::KrausPair pair,
                              std::uint64_t sample) {
    const std::uint64_t pair_index = pair == optics::KrausPair::PairA ? 0 : 1;
    return tomography::derive_seed(master, {at.probe, at.bath, at.tau, pair_index, sample});
}

/// One pass of the optical experiment: program the SLM for the phase that
/// realizes `tau`, run tomography behind the interferometer for both phase
/// masks and recombine with the bath weight p. Throws DomainError when the
/// phase would reach pi.
inline DensityMatrix reconstruct_gad_output(const Ket& probe, const BathSpec& bath, double tau,
                                            const tomography::NoiseModel& noise, std::uint64_t seed_a,
                                            std::uint64_t seed_b) {
    const double phi = phase_from_tau(tau, bath);
    auto pair_state = [&](optics::KrausPair pair, std::uint64_t seed) {
        const optics::PolPathState out = optics::sagnac_transform(probe, phi, pair);
        const auto ds = tomography::generate_dataset_from_probabilities(optics::detected_intensities(out), noise, seed);
        return tomography::reconstruct(ds);
    };
    const DensityMatrix rho_a = pair_state(optics::KrausPair::PairA, seed_a);
    const DensityMatrix rho_b = pair_state(optics::KrausPair::PairB, seed_b);
    return tomography::combine_weighted(rho_a, rho_b, weight_from_bath(bath));
}

inline DensityMatrix reconstruct_sample(const Ket& probe, const BathSpec& bath, double tau,
                                        const tomography::NoiseModel& noise, std::uint64_t master,
                                        const RunAddress& at, std::uint64_t sample) {
    return reconstruct_gad_output(probe, bath, tau, noise, run_seed(master, at, optics::KrausPair::PairA, sample),
                                  run_seed(master, at, optics::KrausPair::PairB, sample));
}

struct CommandResult {
    Table table;
    std::optional<nlohmann::json> report;
    int exit_code = 0;
};

// ---------------------------------------------------------------------------
// Commands

inline CommandResult run_discriminate(const ExperimentConfig& cfg) {
    cfg.validate();
    const BathSpec cold(cfg.nbar_cold);
    const BathSpec hot(cfg.nbar_hot);
    const tomography::NoiseModel noise(cfg.noise_sigma);
    const std::vector<double> taus = cfg.tau_grid.points();

    CommandResult res;
    res.table.columns = {"row_type",    "probe_theta",  "tau",          "ev_cold",     "ev_hot",
                         "separation",  "g_defined",    "ev_cold_mean", "ev_cold_std", "ev_hot_mean",
                         "ev_hot_std",  "separation_mean", "separation_std", "window_80"};
    for (std::size_t probe_index = 0; probe_index < cfg.probe_theta_list.size(); ++probe_index) {
        const double theta = cfg.probe_theta_list[probe_index];
        const ProbeState probe(theta);
        const Ket ket = ket_from_probe(probe);
        const auto curve = discrimination_curve(probe, cold, hot, taus);
        for (std::size_t ti = 0; ti < curve.size(); ++ti) {
            const DiscriminationPoint& pt = curve[ti];
            std::vector<Cell> row{std::string("curve"), theta, pt.tau, pt.ev_cold, pt.ev_hot, pt.separation,
                                  std::int64_t{pt.g.has_value() ? 1 : 0}};
            if (cfg.mc_samples > 0 && pt.g) {
                std::vector<double> evc, evh, sep;
                for (int s = 0; s < cfg.mc_samples; ++s) {
                    const auto sample = static_cast<std::uint64_t>(s);
                    const DensityMatrix rc = reconstruct_sample(ket, cold, pt.tau, noise, cfg.master_seed,
                                                                {probe_index, 0, ti}, sample);
                    const DensityMatrix rh = reconstruct_sample(ket, hot, pt.tau, noise, cfg.master_seed,
                                                                {probe_index, 1, ti}, sample);
                    evc.push_back(expectation(rc, *pt.g));
                    evh.push_back(expectation(rh, *pt.g));
                    sep.push_back(std::abs(evh.back() - evc.back()));
                }
                for (const auto& est : {tomography::summarize(evc), tomography::summarize(evh),
                                        tomography::summarize(sep)}) {
                    row.emplace_back(est.mean);
                    row.emplace_back(est.std);
                }
            } else {
                row.resize(row.size() + 6);
            }
            row.emplace_back();
            res.table.rows.push_back(std::move(row));
        }
    }
    for (double theta : cfg.probe_theta_list) {
        const ProbeState probe(theta);
        const OptimalTime best = optimal_time(probe, cold, hot);
        std::vector<Cell> row{std::string("summary"), theta, best.tau_star, Cell{}, Cell{}, best.separation_max,
                              Cell{}};
        row.resize(row.size() + 6);
        row.emplace_back(discrimination_window(probe, cold, hot, 0.8));
        res.table.rows.push_back(std::move(row));
    }
    return res;
}

inline CommandResult run_free_energy(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.nbar_cold == 0.0) throw ConfigError("free-energy needs a positive bath temperature (nbar_cold > 0)");
    const Hamiltonian h(cfg.omega);
    const std::vector<double> taus = cfg.tau_grid.points();

    CommandResult res;
    res.table.columns = {"probe_theta", "bath", "nbar", "temperature", "tau", "dU", "dS", "dF", "dF_normalized"};
    for (double theta : cfg.probe_theta_list) {
        const ProbeState probe(theta);
        for (const auto& [name, nbar] : {std::pair{"cold", cfg.nbar_cold}, std::pair{"hot", cfg.nbar_hot}}) {
            for (const FreeEnergyRecord& r : free_energy_trajectory(probe, BathSpec(nbar), taus, h)) {
                res.table.rows.push_back({theta, std::string(name), nbar, r.temperature, r.tau, r.dU, r.dS, r.dF,
                                          r.dF_normalized});
            }
        }
    }
    return res;
}

inline constexpr int kCalibrationPhaseSteps = 180;  // phi = k pi / 180, k < 180
inline constexpr int kCalibrationWeightSteps = 500;  // p = k / 1000, 0 < k < 500

inline CommandResult run_calibration(const ExperimentConfig& cfg) {
    cfg.validate();
    const BathSpec cold(cfg.nbar_cold);
    const BathSpec hot(cfg.nbar_hot);

    CommandResult res;
    res.table.columns = {"table", "phi", "tau_cold", "tau_hot", "p", "temperature", "nbar", "target_nbar"};
    for (int k = 0; k < kCalibrationPhaseSteps; ++k) {
        const double phi = kPi * static_cast<double>(k) / kCalibrationPhaseSteps;
        res.table.rows.push_back({std::string("phase_time"), phi, tau_from_phase(phi, cold), tau_from_phase(phi, hot),
                                  Cell{}, Cell{}, Cell{}, Cell{}});
    }
    for (int k = 1; k < kCalibrationWeightSteps; ++k) {
        const double p = static_cast<double>(k) / (2.0 * kCalibrationWeightSteps);
        res.table.rows.push_back({std::string("weight_temperature"), Cell{}, Cell{}, Cell{}, p, temperature_from_p(p),
                                  bath_from_weight(p).nbar(), Cell{}});
    }
    for (const BathSpec& bath : {cold, hot}) {
        const double p = weight_from_bath(bath);
        const Cell temperature = p > 0.0 ? Cell{temperature_from_p(p)} : Cell{};
        res.table.rows.push_back({std::string("marked"), Cell{}, Cell{}, Cell{}, p, temperature,
                                  bath_from_weight(p).nbar(), bath.nbar()});
    }
    return res;
}

inline CommandResult run_simulate_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const tomography::NoiseModel noise(cfg.noise_sigma);
    const std::vector<double> taus = cfg.tau_grid.points();
    const int samples = std::max(cfg.mc_samples, 1);

    CommandResult res;
    res.table.columns = {"probe_theta", "bath",      "nbar",      "tau",      "phi",     "p",
                         "status",      "rx",        "ry",        "rz",       "fidelity", "theory_rx",
                         "theory_ry",   "theory_rz", "fidelity_mean", "fidelity_std", "rx_mean", "rx_std",
                         "ry_mean",     "ry_std",    "rz_mean",   "rz_std"};

    nlohmann::json runs = nlohmann::json::array();
    std::int64_t errors = 0;
    double fid_sum = 0.0;
    double fid_min = 1.0;
    double mc_fid_sum = 0.0;
    std::int64_t ok_rows = 0;

    for (std::size_t probe_index = 0; probe_index < cfg.probe_theta_list.size(); ++probe_index) {
        const double theta = cfg.probe_theta_list[probe_index];
        const ProbeState probe(theta);
        const Ket ket = ket_from_probe(probe);
        const DensityMatrix rho0 = density_from_probe(probe);
        for (std::uint64_t bi = 0; bi < 2; ++bi) {
            const BathSpec bath(bi == 0 ? cfg.nbar_cold : cfg.nbar_hot);
            const std::string bath_name = bi == 0 ? "cold" : "hot";
            const double p = weight_from_bath(bath);
            for (std::size_t ti = 0; ti < taus.size(); ++ti) {
                const double tau = taus[ti];
                const RunAddress at{probe_index, bi, ti};
                std::vector<Cell> row{theta, bath_name, bath.nbar(), tau};
                double phi = 0.0;
                try {
                    phi = phase_from_tau(tau, bath);
                } catch (const DomainError&) {
                    row.insert(row.end(), {Cell{}, p, std::string("phase_out_of_range")});
                    row.resize(res.table.columns.size());
                    res.table.rows.push_back(std::move(row));
                    ++errors;
                    continue;
                }
                const BlochVector theory = bloch_from_density(evolve(rho0, bath, tau));
                const DensityMatrix rho_theory = density_from_bloch(theory);

                std::vector<double> fid, rx, ry, rz;
                for (int s = 0; s < samples; ++s) {
                    const DensityMatrix rec =
                        reconstruct_sample(ket, bath, tau, noise, cfg.master_seed, at, static_cast<std::uint64_t>(s));
                    const BlochVector r = bloch_from_density(rec);
                    fid.push_back(fidelity(rec, rho_theory));
                    rx.push_back(r.rx);
                    ry.push_back(r.ry);
                    rz.push_back(r.rz);
                }
                row.insert(row.end(), {phi, p, std::string("ok"), rx[0], ry[0], rz[0], fid[0], theory.rx, theory.ry,
                                       theory.rz});
                if (cfg.mc_samples > 0) {
                    for (const auto* v : {&fid, &rx, &ry, &rz}) {
                        const auto est = tomography::summarize(*v);
                        row.emplace_back(est.mean);
                        row.emplace_back(est.std);
                    }
                    mc_fid_sum += tomography::summarize(fid).mean;
                } else {
                    row.resize(res.table.columns.size());
                }
                res.table.rows.push_back(std::move(row));
                fid_sum += fid[0];
                fid_min = std::min(fid_min, fid[0]);
                ++ok_rows;
                runs.push_back({{"probe_theta", theta},
                                {"bath", bath_name},
                                {"tau", tau},
                                {"seed_pair_a", run_seed(cfg.master_seed, at, optics::KrausPair::PairA, 0)},
                                {"seed_pair_b", run_seed(cfg.master_seed, at, optics::KrausPair::PairB, 0)}});
            }
        }
    }

    nlohmann::json summary{{"rows", res.table.rows.size()}, {"errors", errors}};
    if (ok_rows > 0) {
        summary["mean_fidelity"] = fid_sum / static_cast<double>(ok_rows);
        summary["min_fidelity"] = fid_min;
        if (cfg.mc_samples > 0) summary["mean_mc_fidelity"] = mc_fid_sum / static_cast<double>(ok_rows);
    }
    res.report = nlohmann::json{
        {"tool", "qthermo"},
        {"version", kVersion},
        {"command", "simulate-experiment"},
        {"config", to_json(cfg)},
        {"master_seed", cfg.master_seed},
        {"seed_rule",
         "derive_seed(master_seed, {probe_index, bath_index, tau_index, pair_index, sample_index}), SplitMix64 fold; "
         "seeds listed are for sample 0"},
        {"runs", std::move(runs)},
        {"summary", std::move(summary)}};
    res.exit_code = errors > 0 ? 3 : 0;
    return res;
}

}  // namespace qthermo::experiment
