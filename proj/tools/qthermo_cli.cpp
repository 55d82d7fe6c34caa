// qthermo - experiment runner for single-qubit two-temperature thermometry.
//
//   qthermo discriminate        separation curves, optimal observable, optimal time
//   qthermo free-energy         Helmholtz free-energy trajectories
//   qthermo calibration         tau(phi) and T(p) calibration tables
//   qthermo simulate-experiment interferometer + tomography pipeline with error bars
//
// Exit codes: 0 success, 2 usage/config error, 3 runtime error.

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qthermo/experiment.hpp"

namespace {

using qthermo::experiment::CommandResult;
using qthermo::experiment::ExperimentConfig;

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Options {
    std::string config_path;
    std::string out_path;
    std::string report_path;
    std::optional<std::uint64_t> seed;
    std::string format = "csv";
};

ExperimentConfig load_config(const Options& opt) {
    ExperimentConfig cfg;
    if (!opt.config_path.empty()) {
        std::ifstream in(opt.config_path);
        if (!in) throw qthermo::experiment::ConfigError("cannot open config file " + opt.config_path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::parse_error& e) {
            throw qthermo::experiment::ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
        cfg = qthermo::experiment::config_from_json(j);
    }
    if (opt.seed) cfg.master_seed = *opt.seed;
    cfg.validate();
    return cfg;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + path);
    out << text;
}

int run(const Options& opt, const std::function<CommandResult(const ExperimentConfig&)>& command) {
    ExperimentConfig cfg;
    try {
        cfg = load_config(opt);
    } catch (const qthermo::experiment::ConfigError& e) {
        std::cerr << "qthermo: config error: " << e.what() << '\n';
        return kExitConfig;
    }
    try {
        const CommandResult res = command(cfg);
        const std::string body = opt.format == "json" ? qthermo::experiment::to_json(res.table).dump(2) + "\n"
                                                      : qthermo::experiment::to_csv(res.table);
        write_text(opt.out_path, body);
        if (res.report) {
            std::string report_path = opt.report_path;
            if (report_path.empty() && !opt.out_path.empty()) report_path = opt.out_path + ".report.json";
            if (!report_path.empty()) write_text(report_path, res.report->dump(2) + "\n");
        }
        if (res.exit_code != 0) {
            std::cerr << "qthermo: some grid points could not be simulated (see status column)\n";
        }
        return res.exit_code;
    } catch (const qthermo::experiment::ConfigError& e) {
        std::cerr << "qthermo: config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "qthermo: error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Single-qubit thermometry simulator"};
    app.set_version_flag("--version", qthermo::experiment::kVersion);
    app.require_subcommand(1);

    Options opt;
    const std::map<std::string, std::function<CommandResult(const ExperimentConfig&)>> commands{
        {"discriminate", qthermo::experiment::run_discriminate},
        {"free-energy", qthermo::experiment::run_free_energy},
        {"calibration", qthermo::experiment::run_calibration},
        {"simulate-experiment", qthermo::experiment::run_simulate_experiment},
    };
    const std::map<std::string, std::string> descriptions{
        {"discriminate", "Optimal-observable separation curves for cold vs hot bath"},
        {"free-energy", "Free-energy change along each probe/bath trajectory"},
        {"calibration", "SLM phase to interaction time, and weight p to temperature"},
        {"simulate-experiment", "Interferometer + tomography pipeline with Monte Carlo error bars"},
    };

    std::uint64_t seed = 0;
    for (const auto& [name, fn] : commands) {
        CLI::App* sub = app.add_subcommand(name, descriptions.at(name));
        sub->add_option("--config", opt.config_path, "JSON config file")->check(CLI::ExistingFile);
        sub->add_option("--out", opt.out_path, "Output file (default: stdout)");
        sub->add_option("--seed", seed, "Override master_seed from the config");
        sub->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
        if (name == "simulate-experiment") {
            sub->add_option("--report", opt.report_path, "JSON report path (default: <out>.report.json)");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    for (const auto& [name, fn] : commands) {
        CLI::App* sub = app.get_subcommand(name);
        if (!sub->parsed()) continue;
        if (sub->count("--seed") > 0) opt.seed = seed;
        return run(opt, fn);
    }
    return kExitConfig;
}
