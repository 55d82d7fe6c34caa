#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "qthermo/experiment.hpp"

using namespace qthermo;
using namespace qthermo::experiment;

namespace {

// Small configuration that keeps the Monte Carlo commands fast.
ExperimentConfig small_config() {
    ExperimentConfig c;
    c.tau_grid = {0.0, 0.2, 0.05};
    c.mc_samples = 20;
    return c;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::stringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

// Every row has the header's width and every non-empty cell outside the
// named text columns parses fully as a number.
void expect_schema(const std::string& csv, const std::vector<std::string>& header,
                   const std::vector<std::string>& text_columns) {
    const auto rows = parse_csv(csv);
    ASSERT_FALSE(rows.empty());
    EXPECT_EQ(rows[0], header);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        ASSERT_EQ(rows[r].size(), header.size()) << "row " << r;
        for (std::size_t c = 0; c < header.size(); ++c) {
            const std::string& cell = rows[r][c];
            if (cell.empty()) continue;
            if (std::find(text_columns.begin(), text_columns.end(), header[c]) != text_columns.end()) continue;
            std::size_t used = 0;
            std::stod(cell, &used);
            EXPECT_EQ(used, cell.size()) << header[c] << "=" << cell;
        }
    }
}

}  // namespace

TEST(Config, DefaultsDescribeTheTwoBathExperiment) {
    const ExperimentConfig c;
    EXPECT_EQ(c.nbar_cold, 5.5);
    EXPECT_EQ(c.nbar_hot, 9.5);
    ASSERT_EQ(c.probe_theta_list.size(), 3u);
    EXPECT_EQ(c.omega, 1.0);
    EXPECT_NO_THROW(c.validate());
}

TEST(Config, ParsesFlatKeys) {
    const auto j = nlohmann::json::parse(R"({"nbar_cold": 1.0, "nbar_hot": 2.0, "probe_theta_list": [0.5],
        "tau_grid": [0, 0.5, 0.1], "noise_sigma": 0.02, "mc_samples": 4, "master_seed": 7, "omega": 1.0})");
    const ExperimentConfig c = config_from_json(j);
    EXPECT_EQ(c.nbar_cold, 1.0);
    EXPECT_EQ(c.probe_theta_list, std::vector<double>{0.5});
    EXPECT_EQ(c.tau_grid.points().size(), 6u);
    EXPECT_EQ(c.master_seed, 7u);
    EXPECT_EQ(to_json(c)["tau_grid"][2], 0.1);
}

TEST(Config, RejectsInvalidInput) {
    EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"nbar_cold": 5.5, "nbar_hot": 5.5})")), ConfigError);
    EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"unknown": 1})")), ConfigError);
    EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"tau_grid": [0, 1, 0]})")), ConfigError);
    EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"mc_samples": 1})")), ConfigError);
    EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"noise_sigma": "x"})")), ConfigError);
    EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"probe_theta_list": [4.0]})")), ConfigError);
    EXPECT_THROW(config_from_json(nlohmann::json::parse(R"([1, 2])")), ConfigError);
}

TEST(TauGrid, InclusiveOfStop) {
    const TauGrid g{0.0, 1.0, 0.005};
    const auto pts = g.points();
    EXPECT_EQ(pts.size(), 201u);
    EXPECT_NEAR(pts.back(), 1.0, 1e-12);
    EXPECT_EQ((TauGrid{0.0, 0.0, 0.1}.points().size()), 1u);
}

TEST(Table, CsvUsesFullPrecision) {
    Table t{{"a", "b", "c"}, {{1.0 / 3.0, std::int64_t{4}, std::string("x")}, {Cell{}, 2.5, Cell{}}}};
    EXPECT_EQ(to_csv(t), "a,b,c\n0.33333333333333331,4,x\n,2.5,\n");
    const auto j = to_json(t);
    EXPECT_TRUE(j["rows"][1][0].is_null());
}

TEST(Discriminate, SchemaAndSummaryRows) {
    const CommandResult res = run_discriminate(small_config());
    expect_schema(to_csv(res.table), res.table.columns, {"row_type"});
    const auto type = res.table.column("row_type");
    int summaries = 0;
    for (const auto& row : res.table.rows) summaries += std::get<std::string>(row[type]) == "summary";
    EXPECT_EQ(summaries, 3);
    EXPECT_EQ(res.exit_code, 0);
}

TEST(Discriminate, SingleTauAtZeroGivesZeroSeparation) {
    ExperimentConfig c = small_config();
    c.tau_grid = {0.0, 0.0, 0.1};
    const CommandResult res = run_discriminate(c);
    const auto sep = res.table.column("separation");
    const auto type = res.table.column("row_type");
    for (const auto& row : res.table.rows) {
        if (std::get<std::string>(row[type]) == "curve") {
            EXPECT_EQ(std::get<double>(row[sep]), 0.0);
        }
    }
}

TEST(Discriminate, MonteCarloNeverPerturbsTheory) {
    ExperimentConfig with_mc = small_config();
    ExperimentConfig without_mc = small_config();
    without_mc.mc_samples = 0;
    const Table a = run_discriminate(with_mc).table;
    const Table b = run_discriminate(without_mc).table;
    ASSERT_EQ(a.rows.size(), b.rows.size());
    for (const char* col : {"probe_theta", "tau", "ev_cold", "ev_hot", "separation", "g_defined"}) {
        const auto c = a.column(col);
        for (std::size_t r = 0; r < a.rows.size(); ++r) EXPECT_TRUE(a.rows[r][c] == b.rows[r][c]) << col;
    }
}

TEST(Discriminate, MonteCarloTracksTheory) {
    const Table t = run_discriminate(small_config()).table;
    const auto type = t.column("row_type");
    const auto sep = t.column("separation");
    const auto sep_mean = t.column("separation_mean");
    const auto sep_std = t.column("separation_std");
    for (const auto& row : t.rows) {
        if (std::get<std::string>(row[type]) != "curve" || std::get<double>(row[sep]) == 0.0) continue;
        const double diff = std::abs(std::get<double>(row[sep_mean]) - std::get<double>(row[sep]));
        EXPECT_LE(diff, 5.0 * std::get<double>(row[sep_std]) + 1e-3);
    }
}

TEST(FreeEnergy, SixTrajectoriesStartingAtZero) {
    const CommandResult res = run_free_energy(small_config());
    expect_schema(to_csv(res.table), res.table.columns, {"bath"});
    const auto tau = res.table.column("tau");
    const auto dF = res.table.column("dF");
    int starts = 0;
    for (const auto& row : res.table.rows) {
        if (std::get<double>(row[tau]) == 0.0) {
            ++starts;
            EXPECT_NEAR(std::get<double>(row[dF]), 0.0, 1e-12);
        }
    }
    EXPECT_EQ(starts, 6);
}

TEST(FreeEnergy, ZeroTemperatureBathRefused) {
    ExperimentConfig c = small_config();
    c.nbar_cold = 0.0;
    EXPECT_THROW(run_free_energy(c), ConfigError);
}

TEST(Calibration, TablesAndMarkedPoints) {
    const CommandResult res = run_calibration(ExperimentConfig{});
    expect_schema(to_csv(res.table), res.table.columns, {"table"});
    const Table& t = res.table;
    const auto table = t.column("table");
    const auto phi = t.column("phi");
    const auto tau_cold = t.column("tau_cold");
    const auto tau_hot = t.column("tau_hot");
    const auto nbar = t.column("nbar");
    const auto target = t.column("target_nbar");
    int marked = 0;
    for (const auto& row : t.rows) {
        const std::string& kind = std::get<std::string>(row[table]);
        if (kind == "phase_time") {
            const double p = std::get<double>(row[phi]);
            if (p == 0.0) {
                EXPECT_EQ(std::get<double>(row[tau_cold]), 0.0);
                EXPECT_EQ(std::get<double>(row[tau_hot]), 0.0);
            } else {
                EXPECT_LT(std::get<double>(row[tau_hot]), std::get<double>(row[tau_cold]));
            }
        } else if (kind == "marked") {
            ++marked;
            EXPECT_NEAR(std::get<double>(row[nbar]), std::get<double>(row[target]), 1e-3);
        }
    }
    EXPECT_EQ(marked, 2);
}

TEST(SimulateExperiment, NoiselessPipelineIsExact) {
    ExperimentConfig c = small_config();
    c.noise_sigma = 0.0;
    const CommandResult res = run_simulate_experiment(c);
    expect_schema(to_csv(res.table), res.table.columns, {"bath", "status"});
    const auto fid = res.table.column("fidelity");
    for (const auto& row : res.table.rows) EXPECT_GE(std::get<double>(row[fid]), 1.0 - 1e-10);
    ASSERT_TRUE(res.report.has_value());
    EXPECT_EQ((*res.report)["version"], kVersion);
    EXPECT_EQ((*res.report)["runs"].size(), res.table.rows.size());
}

TEST(SimulateExperiment, UnrepresentableTimeBecomesErrorRow) {
    ExperimentConfig c = small_config();
    c.tau_grid = {0.0, 10.0, 10.0};
    c.mc_samples = 0;
    const CommandResult res = run_simulate_experiment(c);
    EXPECT_EQ(res.exit_code, 3);
    const auto status = res.table.column("status");
    int errors = 0;
    for (const auto& row : res.table.rows) errors += std::get<std::string>(row[status]) == "phase_out_of_range";
    EXPECT_EQ(errors, 6);  // tau = 10 saturates gamma to 1 for every probe and bath
    EXPECT_EQ((*res.report)["summary"]["errors"], 6);
}

TEST(Commands, DeterministicOutput) {
    const ExperimentConfig c = small_config();
    EXPECT_EQ(to_csv(run_discriminate(c).table), to_csv(run_discriminate(c).table));
    EXPECT_EQ(to_csv(run_free_energy(c).table), to_csv(run_free_energy(c).table));
    EXPECT_EQ(to_csv(run_calibration(c).table), to_csv(run_calibration(c).table));
    const CommandResult a = run_simulate_experiment(c);
    const CommandResult b = run_simulate_experiment(c);
    EXPECT_EQ(to_csv(a.table), to_csv(b.table));
    EXPECT_EQ(a.report->dump(), b.report->dump());

    ExperimentConfig other = c;
    other.master_seed += 1;
    EXPECT_NE(to_csv(run_simulate_experiment(other).table), to_csv(a.table));
}
