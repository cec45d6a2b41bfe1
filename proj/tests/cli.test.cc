// Copyright 2026 The Phasebell Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "phasebell/cli.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <numbers>
#include <sstream>

#include "gtest/gtest.h"
#include "oracles.h"

using namespace phasebell;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string &text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(cell);
        }
        rows.push_back(cells);
    }
    return rows;
}

std::map<std::string, std::string> key_values(const std::string &text) {
    std::map<std::string, std::string> kv;
    for (const auto &row : parse_csv(text)) {
        kv[row.at(0)] = row.at(1);
    }
    return kv;
}

}  // namespace

TEST(cli_chsh, defaults_violate) {
    CliRun r = run_cli({"chsh"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto kv = key_values(r.out);
    EXPECT_NEAR(std::stod(kv["chsh"]), oracle::kChshPaperAlpha2, 1e-8);
    EXPECT_NEAR(std::stod(kv["chsh_mixture"]), oracle::kChshPaperAlpha2, 1e-8);
    EXPECT_NEAR(std::stod(kv["E22"]), -oracle::kCorrPi8Alpha2, 1e-8);
    EXPECT_EQ(kv["classical_bound"], "2");
    EXPECT_EQ(kv["violation"], "true");
}

TEST(cli_chsh, small_alpha_and_aligned_settings) {
    auto small = key_values(run_cli({"chsh", "--alpha", "0.5"}).out);
    EXPECT_NEAR(std::stod(small["chsh"]), oracle::kChshPaperAlphaHalf, 1e-8);
    EXPECT_EQ(small["violation"], "false");

    CliRun r = run_cli({"chsh", "--theta2", "0", "--phi1", "0", "--phi2", "0"});
    ASSERT_EQ(r.code, 0);
    auto kv = key_values(r.out);
    EXPECT_NEAR(std::stod(kv["chsh"]), 2 * oracle::kErf2Squared, 1e-8);
    EXPECT_EQ(kv["violation"], "false");
}

TEST(cli_chsh, settings_degrees_and_complex_alpha) {
    auto rad = key_values(run_cli({"chsh", "--settings", "0,0.7853981633974483,0.39269908169872414,-0.39269908169872414"}).out);
    auto deg = key_values(run_cli({"--degrees", "chsh", "--settings", "0,45,22.5,-22.5"}).out);
    EXPECT_EQ(rad["chsh"], deg["chsh"]);
    // The imaginary part shifts momentum means only.
    auto cplx = key_values(run_cli({"chsh", "--alpha", "2,1.5"}).out);
    EXPECT_EQ(cplx["chsh"], rad["chsh"]);
    EXPECT_EQ(cplx["chsh_mixture"], rad["chsh_mixture"]);
}

TEST(cli_chsh, json_output) {
    CliRun r = run_cli({"chsh", "--format", "json"});
    ASSERT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["chsh"].get<double>(), oracle::kChshPaperAlpha2, 1e-12);
    EXPECT_TRUE(j["violation"].get<bool>());
    EXPECT_EQ(j["correlations"].size(), 4u);
    EXPECT_EQ(j["classical_bound"].get<int>(), 2);
}

TEST(cli_threshold, csv_json_and_determinism) {
    CliRun r = run_cli({"threshold"});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "alpha_r_threshold\n0.995672\n");
    EXPECT_EQ(run_cli({"threshold"}).out, r.out);
    auto j = nlohmann::json::parse(run_cli({"threshold", "--format", "json"}).out);
    EXPECT_DOUBLE_EQ(j["alpha_r_threshold"].get<double>(), 0.995672);
}

TEST(cli_wigner_grid, marginal_rows) {
    CliRun r = run_cli({"wigner-grid"});
    ASSERT_EQ(r.code, 0);
    auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 101u * 101u + 1);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"x1", "x2", "w11", "w12", "w21", "w22"}));
    double peak = -1;
    std::pair<double, double> where;
    for (std::size_t i = 1; i < rows.size(); i++) {
        std::array<double, 4> w{};
        for (int k = 0; k < 4; k++) {
            w[k] = std::stod(rows[i][2 + k]);
            ASSERT_GE(w[k], 0.0);
        }
        EXPECT_EQ(rows[i][2], rows[i][3]);
        EXPECT_EQ(rows[i][2], rows[i][4]);
        if (w[0] > peak) {
            peak = w[0];
            where = {std::stod(rows[i][0]), std::stod(rows[i][1])};
        }
    }
    // Symmetric peaks at (2,2) and (-2,-2); row-major order finds (-2,-2) first.
    EXPECT_NEAR(std::abs(where.first), 2.0, 1e-9);
    EXPECT_EQ(where.first, where.second);
}

TEST(cli_wigner_grid, csv_round_trips_at_nine_digits) {
    CliRun r = run_cli({"wigner-grid", "--grid", "-3,3,7", "--alpha", "1.3"});
    ASSERT_EQ(r.code, 0);
    auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 50u);
    for (std::size_t i = 1; i < rows.size(); i++) {
        for (const auto &cell : rows[i]) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.9g", std::stod(cell));
            EXPECT_EQ(cell, buf);
        }
    }
}

TEST(cli_wigner_grid, slice_and_json) {
    CliRun slice = run_cli({"wigner-grid", "--slice", "--grid", "-4,4,5", "--format", "json"});
    ASSERT_EQ(slice.code, 0);
    auto j = nlohmann::json::parse(slice.out);
    EXPECT_EQ(j["domain"], "slice_p0");
    ASSERT_EQ(j["rows"].size(), 25u);
    // Row (x1, x2) = (0, 0) is index 12: every mode density is exp(-4)/pi.
    double expected = std::exp(-8.0) / (std::numbers::pi * std::numbers::pi);
    EXPECT_NEAR(j["rows"][12][2].get<double>(), expected, 1e-15);
}

TEST(cli_wigner_grid, bad_grid_is_usage_error) {
    EXPECT_EQ(run_cli({"wigner-grid", "--grid", "4,-4,10"}).code, 2);
    EXPECT_EQ(run_cli({"wigner-grid", "--grid", "-4,4,1"}).code, 2);
    EXPECT_EQ(run_cli({"wigner-grid", "--grid", "-4,4"}).code, 2);
}

TEST(cli_verify_protocol, passes_and_negative_control) {
    CliRun r = run_cli({"verify-protocol"});
    EXPECT_EQ(r.code, 0);
    auto rows = parse_csv(r.out);
    EXPECT_EQ(rows.size(), 26u);
    EXPECT_NE(r.out.find("# worst_theta,"), std::string::npos);
    EXPECT_NE(r.out.find("# passed,true"), std::string::npos);

    CliRun bad = run_cli({"verify-protocol", "--inject-sign-error"});
    EXPECT_EQ(bad.code, 1);
    EXPECT_NE(bad.out.find("# passed,false"), std::string::npos);

    auto j = nlohmann::json::parse(run_cli({"verify-protocol", "--format", "json"}).out);
    EXPECT_LE(j["max_trace_distance"].get<double>(), 1e-12);
    EXPECT_TRUE(j["worst"].contains("theta"));
}

TEST(cli_nogo, table) {
    CliRun r = run_cli({"nogo"});
    EXPECT_EQ(r.code, 0);
    auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 26u);
    bool saw_quarter = false;
    for (std::size_t i = 1; i < rows.size(); i++) {
        double theta = std::stod(rows[i][0]);
        double phi = std::stod(rows[i][1]);
        double gap = std::stod(rows[i][2]);
        EXPECT_NEAR(gap, std::stod(rows[i][3]), 1e-12);
        if (theta == 0.0) {
            EXPECT_LT(gap, 1e-15);
        }
        if (std::abs(theta - std::numbers::pi / 4) < 1e-8 && std::abs(phi - std::numbers::pi / 4) < 1e-8) {
            EXPECT_NEAR(gap, 0.5, 1e-12);
            saw_quarter = true;
        }
    }
    EXPECT_TRUE(saw_quarter);
}

TEST(cli_mc, reproducible_and_consistent) {
    CliRun a = run_cli({"mc", "--samples", "200000", "--seed", "5"});
    CliRun b = run_cli({"mc", "--samples", "200000", "--seed", "5"});
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    auto rows = parse_csv(a.out);
    ASSERT_EQ(rows.size(), 5u);
    for (std::size_t i = 1; i < rows.size(); i++) {
        EXPECT_LE(std::abs(std::stod(rows[i][6])), 5.0);
    }
    EXPECT_NE(run_cli({"mc", "--samples", "200000", "--seed", "6"}).out, a.out);
}

TEST(cli_mc, too_few_samples) {
    CliRun r = run_cli({"mc", "--samples", "500"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("1000"), std::string::npos);
}

TEST(cli_scan, default_resolution) {
    CliRun r = run_cli({"scan", "--format", "json"});
    ASSERT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["chsh"].get<double>(), oracle::kChshPaperAlpha2, 1e-9);
    EXPECT_EQ(j["resolution"].get<int>(), 16);
    EXPECT_EQ(run_cli({"scan", "--resolution", "4"}).code, 2);
}

TEST(cli_lhv_check, certifies_paper_settings) {
    CliRun r = run_cli({"lhv-check"});
    EXPECT_EQ(r.code, 0);
    auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_LE(std::stod(rows[1][0]), 1e-12);
    EXPECT_LE(std::stod(rows[1][1]), 1e-12);
    EXPECT_NEAR(std::stod(rows[1][2]), oracle::kSupW11W22, 1e-4);
    EXPECT_EQ(rows[1][3], "true");
    EXPECT_EQ(run_cli({"lhv-check", "--settings", "0.3,0.3,0.1,0.1"}).code, 1);
}

TEST(cli_usage, malformed_flags_exit_two) {
    EXPECT_EQ(run_cli({}).code, 2);
    EXPECT_EQ(run_cli({"bogus"}).code, 2);
    EXPECT_EQ(run_cli({"chsh", "--alpha", "abc"}).code, 2);
    EXPECT_EQ(run_cli({"chsh", "--settings", "1,2,3"}).code, 2);
    EXPECT_EQ(run_cli({"chsh", "--variance", "-1"}).code, 2);
    EXPECT_EQ(run_cli({"chsh", "--format", "xml"}).code, 2);
    CliRun help = run_cli({"--help"});
    EXPECT_EQ(help.code, 0);
    EXPECT_NE(help.out.find("wigner-grid"), std::string::npos);
}

TEST(cli_output, writes_file) {
    auto path = std::filesystem::temp_directory_path() / "phasebell_cli_test_threshold.csv";
    std::filesystem::remove(path);
    CliRun r = run_cli({"threshold", "--output", path.string()});
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    EXPECT_EQ(ss.str(), "alpha_r_threshold\n0.995672\n");
    std::filesystem::remove(path);
}

TEST(cli_binary, exit_codes) {
    std::string bin = PHASEBELL_CLI_PATH;
    auto status = [&](const std::string &args) {
        int raw = std::system((bin + " " + args + " > /dev/null 2>&1").c_str());
        return WEXITSTATUS(raw);
    };
    EXPECT_EQ(status("threshold"), 0);
    EXPECT_EQ(status("verify-protocol --inject-sign-error"), 1);
    EXPECT_EQ(status("chsh --nonsense"), 2);
}
