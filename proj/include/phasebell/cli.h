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

#ifndef PHASEBELL_CLI_H
#define PHASEBELL_CLI_H

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "phasebell/bell.h"
#include "phasebell/phase_space.h"

namespace phasebell::cli {

enum class OutputFormat { kCsv, kJson };

struct RunConfig {
    std::complex<double> alpha{2.0, 0.0};
    double variance = 0.5;
    TransformationSettings settings = paper_settings();
    std::uint64_t seed = 42;
    std::size_t samples = 1'000'000;
    GridSpec grid;
    OutputFormat format = OutputFormat::kCsv;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

/// Command report: the bytes to emit plus the process exit code.
struct CommandResult {
    int exit_code = kExitOk;
    std::string output;
};

CommandResult cmd_chsh(const RunConfig &config);
CommandResult cmd_threshold(const RunConfig &config);
CommandResult cmd_wigner_grid(const RunConfig &config, bool momentum_slice = false);
/// `inject_sign_error` flips the sign of Alice's rotation angle (negative control).
CommandResult cmd_verify_protocol(const RunConfig &config, bool inject_sign_error = false);
CommandResult cmd_nogo(const RunConfig &config);
CommandResult cmd_mc(const RunConfig &config);
CommandResult cmd_scan(const RunConfig &config, std::size_t resolution);
CommandResult cmd_lhv_check(const RunConfig &config, bool full_4d = false);

/// Seed for the Monte Carlo run of CHSH term `pair_index` (0..3), so the
/// four terms draw independent streams from one --seed.
std::uint64_t pair_seed(std::uint64_t seed, std::uint64_t pair_index);

/// The (theta, phi) points shared by verify-protocol and nogo:
/// {0, pi/8, pi/4, 3pi/8, pi/2} on each axis.
std::vector<double> protocol_angle_grid();

/// Parses argv, runs one subcommand and writes its report to `out` (or to
/// --output). Diagnostics go to `err`. Returns the process exit code.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace phasebell::cli

#endif
