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

#include <CLI11.hpp>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "phasebell/logical_model.h"

namespace phasebell::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kProtocolTolerance = 1e-12;
constexpr double kMaxAbsZ = 5.0;

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        parts.push_back(item);
    }
    if (!s.empty() && s.back() == sep) {
        parts.emplace_back();
    }
    return parts;
}

double parse_double(const std::string &s, const std::string &what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception &) {
        throw CLI::ValidationError(what, "'" + s + "' is not a number");
    }
    if (used != s.size() || !std::isfinite(v)) {
        throw CLI::ValidationError(what, "'" + s + "' is not a finite number");
    }
    return v;
}

std::complex<double> parse_alpha(const std::string &s) {
    auto parts = split(s, ',');
    if (parts.empty() || parts.size() > 2) {
        throw CLI::ValidationError("--alpha", "expected re[,im]");
    }
    double re = parse_double(parts[0], "--alpha");
    double im = parts.size() == 2 ? parse_double(parts[1], "--alpha") : 0.0;
    return {re, im};
}

TransformationSettings parse_settings(const std::string &s) {
    auto parts = split(s, ',');
    if (parts.size() != 4) {
        throw CLI::ValidationError("--settings", "expected t1,t2,p1,p2");
    }
    return {parse_double(parts[0], "--settings"), parse_double(parts[1], "--settings"),
            parse_double(parts[2], "--settings"), parse_double(parts[3], "--settings")};
}

GridSpec parse_grid(const std::string &s) {
    auto parts = split(s, ',');
    if (parts.size() != 3) {
        throw CLI::ValidationError("--grid", "expected min,max,steps");
    }
    double steps = parse_double(parts[2], "--grid");
    if (steps < 2 || steps != std::floor(steps) || steps > 1e6) {
        throw CLI::ValidationError("--grid", "steps must be an integer >= 2");
    }
    GridSpec g{parse_double(parts[0], "--grid"), parse_double(parts[1], "--grid"), static_cast<std::size_t>(steps)};
    try {
        g.validate();
    } catch (const std::invalid_argument &e) {
        throw CLI::ValidationError("--grid", e.what());
    }
    return g;
}

std::string dump(const Json &j) {
    return j.dump(2) + "\n";
}

Json settings_json(const TransformationSettings &s) {
    return Json{{"theta1", s.theta1}, {"theta2", s.theta2}, {"phi1", s.phi1}, {"phi2", s.phi2}};
}

struct Term {
    const char *label;
    double theta;
    double phi;
    double sign;
};

std::array<Term, 4> chsh_terms(const TransformationSettings &s) {
    return {{{"11", s.theta1, s.phi1, 1.0},
             {"12", s.theta1, s.phi2, 1.0},
             {"21", s.theta2, s.phi1, 1.0},
             {"22", s.theta2, s.phi2, -1.0}}};
}

}  // namespace

std::uint64_t pair_seed(std::uint64_t seed, std::uint64_t pair_index) {
    return seed ^ (0x9E3779B97F4A7C15ULL * (pair_index + 1));
}

std::vector<double> protocol_angle_grid() {
    std::vector<double> g;
    for (int k = 0; k <= 4; k++) {
        g.push_back(k * std::numbers::pi / 8);
    }
    return g;
}

CommandResult cmd_chsh(const RunConfig &config) {
    double alpha_r = config.alpha.real();
    double chsh = chsh_transformed(config.settings, alpha_r);
    double chsh_mixture = 0.0;
    std::array<double, 4> corr{};
    auto terms = chsh_terms(config.settings);
    for (std::size_t k = 0; k < terms.size(); k++) {
        corr[k] = correlation_paper(terms[k].theta, terms[k].phi, alpha_r);
        WignerMixture w = to_wigner(rho_target(terms[k].theta, terms[k].phi), config.alpha, config.variance);
        chsh_mixture += terms[k].sign * correlation_analytic(w, {0.0}, {0.0}).value;
    }
    bool violation = chsh > 2.0;

    CommandResult r;
    if (config.format == OutputFormat::kJson) {
        Json j;
        j["alpha"] = {config.alpha.real(), config.alpha.imag()};
        j["variance"] = config.variance;
        j["settings"] = settings_json(config.settings);
        Json c;
        for (std::size_t k = 0; k < terms.size(); k++) {
            c[terms[k].label] = corr[k];
        }
        j["correlations"] = c;
        j["chsh"] = chsh;
        j["chsh_mixture"] = chsh_mixture;
        j["classical_bound"] = 2;
        j["violation"] = violation;
        r.output = dump(j);
        return r;
    }
    std::string o = "quantity,value\n";
    for (std::size_t k = 0; k < terms.size(); k++) {
        o += std::string("E") + terms[k].label + "," + num(corr[k]) + "\n";
    }
    o += "chsh," + num(chsh) + "\n";
    o += "chsh_mixture," + num(chsh_mixture) + "\n";
    o += "classical_bound,2\n";
    o += std::string("violation,") + (violation ? "true" : "false") + "\n";
    r.output = o;
    return r;
}

CommandResult cmd_threshold(const RunConfig &config) {
    double a = threshold_alpha();
    CommandResult r;
    if (config.format == OutputFormat::kJson) {
        r.output = dump(Json{{"alpha_r_threshold", std::round(a * 1e6) / 1e6}});
    } else {
        r.output = "alpha_r_threshold\n" + fixed6(a) + "\n";
    }
    return r;
}

CommandResult cmd_wigner_grid(const RunConfig &config, bool momentum_slice) {
    config.grid.validate();
    const auto &s = config.settings;
    auto build = [&](double theta, double phi) {
        return to_wigner(rho_target(theta, phi), config.alpha, config.variance);
    };
    std::array<WignerMixture, 4> ws{build(s.theta1, s.phi1), build(s.theta1, s.phi2), build(s.theta2, s.phi1),
                                    build(s.theta2, s.phi2)};
    std::vector<MarginalX> marginals;
    for (const auto &w : ws) {
        marginals.push_back(w.marginal_x());
    }
    auto value = [&](std::size_t k, double x1, double x2) {
        if (momentum_slice) {
            return ws[k].eval({x1, 0.0}, {x2, 0.0});
        }
        return marginals[k].eval(x1, x2);
    };

    const std::size_t n = config.grid.steps;
    CommandResult r;
    if (config.format == OutputFormat::kJson) {
        Json rows = Json::array();
        for (std::size_t i = 0; i < n; i++) {
            double x1 = config.grid.point(i);
            for (std::size_t j = 0; j < n; j++) {
                double x2 = config.grid.point(j);
                rows.push_back({x1, x2, value(0, x1, x2), value(1, x1, x2), value(2, x1, x2), value(3, x1, x2)});
            }
        }
        Json j;
        j["columns"] = {"x1", "x2", "w11", "w12", "w21", "w22"};
        j["domain"] = momentum_slice ? "slice_p0" : "marginal_x";
        j["rows"] = std::move(rows);
        r.output = j.dump() + "\n";
        return r;
    }
    std::string o = "x1,x2,w11,w12,w21,w22\n";
    o.reserve(n * n * 64);
    for (std::size_t i = 0; i < n; i++) {
        double x1 = config.grid.point(i);
        for (std::size_t j = 0; j < n; j++) {
            double x2 = config.grid.point(j);
            o += num(x1) + "," + num(x2);
            for (std::size_t k = 0; k < 4; k++) {
                o += "," + num(value(k, x1, x2));
            }
            o += "\n";
        }
    }
    r.output = std::move(o);
    return r;
}

CommandResult cmd_verify_protocol(const RunConfig &config, bool inject_sign_error) {
    auto grid = protocol_angle_grid();
    double worst = -1.0;
    double worst_theta = 0.0;
    double worst_phi = 0.0;
    Json rows = Json::array();
    std::string table = "theta,phi,trace_distance\n";
    for (double theta : grid) {
        for (double phi : grid) {
            AncillaUnitary alice = ancilla_unitary(inject_sign_error ? -theta : theta);
            double d = trace_distance(ancilla_protocol(alice, ancilla_unitary(phi)), rho_target(theta, phi));
            if (d > worst) {
                worst = d;
                worst_theta = theta;
                worst_phi = phi;
            }
            rows.push_back({theta, phi, d});
            table += num(theta) + "," + num(phi) + "," + num(d) + "\n";
        }
    }
    bool passed = worst <= kProtocolTolerance;
    CommandResult r;
    r.exit_code = passed ? kExitOk : kExitVerificationFailed;
    if (config.format == OutputFormat::kJson) {
        Json j;
        j["columns"] = {"theta", "phi", "trace_distance"};
        j["rows"] = std::move(rows);
        j["max_trace_distance"] = worst;
        j["worst"] = {{"theta", worst_theta}, {"phi", worst_phi}};
        j["tolerance"] = kProtocolTolerance;
        j["passed"] = passed;
        r.output = dump(j);
        return r;
    }
    table += "# max_trace_distance," + num(worst) + "\n";
    table += "# worst_theta," + num(worst_theta) + "\n";
    table += "# worst_phi," + num(worst_phi) + "\n";
    table += std::string("# passed,") + (passed ? "true" : "false") + "\n";
    r.output = std::move(table);
    return r;
}

CommandResult cmd_nogo(const RunConfig &config) {
    auto grid = protocol_angle_grid();
    double max_diff = 0.0;
    Json rows = Json::array();
    std::string table = "theta,phi,gap,closed_form,abs_diff\n";
    for (double theta : grid) {
        for (double phi : grid) {
            double gap = nogo_gap(theta, phi);
            double closed = 0.5 * std::abs(std::sin(2 * theta) * std::sin(2 * phi));
            double diff = std::abs(gap - closed);
            max_diff = std::max(max_diff, diff);
            rows.push_back({theta, phi, gap, closed, diff});
            table += num(theta) + "," + num(phi) + "," + num(gap) + "," + num(closed) + "," + num(diff) + "\n";
        }
    }
    bool passed = max_diff <= kProtocolTolerance;
    CommandResult r;
    r.exit_code = passed ? kExitOk : kExitVerificationFailed;
    if (config.format == OutputFormat::kJson) {
        Json j;
        j["columns"] = {"theta", "phi", "gap", "closed_form", "abs_diff"};
        j["rows"] = std::move(rows);
        j["max_abs_diff"] = max_diff;
        j["passed"] = passed;
        r.output = dump(j);
        return r;
    }
    table += "# max_abs_diff," + num(max_diff) + "\n";
    table += std::string("# passed,") + (passed ? "true" : "false") + "\n";
    r.output = std::move(table);
    return r;
}

CommandResult cmd_mc(const RunConfig &config) {
    if (config.samples < kMinMonteCarloSamples) {
        throw std::invalid_argument("mc: --samples must be at least 1000");
    }
    Json rows = Json::array();
    std::string table = "pair,theta,phi,analytic,monte_carlo,stderr,z\n";
    bool passed = true;
    std::uint64_t pair_index = 0;
    for (const auto &t : chsh_terms(config.settings)) {
        WignerMixture w = to_wigner(rho_target(t.theta, t.phi), config.alpha, config.variance);
        double analytic = correlation_analytic(w, {0.0}, {0.0}).value;
        CorrelationEstimate mc = correlation_mc(w, {0.0}, {0.0}, pair_seed(config.seed, pair_index++), config.samples);
        double diff = mc.value - analytic;
        double z = mc.std_error > 0.0 ? diff / mc.std_error : (diff == 0.0 ? 0.0 : INFINITY);
        passed = passed && std::abs(z) <= kMaxAbsZ;
        rows.push_back({t.label, t.theta, t.phi, analytic, mc.value, mc.std_error, z});
        table += std::string(t.label) + "," + num(t.theta) + "," + num(t.phi) + "," + num(analytic) + "," +
                 num(mc.value) + "," + num(mc.std_error) + "," + num(z) + "\n";
    }
    CommandResult r;
    r.exit_code = passed ? kExitOk : kExitVerificationFailed;
    if (config.format == OutputFormat::kJson) {
        Json j;
        j["columns"] = {"pair", "theta", "phi", "analytic", "monte_carlo", "stderr", "z"};
        j["rows"] = std::move(rows);
        j["samples"] = config.samples;
        j["seed"] = config.seed;
        j["passed"] = passed;
        r.output = dump(j);
        return r;
    }
    table += std::string("# passed,") + (passed ? "true" : "false") + "\n";
    r.output = std::move(table);
    return r;
}

CommandResult cmd_scan(const RunConfig &config, std::size_t resolution) {
    double alpha_r = config.alpha.real();
    ScanResult best = scan_settings(alpha_r, resolution);
    bool violation = best.chsh > 2.0;
    CommandResult r;
    if (config.format == OutputFormat::kJson) {
        Json j;
        j["alpha_r"] = alpha_r;
        j["resolution"] = resolution;
        j["settings"] = settings_json(best.settings);
        j["chsh"] = best.chsh;
        j["violation"] = violation;
        r.output = dump(j);
        return r;
    }
    const auto &s = best.settings;
    r.output = "theta1,theta2,phi1,phi2,chsh,violation\n" + num(s.theta1) + "," + num(s.theta2) + "," +
               num(s.phi1) + "," + num(s.phi2) + "," + num(best.chsh) + "," + (violation ? "true" : "false") +
               "\n";
    return r;
}

CommandResult cmd_lhv_check(const RunConfig &config, bool full_4d) {
    LhvReport rep = lhv_identity_check(config.settings, config.alpha, config.variance, config.grid,
                                       full_4d ? SupDomain::kFull4d : SupDomain::kMarginalX);
    bool certified = rep.contradiction();
    CommandResult r;
    r.exit_code = certified ? kExitOk : kExitVerificationFailed;
    if (config.format == OutputFormat::kJson) {
        Json j;
        j["d12"] = rep.d12;
        j["d21"] = rep.d21;
        j["d22"] = rep.d22;
        j["domain"] = full_4d ? "full_4d" : "marginal_x";
        j["contradiction"] = certified;
        r.output = dump(j);
        return r;
    }
    r.output = "d12,d21,d22,contradiction\n" + num(rep.d12) + "," + num(rep.d21) + "," + num(rep.d22) + "," +
               (certified ? "true" : "false") + "\n";
    return r;
}

namespace {

void write_atomically(const std::string &path, const std::string &data) {
    std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        }
        f << data;
        if (!f.flush()) {
            throw std::runtime_error("failed writing " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, target);
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{
        "Phase-space Bell experiments on coherent-state mixtures with positive Wigner functions.\n"
        "Angles are in radians unless --degrees is given. --alpha takes re[,im]; the closed-form\n"
        "correlations use only Re(alpha), the imaginary part shifts momentum means.",
        "phasebell"};
    app.require_subcommand(1, 1);

    std::string alpha_s = "2";
    std::string settings_s;
    std::string grid_s = "-4,4,101";
    std::string format_s = "csv";
    std::string output_path;
    RunConfig cfg;
    double theta1 = NAN, theta2 = NAN, phi1 = NAN, phi2 = NAN;
    bool degrees = false;

    app.add_option("--alpha", alpha_s, "Coherent amplitude re[,im]")->capture_default_str();
    app.add_option("--variance", cfg.variance, "Per-quadrature variance of each coherent mode")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_option("--settings", settings_s, "Transformation settings t1,t2,p1,p2 (default 0,pi/4,pi/8,-pi/8)");
    app.add_option("--theta1", theta1, "Override theta1");
    app.add_option("--theta2", theta2, "Override theta2");
    app.add_option("--phi1", phi1, "Override phi1");
    app.add_option("--phi2", phi2, "Override phi2");
    app.add_flag("--degrees", degrees, "Read all angles in degrees");
    app.add_option("--seed", cfg.seed, "Monte Carlo seed")->capture_default_str();
    app.add_option("--samples", cfg.samples, "Monte Carlo sample count (>= 1000)")->capture_default_str();
    app.add_option("--grid", grid_s, "Phase-space grid min,max,steps (per axis)")->capture_default_str();
    app.add_option("--format", format_s, "Output format")
        ->capture_default_str()
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--output", output_path, "Write the report here instead of stdout");

    auto *chsh = app.add_subcommand("chsh", "CHSH value under the transformation settings.\n"
                                            "CSV columns: quantity,value (E11,E12,E21,E22,chsh,chsh_mixture,"
                                            "classical_bound,violation)");
    auto *threshold = app.add_subcommand("threshold", "Smallest Re(alpha) giving a violation.\n"
                                                      "CSV columns: alpha_r_threshold");
    auto *wgrid = app.add_subcommand("wigner-grid", "W11, W12, W21, W22 over the (x1, x2) grid.\n"
                                                    "CSV columns: x1,x2,w11,w12,w21,w22");
    bool slice = false;
    wgrid->add_flag("--slice", slice, "Evaluate the p1 = p2 = 0 slice instead of the momentum marginal");
    auto *verify = app.add_subcommand("verify-protocol", "Entangled-ancilla protocol versus the target state.\n"
                                                         "CSV columns: theta,phi,trace_distance");
    bool inject = false;
    verify->add_flag("--inject-sign-error", inject, "Negative control: flip Alice's rotation angle")
        ->group("");
    auto *nogo = app.add_subcommand("nogo", "Gap left by independent local bit-flip channels.\n"
                                            "CSV columns: theta,phi,gap,closed_form,abs_diff");
    auto *mc = app.add_subcommand("mc", "Monte Carlo versus analytic correlations.\n"
                                        "CSV columns: pair,theta,phi,analytic,monte_carlo,stderr,z");
    auto *scan = app.add_subcommand("scan", "Grid search of the CHSH value over [0, pi)^4.\n"
                                            "CSV columns: theta1,theta2,phi1,phi2,chsh,violation");
    std::size_t resolution = 16;
    scan->add_option("--resolution", resolution, "Grid points per angle (>= 8)")
        ->capture_default_str()
        ->check(CLI::Range(std::size_t{8}, std::size_t{64}));
    auto *lhv = app.add_subcommand("lhv-check", "Sup distances W11-W12, W11-W21, W11-W22.\n"
                                                "CSV columns: d12,d21,d22,contradiction");
    bool full4d = false;
    lhv->add_flag("--full4d", full4d, "Compare full densities on the 4D grid instead of the x marginal");
    for (auto *sub : app.get_subcommands({})) {
        sub->fallthrough();
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
        cfg.alpha = parse_alpha(alpha_s);
        cfg.grid = parse_grid(grid_s);
        cfg.format = format_s == "json" ? OutputFormat::kJson : OutputFormat::kCsv;
        double unit = degrees ? std::numbers::pi / 180.0 : 1.0;
        if (!settings_s.empty()) {
            TransformationSettings s = parse_settings(settings_s);
            cfg.settings = {s.theta1 * unit, s.theta2 * unit, s.phi1 * unit, s.phi2 * unit};
        }
        if (!std::isnan(theta1)) cfg.settings.theta1 = theta1 * unit;
        if (!std::isnan(theta2)) cfg.settings.theta2 = theta2 * unit;
        if (!std::isnan(phi1)) cfg.settings.phi1 = phi1 * unit;
        if (!std::isnan(phi2)) cfg.settings.phi2 = phi2 * unit;
        if (*mc && cfg.samples < kMinMonteCarloSamples) {
            throw CLI::ValidationError("--samples", "mc needs at least 1000 samples");
        }
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        if (code != 0) {
            err << app.help();
            return kExitUsage;
        }
        return kExitOk;
    }

    CommandResult result;
    try {
        if (*chsh) {
            result = cmd_chsh(cfg);
        } else if (*threshold) {
            result = cmd_threshold(cfg);
        } else if (*wgrid) {
            result = cmd_wigner_grid(cfg, slice);
        } else if (*verify) {
            result = cmd_verify_protocol(cfg, inject);
        } else if (*nogo) {
            result = cmd_nogo(cfg);
        } else if (*mc) {
            result = cmd_mc(cfg);
        } else if (*scan) {
            result = cmd_scan(cfg, resolution);
        } else {
            result = cmd_lhv_check(cfg, full4d);
        }
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    if (output_path.empty()) {
        out << result.output << std::flush;
    } else {
        try {
            write_atomically(output_path, result.output);
        } catch (const std::exception &e) {
            err << "error: " << e.what() << "\n";
            return kExitUsage;
        }
    }
    return result.exit_code;
}

}  // namespace phasebell::cli
