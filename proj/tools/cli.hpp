#pragma once

// Command-line front end: analyze, recommend, simulate, sweep.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or config error.

#include <cstdint>
#include <exception>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "systolic/systolic.hpp"

namespace systolic::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

inline constexpr const char* kPowerEnv = "SYSTOLIC_POWER_PER_PE_W";
inline constexpr const char* kClockEnv = "SYSTOLIC_CLOCK_HZ";
inline constexpr Count kSimulateGuard = 64;

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Format { Text, Json };

struct DimsArgs {
    Count m = 0, n = 0, p = 0;
};

struct CostArgs {
    double power_w = PEConfig::kDefaultPowerPerPeW;
    double clock_hz = PEConfig::kDefaultClockHz;

    PEConfig config() const {
        try {
            return PEConfig(power_w, clock_hz);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
};

inline nlohmann::json dims_json(const MatrixDims& d) { return {{"m", d.m()}, {"n", d.n()}, {"p", d.p()}}; }

inline nlohmann::json flows_json(const std::vector<Dataflow>& flows) {
    nlohmann::json arr = nlohmann::json::array();
    for (auto f : flows) arr.push_back(std::string(short_name(f)));
    return arr;
}

inline std::string join_flows(const std::vector<Dataflow>& flows) {
    std::string out;
    for (auto f : flows) out += (out.empty() ? "" : ",") + std::string(short_name(f));
    return out;
}

inline nlohmann::json report_json(const CostReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& c : report.per_dataflow) {
        rows.push_back({{"dataflow", std::string(short_name(c.flow))},
                        {"s_r", c.shape.rows()},
                        {"s_c", c.shape.cols()},
                        {"t", c.shape.temporal()},
                        {"n_pe", c.n_pe},
                        {"n_c", c.n_c},
                        {"energy_j", c.energy_j},
                        {"is_optimal", report.is_optimal(c.flow)}});
    }
    return {{"dims", dims_json(report.dims)},
            {"config", {{"power_per_pe_w", report.config.power_per_pe_w()}, {"clock_hz", report.config.clock_hz()}}},
            {"per_dataflow", rows},
            {"optimal", flows_json(report.optimal)}};
}

inline std::string render_report_text(const CostReport& report) {
    std::ostringstream os;
    const auto& d = report.dims;
    os << "GEMM " << d.m() << " x " << d.n() << " x " << d.p() << " (M x N x P), P_PE "
       << format_value(report.config.power_per_pe_w() * 1e3) << " mW, F_clk "
       << format_value(report.config.clock_hz() / 1e6) << " MHz\n";
    os << std::left << std::setw(6) << "flow" << std::right << std::setw(8) << "S_R" << std::setw(8) << "S_C"
       << std::setw(8) << "T" << std::setw(12) << "N_PE" << std::setw(10) << "N_C" << std::setw(14) << "energy"
       << "\n";
    for (const auto& c : report.per_dataflow) {
        os << std::left << std::setw(6) << short_name(c.flow) << std::right << std::setw(8) << c.shape.rows()
           << std::setw(8) << c.shape.cols() << std::setw(8) << c.shape.temporal() << std::setw(12) << c.n_pe
           << std::setw(10) << c.n_c << std::setw(14) << format_engineering(c.energy_j)
           << (report.is_optimal(c.flow) ? "  *" : "") << "\n";
    }
    os << "optimal: " << join_flows(report.optimal) << "\n";
    return os.str();
}

inline int cmd_analyze(const MatrixDims& dims, const PEConfig& cfg, Format fmt, std::ostream& out) {
    const CostReport report = cost_report(dims, cfg);
    if (fmt == Format::Json) {
        out << report_json(report).dump(2) << "\n";
    } else {
        out << render_report_text(report);
    }
    return kExitOk;
}

inline int cmd_recommend(const MatrixDims& dims, const PEConfig& cfg, Format fmt, std::ostream& out) {
    const Recommendation rec = recommend(dims, cfg);
    if (fmt == Format::Json) {
        out << nlohmann::json{{"dims", dims_json(dims)},
                              {"optimal", flows_json(rec.flows)},
                              {"tie", rec.flows.size() > 1},
                              {"heuristic_agrees", rec.heuristic_agrees},
                              {"rationale", rec.rationale}}
                   .dump(2)
            << "\n";
    } else {
        out << "recommended: " << join_flows(rec.flows);
        if (rec.flows.size() == kAllDataflows.size()) {
            out << " (three-way tie)";
        } else if (rec.flows.size() > 1) {
            out << " (tie)";
        }
        out << "\n" << rec.rationale << "\n";
    }
    return kExitOk;
}

struct SimulateArgs {
    Dataflow flow = Dataflow::WeightStationary;
    std::uint64_t seed = 1;
    bool allow_large = false;
    bool show_trace = false;
};

inline int cmd_simulate(const MatrixDims& dims, const SimulateArgs& args, Format fmt, std::ostream& out) {
    const Count guard = args.show_trace ? kMaxTraceDim : kSimulateGuard;
    if (!args.allow_large && (dims.m() > guard || dims.n() > guard || dims.p() > guard)) {
        throw UsageError("dimensions above " + std::to_string(guard) + " need --allow-large");
    }
    IntMatrixGenerator gen(args.seed);
    const Matrix w = gen.matrix(dims.m(), dims.n());
    const Matrix i = gen.matrix(dims.n(), dims.p());

    std::string trace_text;
    SimResult result = [&] {
        if (!args.show_trace) return simulate(args.flow, w, i);
        Trace t = trace(args.flow, w, i, args.allow_large);
        trace_text = render_trace(t);
        return std::move(t.result);
    }();

    const ArrayShape shape = map_dims(dims, args.flow);
    const Count model_cycles = cycle_count(shape);
    const Count expected_macs = dims.m() * dims.n() * dims.p();
    const bool output_ok = result.output == reference_matmul(w, i);
    const bool cycles_ok = result.cycles == model_cycles;
    const bool macs_ok = result.mac_count == expected_macs;
    const bool pass = output_ok && cycles_ok && macs_ok;

    if (fmt == Format::Json) {
        nlohmann::json doc{{"dataflow", std::string(short_name(args.flow))},
                           {"dims", dims_json(dims)},
                           {"seed", args.seed},
                           {"grid", {{"s_r", shape.rows()}, {"s_c", shape.cols()}, {"t", shape.temporal()}}},
                           {"cycles", result.cycles},
                           {"model_cycles", model_cycles},
                           {"mac_count", result.mac_count},
                           {"expected_macs", expected_macs},
                           {"output_matches_reference", output_ok},
                           {"verdict", pass ? "PASS" : "FAIL"}};
        if (args.show_trace) doc["trace"] = trace_text;
        out << doc.dump(2) << "\n";
    } else {
        if (args.show_trace) out << trace_text;
        out << "simulate " << short_name(args.flow) << " " << dims.m() << "x" << dims.n() << "x" << dims.p()
            << " seed=" << args.seed << "\n";
        out << "grid " << shape.rows() << "x" << shape.cols() << " (" << num_pes(shape) << " PEs), T="
            << shape.temporal() << "\n";
        out << "cycles " << result.cycles << " (model " << model_cycles << ")\n";
        out << "macs " << result.mac_count << " (expected " << expected_macs << ")\n";
        out << "output " << (output_ok ? "matches" : "DIFFERS FROM") << " reference matmul\n";
        out << (pass ? "PASS" : "FAIL") << "\n";
    }
    return pass ? kExitOk : kExitVerificationFailed;
}

struct SweepArgs {
    std::string config_path;
    std::string csv_path = "sweep.csv";
    std::string svg_path = "sweep.svg";
};

inline int cmd_sweep(const SweepArgs& args, const PEConfig& base_cfg, Format fmt, std::ostream& out) {
    SweepSpec spec;
    spec.cfg = base_cfg;
    if (!args.config_path.empty()) spec = load_sweep_spec(args.config_path, spec);

    const auto rows = run_sweep(spec);
    emit_csv(rows, args.csv_path);
    emit_chart(rows, args.svg_path);

    nlohmann::json configs = nlohmann::json::array();
    std::string text;
    for (std::size_t k = 0; k < rows.size(); k += kAllDataflows.size()) {
        std::vector<Dataflow> optimal;
        for (std::size_t j = k; j < k + kAllDataflows.size(); ++j) {
            if (rows[j].is_optimal) optimal.push_back(rows[j].flow);
        }
        const auto d = rows[k].dims();
        configs.push_back({{"dims", dims_json(d)}, {"optimal", flows_json(optimal)}});
        text += std::to_string(d.m()) + "x" + std::to_string(d.n()) + "x" + std::to_string(d.p()) +
                "  optimal: " + join_flows(optimal) + "\n";
    }
    if (fmt == Format::Json) {
        out << nlohmann::json{{"csv", args.csv_path},
                              {"svg", args.svg_path},
                              {"rows", rows.size()},
                              {"configs", configs}}
                   .dump(2)
            << "\n";
    } else {
        out << text << "wrote " << args.csv_path << " (" << rows.size() << " rows) and " << args.svg_path << "\n";
    }
    return kExitOk;
}

/// Parses and dispatches. Output goes to `out`, diagnostics to `err`.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Systolic-array dataflow cost model and cycle-stepped simulator"};
    app.require_subcommand(1);
    app.footer(std::string("Environment:\n  ") + kPowerEnv + "  default per-PE power in watts (2.17e-3)\n  " +
               kClockEnv + "        default clock frequency in hertz (7e8)\nExit codes: 0 ok, 1 verification failure, "
                           "2 usage/config error");

    DimsArgs dims;
    CostArgs cost;
    std::string format = "text";
    SimulateArgs sim;
    std::string flow_text;
    SweepArgs sweep_args;

    auto add_dims = [&](CLI::App* sub) {
        sub->add_option("-m", dims.m, "rows of W and O")->required()->check(CLI::PositiveNumber);
        sub->add_option("-n", dims.n, "columns of W, rows of I (reduction)")->required()->check(CLI::PositiveNumber);
        sub->add_option("-p", dims.p, "columns of I and O")->required()->check(CLI::PositiveNumber);
    };
    auto add_cost = [&](CLI::App* sub) {
        sub->add_option("--power-w", cost.power_w, "per-PE power in watts")
            ->envname(kPowerEnv)
            ->check(CLI::PositiveNumber);
        sub->add_option("--clock-hz", cost.clock_hz, "PE clock frequency in hertz")
            ->envname(kClockEnv)
            ->check(CLI::PositiveNumber);
    };
    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json"}));
    };

    auto* analyze = app.add_subcommand("analyze", "Cycles, PE count and energy for all three dataflows");
    add_dims(analyze);
    add_cost(analyze);
    add_format(analyze);

    auto* rec = app.add_subcommand("recommend", "Minimum-energy dataflow with rationale");
    add_dims(rec);
    add_cost(rec);
    add_format(rec);

    auto* simulate_cmd = app.add_subcommand("simulate", "Run the cycle-stepped simulator on seeded random matrices");
    add_dims(simulate_cmd);
    add_format(simulate_cmd);
    simulate_cmd->add_option("--flow", flow_text, "ws, is or os")->required();
    simulate_cmd->add_option("--seed", sim.seed, "PRNG seed for the test matrices");
    simulate_cmd->add_flag("--allow-large", sim.allow_large, "lift the 64 (trace: 16) dimension guard");
    simulate_cmd->add_flag("--trace", sim.show_trace, "print per-cycle PE snapshots");

    auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate a grid of GEMM sizes, write CSV and SVG");
    sweep_cmd->add_option("--config", sweep_args.config_path, "JSON sweep config (keys override flags)");
    sweep_cmd->add_option("--csv", sweep_args.csv_path, "CSV output path");
    sweep_cmd->add_option("--svg", sweep_args.svg_path, "SVG output path");
    add_cost(sweep_cmd);
    add_format(sweep_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << "run with --help for usage\n";
        return kExitUsage;
    }

    const Format fmt = format == "json" ? Format::Json : Format::Text;
    try {
        if (*sweep_cmd) return cmd_sweep(sweep_args, cost.config(), fmt, out);
        const MatrixDims gemm(dims.m, dims.n, dims.p);
        if (*analyze) return cmd_analyze(gemm, cost.config(), fmt, out);
        if (*rec) return cmd_recommend(gemm, cost.config(), fmt, out);
        auto flow = parse_dataflow(flow_text);
        if (!flow) throw UsageError("--flow must be one of ws, is, os");
        sim.flow = *flow;
        return cmd_simulate(gemm, sim, fmt, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const CrossValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitVerificationFailed;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace systolic::cli
