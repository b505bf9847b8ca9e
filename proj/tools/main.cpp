#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "magic/calibration.hpp"
#include "magic/errors.hpp"
#include "magic/mapper.hpp"
#include "magic/netlist.hpp"
#include "magic/params_io.hpp"
#include "magic/program.hpp"
#include "magic/report.hpp"
#include "magic/simulator.hpp"
#include "magic/spice.hpp"

namespace {

using namespace magic;

SimParams load_params_or_default(const std::string& path) {
    if (path.empty()) return SimParams{};
    return load_params_file(path);
}

// Expands the pattern notation into per-input bits: all0, all1, alt
// (1,0,1,... over the declared input order) or an explicit bit string.
std::map<std::string, int> expand_inputs(const ExecutionProgram& p,
                                         const std::string& pattern) {
    std::map<std::string, int> bits;
    const size_t n = p.inputs.size();
    if (pattern == "all0" || pattern == "all1") {
        for (const auto& in : p.inputs) bits[in.name] = pattern == "all1";
        return bits;
    }
    if (pattern == "alt") {
        for (size_t i = 0; i < n; ++i) bits[p.inputs[i].name] = (i % 2 == 0) ? 1 : 0;
        return bits;
    }
    if (pattern.size() != n)
        throw ValidationError("input pattern \"" + pattern + "\" has " +
                              std::to_string(pattern.size()) + " bits but the program has " +
                              std::to_string(n) + " inputs");
    for (size_t i = 0; i < n; ++i) {
        if (pattern[i] != '0' && pattern[i] != '1')
            throw ValidationError("input pattern \"" + pattern +
                                  "\" contains a character other than 0/1");
        bits[p.inputs[i].name] = pattern[i] - '0';
    }
    return bits;
}

ExecutionProgram load_program(const std::string& path,
                              std::vector<std::string>* warnings) {
    return parse_simpler(read_text_file(path), warnings);
}

void write_or_print(const std::string& path, const std::string& content) {
    if (path.empty())
        std::fputs(content.c_str(), stdout);
    else
        write_text_file(path, content);
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
}

CrossbarState read_state_file(const std::string& path, int row_size) {
    CrossbarState st;
    st.cells.assign(row_size, DeviceState{0.0});
    std::istringstream in(read_text_file(path));
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (first && line.rfind("cell,", 0) == 0) {
            first = false;
            continue;
        }
        first = false;
        const size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw ParseError("state file " + path + ": expected `cell,x` lines");
        const int cell = std::stoi(line.substr(0, comma));
        const double x = std::stod(line.substr(comma + 1));
        if (cell < 0 || cell >= row_size)
            throw ValidationError("state file " + path + ": cell " +
                                  std::to_string(cell) + " outside the row");
        if (x < 0.0 || x > 1.0)
            throw ValidationError("state file " + path + ": x must lie in [0,1]");
        st.cells[cell].x = x;
    }
    return st;
}

std::string format_state(const CrossbarState& st) {
    std::string out = "cell,x\n";
    char buf[64];
    for (size_t k = 0; k < st.cells.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%zu,%.12g\n", k, st.cells[k].x);
        out += buf;
    }
    return out;
}

struct MapArgs {
    std::string netlist;
    std::string output;
    int row_size = 0;
};

int run_map(const MapArgs& a) {
    const GateNetlist n = parse_netlist(read_text_file(a.netlist));
    std::optional<int> row;
    if (a.row_size > 0) row = a.row_size;
    const ExecutionProgram p = map_to_row(n, row);
    std::vector<std::string> warnings;
    const std::string text = emit_simpler(p, &warnings);
    print_warnings(warnings);
    write_or_print(a.output, text);
    return 0;
}

struct SimulateArgs {
    std::string mapping;
    std::string inputs;
    std::string params;
    std::string output;
    std::string trace;
    int trace_decimation = 1;
    std::string schedule_csv_path;
    std::string report_json;
    std::string state_in;
    std::string state_out;
    bool fold_input_load = false;
    bool read_outputs_only = false;
};

int run_simulate(const SimulateArgs& a) {
    const SimParams sp = load_params_or_default(a.params);
    std::vector<std::string> warnings;
    const ExecutionProgram p = load_program(a.mapping, &warnings);
    print_warnings(warnings);
    const auto bits = expand_inputs(p, a.inputs);

    if (!a.schedule_csv_path.empty()) {
        const auto schedule = build_schedule(p, bits, sp.levels, sp.timing);
        write_text_file(a.schedule_csv_path, schedule_csv(schedule, sp.timing));
    }

    SimOptions options;
    options.record_trace = !a.trace.empty();
    options.read_outputs_only = a.read_outputs_only;

    std::optional<CrossbarState> warm;
    if (!a.state_in.empty()) warm = read_state_file(a.state_in, p.row_size);

    const RunResult run = run_program(p, bits, sp.levels, sp.timing, sp.device,
                                      sp.circuit, options, warm ? &*warm : nullptr);

    if (!a.trace.empty()) write_text_file(a.trace, trace_csv(run.trace, a.trace_decimation));
    if (!a.report_json.empty())
        write_text_file(a.report_json, energy_report_json(run.report, p, run.readouts));
    if (!a.state_out.empty()) write_text_file(a.state_out, format_state(run.final_state));

    write_or_print(a.output,
                   render_energy_report(run.report, p, run.readouts, a.fold_input_load));
    return 0;
}

struct CalibrateArgs {
    bool target_table1 = false;
    std::string params;
    std::string output;
};

int run_calibrate(const CalibrateArgs& a) {
    const SimParams base = load_params_or_default(a.params);
    const Table1Fit fit = fit_table1(base);

    std::string table = "scenario      target_fJ  achieved_fJ  rel_error\n";
    char buf[128];
    for (const auto& row : fit.rows()) {
        std::snprintf(buf, sizeof buf, "%-12s %10.3f %12.3f %+9.2f%%\n", row.name.c_str(),
                      row.target * 1e15, row.achieved * 1e15, row.rel_error * 100.0);
        table += buf;
    }
    std::snprintf(buf, sizeof buf, "worst |relative error|: %.2f%%\n",
                  fit.worst_rel_error * 100.0);
    table += buf;

    const std::string params_text = format_params(
        fit.params,
        "fitted to the published single-pulse energies\nadjusted: r_off, k_set, k_reset");
    if (a.output.empty()) {
        std::fputs(params_text.c_str(), stdout);
        std::fputs(table.c_str(), stderr);
    } else {
        write_text_file(a.output, params_text);
        std::fputs(table.c_str(), stdout);
    }
    return 0;
}

struct ExportArgs {
    std::string mapping;
    std::string inputs;
    std::string params;
    std::string output;
};

int run_export_spice(const ExportArgs& a) {
    const SimParams sp = load_params_or_default(a.params);
    std::vector<std::string> warnings;
    const ExecutionProgram p = load_program(a.mapping, &warnings);
    print_warnings(warnings);
    const auto schedule = build_schedule(p, expand_inputs(p, a.inputs), sp.levels,
                                         sp.timing);

    const std::filesystem::path deck_path(a.output);
    const std::string stem = deck_path.stem().string();
    const SpiceDeck deck = emit_deck(p, schedule, sp, stem);
    write_text_file(a.output, deck.deck);
    const std::filesystem::path dir = deck_path.parent_path();
    for (const auto& side : deck.sidecars)
        write_text_file((dir / side.filename).string(), side.content);
    return 0;
}

struct ReportArgs {
    std::vector<std::string> benchmarks;
    std::vector<std::string> patterns{"all0", "all1", "alt"};
    std::string params;
    std::string output;
    bool dc_averages = false;
    bool csv = false;
    bool no_fold = false;
};

RunSummary summarize(const std::string& file, const std::string& pattern,
                     const SimParams& sp, const CoarseModel& coarse) {
    ExecutionProgram p;
    int n_not = 0, n_nor = 0;
    if (std::filesystem::path(file).extension() == ".json") {
        p = parse_simpler(read_text_file(file), nullptr);
        for (const auto& cyc : p.cycles) {
            if (cyc.op.kind == OpKind::Not) ++n_not;
            if (cyc.op.kind == OpKind::Nor) ++n_nor;
        }
    } else {
        const GateNetlist n = parse_netlist(read_text_file(file));
        for (const auto& g : n.gates)
            (g.kind == GateNetlist::GateKind::Not ? n_not : n_nor) += 1;
        p = map_to_row(n);
    }

    const RunResult run = run_program(p, expand_inputs(p, pattern), sp.levels, sp.timing,
                                      sp.device, sp.circuit);
    RunSummary s;
    s.benchmark = std::filesystem::path(file).stem().string();
    s.n_pi = static_cast<int>(p.inputs.size());
    s.n_po = static_cast<int>(p.outputs.size());
    s.cycles = static_cast<int>(run.report.cycle_labels.size());
    s.n_not = n_not;
    s.n_nor = n_nor;
    s.pattern = pattern;
    s.coarse = coarse_estimate(n_not, n_nor, coarse);
    s.e_input_load = run.report.category_totals[static_cast<int>(Category::InputLoad)];
    s.e_init = run.report.category_totals[static_cast<int>(Category::Init)];
    s.e_exec = run.report.category_totals[static_cast<int>(Category::Exec)];
    s.e_read = run.report.category_totals[static_cast<int>(Category::Read)];
    return s;
}

int run_report(const ReportArgs& a) {
    const SimParams sp = load_params_or_default(a.params);
    const CoarseModel coarse = a.dc_averages ? CoarseModel::dc() : CoarseModel::pulse();

    // One task per benchmark x pattern; results keep command-line order.
    std::vector<std::future<RunSummary>> tasks;
    for (const auto& file : a.benchmarks)
        for (const auto& pattern : a.patterns)
            tasks.push_back(std::async(std::launch::async, summarize, file, pattern, sp,
                                       coarse));
    std::vector<RunSummary> rows;
    rows.reserve(tasks.size());
    for (auto& t : tasks) rows.push_back(t.get());

    write_or_print(a.output, a.csv ? render_comparison_csv(rows)
                                   : render_comparison(rows, !a.no_fold));
    return 0;
}

void add_params_option(CLI::App* cmd, std::string& target) {
    cmd->add_option("--params", target, "parameter file (defaults built in)")
        ->envname("MAGIC_ENERGY_PARAMS");
}

const char* const kPatternHelp =
    "all0, all1, alt (1,0,1,... over declared inputs) or an explicit bit string";

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fine-grained energy estimator for MAGIC single-row programs"};
    app.require_subcommand(1);

    MapArgs map_args;
    CLI::App* map_cmd =
        app.add_subcommand("map", "schedule a NOR/NOT netlist onto one crossbar row");
    map_cmd->add_option("netlist", map_args.netlist, "netlist file")->required();
    map_cmd->add_option("--row-size", map_args.row_size, "fix the row size");
    map_cmd->add_option("-o,--output", map_args.output, "output file (default stdout)");

    SimulateArgs sim_args;
    CLI::App* sim_cmd =
        app.add_subcommand("simulate", "run a mapping file and report per-cycle energy");
    sim_cmd->add_option("mapping", sim_args.mapping, "mapping file")->required();
    sim_cmd->add_option("--inputs", sim_args.inputs, kPatternHelp)
        ->required()
        ->check(CLI::Validator(
            [](std::string& s) -> std::string {
                if (s == "all0" || s == "all1" || s == "alt") return {};
                if (s.empty()) return "pattern must not be empty";
                for (char c : s)
                    if (c != '0' && c != '1')
                        return "pattern must be all0, all1, alt or a 0/1 string";
                return {};
            },
            "PATTERN"));
    add_params_option(sim_cmd, sim_args.params);
    sim_cmd->add_option("-o,--output", sim_args.output, "report file (default stdout)");
    sim_cmd->add_option("--trace", sim_args.trace, "write the waveform trace CSV here");
    sim_cmd->add_option("--trace-decimation", sim_args.trace_decimation,
                        "keep every Nth trace sample")
        ->check(CLI::PositiveNumber);
    sim_cmd->add_option("--schedule-csv", sim_args.schedule_csv_path,
                        "write the drive schedule breakpoints CSV here");
    sim_cmd->add_option("--report-json", sim_args.report_json,
                        "write the machine-readable energy report here");
    sim_cmd->add_option("--state-in", sim_args.state_in,
                        "start from this cell,x state file instead of all-HRS");
    sim_cmd->add_option("--state-out", sim_args.state_out,
                        "write the final cell,x state file here");
    sim_cmd->add_flag("--fold-input-load", sim_args.fold_input_load,
                      "fold InputLoad into Init in the report");
    sim_cmd->add_flag("--read-outputs-only", sim_args.read_outputs_only,
                      "select only declared output cells during the Read cycle");

    CalibrateArgs cal_args;
    CLI::App* cal_cmd = app.add_subcommand(
        "calibrate", "fit device parameters to the published pulse energies");
    cal_cmd->add_flag("--target-table1", cal_args.target_table1,
                      "fit r_off, k_set, k_reset to the published single-pulse energies")
        ->required();
    add_params_option(cal_cmd, cal_args.params);
    cal_cmd->add_option("-o,--output", cal_args.output,
                        "write the fitted parameter file here (default stdout)");

    ExportArgs exp_args;
    CLI::App* exp_cmd = app.add_subcommand(
        "export-spice", "emit an equivalent SPICE deck with PWL sidecar files");
    exp_cmd->add_option("mapping", exp_args.mapping, "mapping file")->required();
    exp_cmd->add_option("--inputs", exp_args.inputs, kPatternHelp)->required();
    add_params_option(exp_cmd, exp_args.params);
    exp_cmd->add_option("-o,--output", exp_args.output, "deck file (.sp)")->required();

    ReportArgs rep_args;
    CLI::App* rep_cmd = app.add_subcommand(
        "report", "compare fine-grained and coarse estimates over benchmarks");
    rep_cmd->add_option("benchmarks", rep_args.benchmarks,
                        "netlist (.net) or mapping (.json) files")
        ->required();
    rep_cmd->add_option("--patterns", rep_args.patterns, "input patterns to run")
        ->delimiter(',');
    add_params_option(rep_cmd, rep_args.params);
    rep_cmd->add_option("-o,--output", rep_args.output, "table file (default stdout)");
    rep_cmd->add_flag("--dc-averages", rep_args.dc_averages,
                      "use the DC-column per-op averages for the coarse estimate");
    rep_cmd->add_flag("--csv", rep_args.csv, "emit CSV instead of the aligned table");
    rep_cmd->add_flag("--no-fold", rep_args.no_fold,
                      "report InputLoad separately from Init");

    try {
        app.parse(argc, argv);
        if (map_cmd->parsed()) return run_map(map_args);
        if (sim_cmd->parsed()) return run_simulate(sim_args);
        if (cal_cmd->parsed()) return run_calibrate(cal_args);
        if (exp_cmd->parsed()) return run_export_spice(exp_args);
        if (rep_cmd->parsed()) return run_report(rep_args);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e); // prints the diagnostic
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
