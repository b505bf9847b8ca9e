#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "magic/device.hpp"
#include "magic/program.hpp"
#include "magic/waveform.hpp"

namespace magic {

// Fixed circuit surroundings of the memristor row: every cell is
// column source -> selector -> memristor -> shared row node, and the row node
// reaches ground through the row switch whenever a cycle grounds it.
struct CircuitConfig {
    double r_selector_on = 50.0;   // ohms
    double r_selector_off = 1.0e10; // ohms (unselected leakage path)
    double r_row_switch = 10.0;    // ohms, when the row is grounded
    double dt = 0.5e-12;           // integration step, seconds
    double kcl_abs_tol = 1e-12;    // amperes
    double kcl_rel_tol = 1e-9;     // relative to the largest branch current
    int max_newton_iters = 50;

    // Throws ValidationError unless tolerances are positive and
    // dt <= pulse_width / 100.
    void check(const Timing& timing) const;
};

struct CrossbarState {
    std::vector<DeviceState> cells;
};

// Time series of the row voltage and each device's terminal quantities.
struct SimTrace {
    std::vector<double> t;
    std::vector<double> v_row;
    std::vector<std::vector<double>> v_device; // [cell][sample]
    std::vector<std::vector<double>> i_device; // [cell][sample]
    std::vector<std::vector<double>> x;        // [cell][sample]
};

// Per-device, per-cycle, per-category energy bookkeeping. "Device" energies
// count only memristor dissipation; selector and row-switch losses are
// tracked separately as peripheral energy.
struct EnergyReport {
    std::vector<std::string> cycle_labels;
    std::vector<Category> cycle_categories;
    std::vector<std::array<double, 2>> cycle_window; // [start, end] seconds

    std::vector<std::vector<double>> per_cell_cycle; // [cycle][cell], joules
    std::vector<double> per_cycle;                   // device total per cycle
    std::array<double, kCategoryCount> category_totals{}; // device energy by category
    std::vector<std::array<double, kCategoryCount>> per_cell_category;

    double peripheral_selector = 0.0; // joules in selector switches
    double peripheral_row = 0.0;      // joules in the row ground switch
    double source_delivered = 0.0;    // sum over columns of integral v_source * i_branch

    // Worst KCL residual across all accepted steps, normalized by the
    // step's own tolerance (abs_tol + rel_tol * max |i|); <= 1 when honored.
    double max_kcl_residual_ratio = 0.0;
    double max_kcl_residual = 0.0; // amperes

    double device_total() const;
    double peripheral_total() const { return peripheral_selector + peripheral_row; }
};

struct RowSolution {
    double v_row = 0.0;
    double residual = 0.0; // amperes, at the accepted solution
    double tolerance = 0.0; // amperes, the bound the residual was held to
    int iterations = 0;
};

// Solves KCL at the shared row node for the selected branches:
//   sum_k g_k * (v_col_k - v_row) [+ (0 - v_row)/r_row_switch when grounded] = 0
// by bracketing between the extreme driven potentials and safeguarded
// Newton/bisection until |residual| <= kcl_abs_tol + kcl_rel_tol * max|i_k|.
// With the row floating and no gate on, no current can flow: returns
// prev_v_row unchanged. Throws SolverError on non-convergence.
RowSolution solve_row_voltage(const VteamParams& params, const CrossbarState& state,
                              const std::vector<double>& v_columns,
                              const std::vector<char>& gates_on, bool row_grounded,
                              const CircuitConfig& config, double prev_v_row);

struct SimOptions {
    bool record_trace = false;
    bool read_outputs_only = false; // restrict the Read cycle gates to declared outputs
};

// Marches one cycle: steps subdivide each PWL segment (never straddling an
// edge), each step solves the row node, advances every device state, and
// accumulates trapezoidal v*i energy for every device — selected branches
// through r_selector_on, unselected ones through the r_selector_off leakage
// path. Returns per-cell device energy for the cycle; peripheral and source
// energies are accumulated into the report.
struct CycleResult {
    std::vector<double> per_cell_energy;
    double source_energy = 0.0;
    double selector_energy = 0.0;
    double row_switch_energy = 0.0;
    double max_residual_ratio = 0.0;
    double max_residual = 0.0;
};
CycleResult run_cycle(const VteamParams& params, CrossbarState& state,
                      const CycleDrive& cycle, const CircuitConfig& config,
                      double t_start, double& v_row_prev, SimTrace* trace);

// bit = 1 iff R(x) < sqrt(r_on * r_off); ties resolve to 0.
std::vector<int> readout(const VteamParams& params, const CrossbarState& state);

struct RunResult {
    SimTrace trace;
    EnergyReport report;
    std::map<std::string, int> readouts; // program outputs, from the trailing Read
    CrossbarState final_state;
};

// Builds the schedule for `p` and the input assignment, then simulates it from
// an all-HRS row (or `warm_start` when given) and reads the outputs back.
RunResult run_program(const ExecutionProgram& p,
                      const std::map<std::string, int>& input_bits,
                      const VoltageLevels& levels, const Timing& timing,
                      const VteamParams& params, const CircuitConfig& config,
                      const SimOptions& options = {},
                      const CrossbarState* warm_start = nullptr);

// Trapezoidal integral of uniformly sampled power (step h between samples).
double integrate_energy(const std::vector<double>& power, double h);

// Trace CSV: t_s,v_row,cell,v_device,i_device,x — one row per sample per cell,
// optionally keeping only every `decimation`-th sample.
std::string trace_csv(const SimTrace& trace, int decimation = 1);

} // namespace magic
