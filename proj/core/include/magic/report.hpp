#pragma once

#include <map>
#include <string>
#include <vector>

#include "magic/program.hpp"
#include "magic/simulator.hpp"

namespace magic {

// Coarse literature estimator: energy = count * published per-op average.
struct CoarseModel {
    double avg_not_energy = 46.53e-15; // joules
    double avg_nor_energy = 53.75e-15; // joules

    static CoarseModel pulse() { return {46.53e-15, 53.75e-15}; } // pulse-mode averages
    static CoarseModel dc() { return {47.31e-15, 55.04e-15}; }    // DC-mode averages
};

double coarse_estimate(long n_not, long n_nor, const CoarseModel& m);

// One benchmark × input-pattern row of the comparison table.
struct RunSummary {
    std::string benchmark;
    int n_pi = 0, n_po = 0;
    int cycles = 0; // schedule cycles actually simulated
    int n_not = 0, n_nor = 0;
    std::string pattern; // "all0", "all1", "alt" or explicit bits
    double coarse = 0.0; // joules
    double e_input_load = 0.0, e_init = 0.0, e_exec = 0.0, e_read = 0.0;

    double fine_total() const { return e_input_load + e_init + e_exec + e_read; }
    double init_exec_ratio(bool fold_input_load) const;
};

// Aligned plain-text comparison table (Init / Exec / Read columns, ratios as
// `NN.N×`). fold_input_load merges InputLoad into Init (default view).
std::string render_comparison(const std::vector<RunSummary>& rows,
                              bool fold_input_load = true);
std::string render_comparison_csv(const std::vector<RunSummary>& rows);

// Human-readable per-run energy report with readouts.
std::string render_energy_report(const EnergyReport& report,
                                 const ExecutionProgram& program,
                                 const std::map<std::string, int>& readouts,
                                 bool fold_input_load = false);

// Machine-readable document: one object per device per category (joules),
// plus per-cycle totals, category totals, peripheral/source accounting and
// readouts.
std::string energy_report_json(const EnergyReport& report,
                               const ExecutionProgram& program,
                               const std::map<std::string, int>& readouts);

} // namespace magic
