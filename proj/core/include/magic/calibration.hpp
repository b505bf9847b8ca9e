#pragma once

#include <string>
#include <vector>

#include "magic/params_io.hpp"

namespace magic {

// Published single-pulse energy references for a 1.3 ns pulse (joules):
// the six NOR/NOT execution cases plus the two direct writes.
struct PulseEnergyTargets {
    double nor00 = 8.60e-15;  // NOR inputs 00, output stays 1
    double nor01 = 87.96e-15; // NOR inputs 01, output 1 -> 0
    double nor10 = 87.96e-15; // NOR inputs 10, output 1 -> 0
    double nor11 = 30.48e-15; // NOR inputs 11, output 1 -> 0
    double not0 = 4.32e-15;   // NOT input 0, output stays 1
    double not1 = 88.74e-15;  // NOT input 1, output 1 -> 0
    double set_write = 1272.2e-15;  // +2 V full-pulse SET write
    double reset_write = 19.01e-15; // -1 V full-pulse RESET write
};

// Device (memristor-only) energies of the eight single-cycle scenarios,
// measured with pre-set states and one pulse each.
struct ScenarioEnergies {
    double nor00 = 0, nor01 = 0, nor10 = 0, nor11 = 0;
    double not0 = 0, not1 = 0;
    double set_write = 0, reset_write = 0;
    double set_strike = 0; // SET energy accumulated up to the switching instant (x >= 0.99)

    double nor_average() const { return (nor00 + nor01 + nor10 + nor11) / 4.0; }
    double not_average() const { return (not0 + not1) / 2.0; }
};

// Runs the eight scenarios under the given parameters. Exec scenarios place
// the output cell at LRS and the inputs at the given logic states, drive
// v_exec / 0 V with the row floating; writes drive a single grounded cell.
ScenarioEnergies measure_scenarios(const SimParams& params);

struct Table1Fit {
    SimParams params;          // fitted parameter set (device fields adjusted)
    PulseEnergyTargets targets;
    ScenarioEnergies achieved;
    double worst_rel_error = 0.0; // over the eight target comparisons

    // Named (target, achieved, relative error) rows for reporting.
    struct Row {
        std::string name;
        double target = 0, achieved = 0, rel_error = 0;
    };
    std::vector<Row> rows() const;
};

// Fits {r_off, k_reset, k_set} so the eight pulse energies approach the
// published targets, keeping thresholds and alphas at their base values:
//   1. r_off by bisection on the NOT(in=0) conduction energy;
//   2. k_reset by ternary search minimizing the worst relative error over the
//      four reset-transition energies (NOT 1, NOR 01, NOR 11, RESET write);
//   3. k_set by bisection on the SET-write energy, targeting the published
//      value capped just below its reachable supremum (the pulse energy
//      saturates once switching is instantaneous).
Table1Fit fit_table1(SimParams base);

} // namespace magic
