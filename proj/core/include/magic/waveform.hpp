#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "magic/program.hpp"

namespace magic {

// Drive amplitudes for the five voltage roles of a schedule.
struct VoltageLevels {
    double v_input_write = 2.0; // SET pulse that stores a '1' input bit
    double v_init = 2.0;        // initialization SET pulse
    double v_exec = 1.0;        // gate-input drive during a NOR/NOT cycle
    double v_read = 0.2;        // non-disturbing read drive
    double v_gate_on = 2.0;     // selector control, on
    double v_gate_off = 0.0;    // selector control, off
    double v_reset_write = -1.0; // explicit RESET write (column negative, row grounded)

    // Throws ValidationError unless v_read < |v_reset_write| <= v_exec < v_init.
    void check() const;
};

struct Timing {
    double pulse_width = 1.3e-9; // full trapezoid duration, edges included
    double edge_time = 1.0e-12;  // linear rise/fall time
    double settle_gap = 0.1e-9;  // 0 V quiet time after every cycle

    // Throws ValidationError unless edge_time > 0 and pulse_width > 2*edge_time.
    void check() const;
};

// Piecewise-linear waveform; evaluation interpolates linearly between
// breakpoints and extends the end values as constants.
struct PwlWaveform {
    std::vector<std::pair<double, double>> breakpoints; // (t seconds, v volts), t strictly increasing
};

double pwl_value(const PwlWaveform& w, double t);

enum class Category { InputLoad, Init, Exec, Read };
inline constexpr int kCategoryCount = 4;
const char* category_name(Category c);

// One simulation cycle: per-column waveforms (times local to the cycle,
// spanning [0, duration]), the set of selected cells, and the row switch state.
struct CycleDrive {
    std::string label;
    Category category = Category::Read;
    std::vector<PwlWaveform> column_waveforms; // one per row cell
    std::vector<char> gates_on;                // one per row cell
    bool row_grounded = true;                  // Exec cycles float the row
    double duration = 0.0;                     // seconds
};

// Expands a program plus an input assignment into the cycle sequence:
// an optional leading InputLoad cycle (writes v_input_write to the '1' input
// cells; omitted when every input is 0), one cycle per program op (Init ops
// drive v_init grounded-row; Not/Nor ops drive v_exec on the inputs and 0 V on
// the output with the row floating), and one trailing Read cycle driving
// v_read on every cell with all gates on and the row grounded.
std::vector<CycleDrive> build_schedule(const ExecutionProgram& p,
                                       const std::map<std::string, int>& input_bits,
                                       const VoltageLevels& levels,
                                       const Timing& timing);

// Sum of cycle durations plus one settle gap per cycle.
double schedule_duration(const std::vector<CycleDrive>& cycles, const Timing& timing);

// Debug dump: one row per waveform breakpoint, absolute times.
// Header: cycle_label,category,cell,breakpoint_t_s,v_volts
std::string schedule_csv(const std::vector<CycleDrive>& cycles, const Timing& timing);

} // namespace magic
