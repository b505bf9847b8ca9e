#pragma once

#include <string>
#include <vector>

#include "magic/params_io.hpp"
#include "magic/program.hpp"
#include "magic/waveform.hpp"

namespace magic {

// The whole-run waveform of one column (or control line): the per-cycle
// pulses placed at their absolute times, 0 V elsewhere.
PwlWaveform global_column_waveform(const std::vector<CycleDrive>& schedule,
                                   const Timing& timing, int cell);
PwlWaveform global_gate_waveform(const std::vector<CycleDrive>& schedule,
                                 const Timing& timing, const VoltageLevels& levels,
                                 int cell);
PwlWaveform global_row_control_waveform(const std::vector<CycleDrive>& schedule,
                                        const Timing& timing,
                                        const VoltageLevels& levels);

// `t v` pairs, one per line, scientific notation (6 significant digits).
std::string emit_pwl_file(const PwlWaveform& w);

struct SpiceDeck {
    std::string deck; // the .sp text
    struct Sidecar {
        std::string filename; // relative to the deck
        std::string content;
    };
    std::vector<Sidecar> sidecars; // one .pwl per column, gate line and row control
};

// Emits a simulator-agnostic deck equivalent to the schedule: one device
// subcircuit instance per cell (nodes col<k>, mid<k>, row), PWL sources for
// columns, gate lines and the row-switch control, a transient statement sized
// by schedule_duration, and per-device power measurements. Deterministic byte
// output for identical inputs. `stem` names the sidecar files.
SpiceDeck emit_deck(const ExecutionProgram& p, const std::vector<CycleDrive>& schedule,
                    const SimParams& params, const std::string& stem);

} // namespace magic
