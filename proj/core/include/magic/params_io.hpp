#pragma once

#include <string>

#include "magic/device.hpp"
#include "magic/simulator.hpp"
#include "magic/waveform.hpp"

namespace magic {

// Everything a simulation run needs, bundled for file I/O and the CLI.
struct SimParams {
    VteamParams device;
    VoltageLevels levels;
    Timing timing;
    CircuitConfig circuit;

    void check() const; // validates all four groups
};

// Parses a flat `name = value` parameter file (SI units, '#' comments) on top
// of `base`. Recognized keys are the VteamParams fields (v_t_set, v_t_reset,
// k_set, k_reset, alpha_set, alpha_reset, r_on, r_off), the VoltageLevels
// fields (v_input_write, v_init, v_exec, v_read, v_gate_on, v_gate_off,
// v_reset_write), the Timing fields (pulse_width, edge_time, settle_gap) and
// the CircuitConfig fields (r_selector_on, r_selector_off, r_row_switch, dt,
// kcl_abs_tol, kcl_rel_tol, max_newton_iters). Unknown keys are ParseErrors;
// the merged result is validated before returning.
SimParams parse_params(const std::string& text, SimParams base = {});

// Loads parse_params from a file; throws IoError when unreadable.
SimParams load_params_file(const std::string& path, SimParams base = {});

// Renders the device parameter subset as a loadable file, with an optional
// leading comment block (each line emitted after "# ").
std::string format_device_params(const VteamParams& p,
                                 const std::string& comment = "");

// Renders every recognized key (device, levels, timing, circuit).
std::string format_params(const SimParams& p, const std::string& comment = "");

// Reads/writes a whole file; throws IoError on failure.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace magic
