#pragma once

namespace magic {

// VTEAM behavioral memristor parameters.
//
// The device conducts ohmically through a state-dependent resistance
// R(x) = r_off - x*(r_off - r_on), and the internal state x in [0,1]
// drifts only when the applied voltage crosses one of the two thresholds:
//
//   dx/dt =  k_set   * (v/v_t_set   - 1)^alpha_set   * (1 - x)   for v > v_t_set
//   dx/dt = -k_reset * (v/v_t_reset - 1)^alpha_reset * x         for v < v_t_reset
//   dx/dt =  0                                                   otherwise
//
// Linear window functions (1-x) / (x) saturate the state at the endpoints.
// The shipped defaults use k constants calibrated so that a +2.0 V drive
// completes a SET (x: 0 -> 0.99) in 0.1 ns and a -1.0 V drive completes a
// RESET (x: 1 -> 0.01) in 1.0 ns.
struct VteamParams {
    double v_t_set = 1.2;        // SET threshold, volts (> 0)
    double v_t_reset = -0.4;     // RESET threshold, volts (< 0)
    double k_set = 1.554245e11;  // SET rate constant, 1/s
    double k_reset = 1.364495e9; // RESET rate constant, 1/s
    double alpha_set = 3.0;      // SET rate exponent (>= 1)
    double alpha_reset = 3.0;    // RESET rate exponent (>= 1)
    double r_on = 4.0e3;         // LRS resistance, ohms
    double r_off = 2.0e7;        // HRS resistance, ohms

    // Throws ValidationError when an invariant is broken
    // (0 < r_on < r_off, v_t_reset < 0 < v_t_set, k > 0, alpha >= 1).
    void check() const;
};

// Normalized internal state: x = 1 is LRS (logic '1'), x = 0 is HRS (logic '0').
struct DeviceState {
    double x = 0.0;
};

// R(x) = r_off - x*(r_off - r_on); strictly decreasing in x.
double resistance(const VteamParams& p, const DeviceState& s);

// Ohmic conduction, I = v / R(x). v is column-terminal minus row-terminal voltage.
double current(const VteamParams& p, const DeviceState& s, double v);

// Threshold-gated state velocity dx/dt (see VteamParams).
double state_rate(const VteamParams& p, const DeviceState& s, double v);

// One fixed-step RK4 integration of state_rate at constant v, clamped to [0,1].
DeviceState step_state(const VteamParams& p, DeviceState s, double v, double dt);

enum class SwitchDirection { Set, Reset };

// Time for the state to travel from the far endpoint to within 0.01 of the
// opposite endpoint under a constant voltage (SET: 0 -> 0.99, RESET: 1 -> 0.01),
// found by marching step_state with step dt and interpolating the crossing.
// Returns +infinity when the crossing is not reached within t_max.
double switch_time(const VteamParams& p, double v, SwitchDirection dir,
                   double t_max, double dt);

// Adjusts k_set (or k_reset) by bisection so the device switches in
// target_switch_time (within 2%) under constant target_voltage.
// Throws CalibrationError when the target is unreachable, e.g. the voltage
// does not cross the relevant threshold.
VteamParams calibrate_k(VteamParams p, double target_voltage,
                        double target_switch_time, SwitchDirection dir);

} // namespace magic
