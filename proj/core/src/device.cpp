#include "magic/device.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "magic/errors.hpp"

namespace magic {

void VteamParams::check() const {
    std::ostringstream bad;
    if (!(r_on > 0.0 && r_on < r_off))
        bad << "requires 0 < r_on < r_off (r_on=" << r_on << ", r_off=" << r_off << "); ";
    if (!(v_t_reset < 0.0 && 0.0 < v_t_set))
        bad << "requires v_t_reset < 0 < v_t_set (v_t_reset=" << v_t_reset
            << ", v_t_set=" << v_t_set << "); ";
    if (!(k_set > 0.0 && k_reset > 0.0))
        bad << "requires k_set > 0 and k_reset > 0; ";
    if (!(alpha_set >= 1.0 && alpha_reset >= 1.0))
        bad << "requires alpha_set >= 1 and alpha_reset >= 1; ";
    const std::string msg = bad.str();
    if (!msg.empty()) throw ValidationError("device parameters: " + msg);
}

double resistance(const VteamParams& p, const DeviceState& s) {
    return p.r_off - s.x * (p.r_off - p.r_on);
}

double current(const VteamParams& p, const DeviceState& s, double v) {
    return v / resistance(p, s);
}

double state_rate(const VteamParams& p, const DeviceState& s, double v) {
    if (v > p.v_t_set)
        return p.k_set * std::pow(v / p.v_t_set - 1.0, p.alpha_set) * (1.0 - s.x);
    if (v < p.v_t_reset)
        return -p.k_reset * std::pow(v / p.v_t_reset - 1.0, p.alpha_reset) * s.x;
    return 0.0;
}

DeviceState step_state(const VteamParams& p, DeviceState s, double v, double dt) {
    // Classic RK4 on dx/dt = f(x) with v held constant over the step.
    const double x0 = s.x;
    const double k1 = state_rate(p, {x0}, v);
    const double k2 = state_rate(p, {x0 + 0.5 * dt * k1}, v);
    const double k3 = state_rate(p, {x0 + 0.5 * dt * k2}, v);
    const double k4 = state_rate(p, {x0 + dt * k3}, v);
    s.x = x0 + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    s.x = std::clamp(s.x, 0.0, 1.0);
    return s;
}

double switch_time(const VteamParams& p, double v, SwitchDirection dir,
                   double t_max, double dt) {
    const bool set = dir == SwitchDirection::Set;
    DeviceState s{set ? 0.0 : 1.0};
    const double target = set ? 0.99 : 0.01;
    double t = 0.0;
    while (t < t_max) {
        const DeviceState next = step_state(p, s, v, dt);
        const bool crossed = set ? (next.x >= target) : (next.x <= target);
        if (crossed) {
            // Linear interpolation inside the step for a sub-dt estimate.
            const double f = (target - s.x) / (next.x - s.x);
            return t + f * dt;
        }
        s = next;
        t += dt;
    }
    return std::numeric_limits<double>::infinity();
}

VteamParams calibrate_k(VteamParams p, double target_voltage,
                        double target_switch_time, SwitchDirection dir) {
    p.check();
    if (!(target_switch_time > 0.0))
        throw CalibrationError("calibrate_k: target switch time must be positive");
    const bool set = dir == SwitchDirection::Set;
    if (set && !(target_voltage > p.v_t_set))
        throw CalibrationError("calibrate_k: SET target voltage " +
                               std::to_string(target_voltage) +
                               " V does not exceed v_t_set; the switching rate is identically 0");
    if (!set && !(target_voltage < p.v_t_reset))
        throw CalibrationError("calibrate_k: RESET target voltage " +
                               std::to_string(target_voltage) +
                               " V does not fall below v_t_reset; the switching rate is identically 0");

    const double march_dt = target_switch_time / 4000.0;
    const double t_max = 1000.0 * target_switch_time;
    // Voltage-dependent rate factor, per unit k (the state window only makes
    // the true rate smaller than k * factor).
    const double vt = set ? p.v_t_set : p.v_t_reset;
    const double alpha = set ? p.alpha_set : p.alpha_reset;
    const double rate_factor = std::pow(target_voltage / vt - 1.0, alpha);
    auto time_for = [&](double k) {
        VteamParams q = p;
        (set ? q.k_set : q.k_reset) = k;
        // Cap the march step so k * factor * dt stays small: at large k a
        // fixed step drives RK4 unstable and the clamp pins the state at its
        // start value, which would read as "never switches".
        const double stable_dt = 0.1 / (k * rate_factor);
        return switch_time(q, target_voltage, dir, t_max,
                           std::min(march_dt, stable_dt));
    };

    // Switch time is strictly decreasing in k, so bisect in log-space.
    double k_lo = 1.0, k_hi = 1.0e18;
    if (!(time_for(k_lo) > target_switch_time && time_for(k_hi) < target_switch_time))
        throw CalibrationError("calibrate_k: target not bracketed by k in [1, 1e18] 1/s");
    for (int i = 0; i < 200; ++i) {
        const double k_mid = std::sqrt(k_lo * k_hi);
        const double t_mid = time_for(k_mid);
        if (t_mid > target_switch_time)
            k_lo = k_mid;
        else
            k_hi = k_mid;
        if (k_hi / k_lo < 1.0 + 1e-6) break;
    }
    const double k = std::sqrt(k_lo * k_hi);
    const double achieved = time_for(k);
    if (!(std::abs(achieved - target_switch_time) <= 0.02 * target_switch_time))
        throw CalibrationError("calibrate_k: bisection failed to land within 2% of target time");
    (set ? p.k_set : p.k_reset) = k;
    return p;
}

} // namespace magic
