#include "magic/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "magic/errors.hpp"
#include "magic/simulator.hpp"

namespace magic {

namespace {

PwlWaveform trapezoid(double level, const Timing& t) {
    PwlWaveform w;
    if (level == 0.0) {
        w.breakpoints = {{0.0, 0.0}, {t.pulse_width, 0.0}};
    } else {
        w.breakpoints = {{0.0, 0.0},
                         {t.edge_time, level},
                         {t.pulse_width - t.edge_time, level},
                         {t.pulse_width, 0.0}};
    }
    return w;
}

struct OnePulse {
    double device_energy = 0.0; // all participating memristors, joules
    double strike_energy = 0.0; // written cell, up to the x >= 0.99 sample
    std::vector<double> x_end;
};

// Runs a single pulse over `levels.size()` cells with the given initial
// states, every gate on. Exec scenarios float the row, writes ground it.
OnePulse one_pulse(const SimParams& sp, const std::vector<double>& x0,
                   const std::vector<double>& drive, bool row_grounded,
                   bool want_strike = false) {
    CycleDrive cycle;
    cycle.label = "pulse";
    cycle.category = row_grounded ? Category::Init : Category::Exec;
    cycle.row_grounded = row_grounded;
    cycle.duration = sp.timing.pulse_width;
    for (double level : drive) cycle.column_waveforms.push_back(trapezoid(level, sp.timing));
    cycle.gates_on.assign(drive.size(), 1);

    CrossbarState state;
    for (double x : x0) state.cells.push_back({x});

    SimTrace trace;
    double v_row_prev = 0.0;
    const CycleResult res = run_cycle(sp.device, state, cycle, sp.circuit, 0.0,
                                      v_row_prev, want_strike ? &trace : nullptr);
    OnePulse out;
    for (double e : res.per_cell_energy) out.device_energy += e;
    for (const auto& cell : state.cells) out.x_end.push_back(cell.x);

    if (want_strike) {
        double acc = 0.0;
        out.strike_energy = out.device_energy; // fallback: never crossed
        for (size_t i = 0; i + 1 < trace.t.size(); ++i) {
            if (trace.x[0][i] >= 0.99) {
                out.strike_energy = acc;
                break;
            }
            const double h = trace.t[i + 1] - trace.t[i];
            const double p0 = trace.v_device[0][i] * trace.i_device[0][i];
            const double p1 = trace.v_device[0][i + 1] * trace.i_device[0][i + 1];
            acc += 0.5 * h * (p0 + p1);
        }
    }
    return out;
}

double nor_energy(const SimParams& sp, int a, int b) {
    const double ve = sp.levels.v_exec;
    return one_pulse(sp, {a ? 1.0 : 0.0, b ? 1.0 : 0.0, 1.0}, {ve, ve, 0.0}, false)
        .device_energy;
}

double not_energy(const SimParams& sp, int a) {
    return one_pulse(sp, {a ? 1.0 : 0.0, 1.0}, {sp.levels.v_exec, 0.0}, false)
        .device_energy;
}

// Log-space bisection for a monotone scalar map; `increasing` tells the
// direction of energy(value).
double bisect_log(const std::function<double(double)>& f, double target, double lo,
                  double hi, bool increasing, const char* what) {
    double flo = f(lo), fhi = f(hi);
    if (!increasing) {
        std::swap(lo, hi);
        std::swap(flo, fhi);
    }
    if (!(flo <= target && target <= fhi))
        throw CalibrationError(std::string(what) + ": target " + std::to_string(target) +
                               " outside the reachable range [" + std::to_string(flo) +
                               ", " + std::to_string(fhi) + "]");
    for (int i = 0; i < 80; ++i) {
        const double mid = std::sqrt(lo * hi);
        const double fm = f(mid);
        if (fm < target)
            lo = mid;
        else
            hi = mid;
        if (std::abs(fm / target - 1.0) < 1e-6) break;
    }
    return std::sqrt(lo * hi);
}

} // namespace

ScenarioEnergies measure_scenarios(const SimParams& params) {
    params.check();
    ScenarioEnergies e;
    e.nor00 = nor_energy(params, 0, 0);
    e.nor01 = nor_energy(params, 0, 1);
    e.nor10 = nor_energy(params, 1, 0);
    e.nor11 = nor_energy(params, 1, 1);
    e.not0 = not_energy(params, 0);
    e.not1 = not_energy(params, 1);
    const OnePulse set =
        one_pulse(params, {0.0}, {params.levels.v_input_write}, true, true);
    e.set_write = set.device_energy;
    e.set_strike = set.strike_energy;
    e.reset_write =
        one_pulse(params, {1.0}, {params.levels.v_reset_write}, true).device_energy;
    return e;
}

std::vector<Table1Fit::Row> Table1Fit::rows() const {
    auto rel = [](double got, double want) { return got / want - 1.0; };
    return {
        {"NOR 00", targets.nor00, achieved.nor00, rel(achieved.nor00, targets.nor00)},
        {"NOR 01", targets.nor01, achieved.nor01, rel(achieved.nor01, targets.nor01)},
        {"NOR 10", targets.nor10, achieved.nor10, rel(achieved.nor10, targets.nor10)},
        {"NOR 11", targets.nor11, achieved.nor11, rel(achieved.nor11, targets.nor11)},
        {"NOT 0", targets.not0, achieved.not0, rel(achieved.not0, targets.not0)},
        {"NOT 1", targets.not1, achieved.not1, rel(achieved.not1, targets.not1)},
        {"SET write", targets.set_write, achieved.set_write,
         rel(achieved.set_write, targets.set_write)},
        {"RESET write", targets.reset_write, achieved.reset_write,
         rel(achieved.reset_write, targets.reset_write)},
    };
}

Table1Fit fit_table1(SimParams base) {
    base.check();
    Table1Fit fit;
    fit.targets = PulseEnergyTargets{};
    SimParams sp = base;

    // Stage 1: r_off from the pure-conduction NOT(0) energy (no state motion,
    // so the k constants cannot influence it).
    sp.device.r_off = bisect_log(
        [&](double r) {
            SimParams t = sp;
            t.device.r_off = r;
            return not_energy(t, 0);
        },
        fit.targets.not0, sp.device.r_on * 4.0, 1.0e9, /*increasing=*/false,
        "r_off fit (NOT 0)");

    // Stage 2: k_reset minimizing the worst relative error over the four
    // reset-transition scenarios. Coarse log grid, then golden-section refine.
    auto reset_worst = [&](double k) {
        SimParams t = sp;
        t.device.k_reset = k;
        const double e_not1 = not_energy(t, 1);
        const double e_nor01 = nor_energy(t, 0, 1);
        const double e_nor11 = nor_energy(t, 1, 1);
        const double e_wrst =
            one_pulse(t, {1.0}, {t.levels.v_reset_write}, true).device_energy;
        return std::max({std::abs(e_not1 / fit.targets.not1 - 1.0),
                         std::abs(e_nor01 / fit.targets.nor01 - 1.0),
                         std::abs(e_nor11 / fit.targets.nor11 - 1.0),
                         std::abs(e_wrst / fit.targets.reset_write - 1.0)});
    };
    {
        double best_k = sp.device.k_reset, best = reset_worst(best_k);
        const double lg_lo = 6.0, lg_hi = 13.0;
        const int grid = 57;
        for (int i = 0; i <= grid; ++i) {
            const double k = std::pow(10.0, lg_lo + (lg_hi - lg_lo) * i / grid);
            const double w = reset_worst(k);
            if (w < best) {
                best = w;
                best_k = k;
            }
        }
        double lo = best_k / std::pow(10.0, (lg_hi - lg_lo) / grid);
        double hi = best_k * std::pow(10.0, (lg_hi - lg_lo) / grid);
        for (int i = 0; i < 48; ++i) {
            const double m1 = lo * std::pow(hi / lo, 1.0 / 3.0);
            const double m2 = lo * std::pow(hi / lo, 2.0 / 3.0);
            if (reset_worst(m1) < reset_worst(m2))
                hi = m2;
            else
                lo = m1;
        }
        sp.device.k_reset = std::sqrt(lo * hi);
    }

    // Stage 3: k_set from the SET-write energy. The pulse energy saturates as
    // switching becomes instantaneous, so cap the target just below the
    // reachable supremum.
    {
        auto wset = [&](double k) {
            SimParams t = sp;
            t.device.k_set = k;
            return one_pulse(t, {0.0}, {t.levels.v_input_write}, true).device_energy;
        };
        const double cap = 0.995 * wset(1.0e12);
        const double target = std::min(fit.targets.set_write, cap);
        sp.device.k_set =
            bisect_log(wset, target, 1.0e9, 1.0e12, /*increasing=*/true,
                       "k_set fit (SET write)");
    }

    fit.params = sp;
    fit.achieved = measure_scenarios(sp);
    for (const auto& row : fit.rows())
        fit.worst_rel_error = std::max(fit.worst_rel_error, std::abs(row.rel_error));
    return fit;
}

} // namespace magic
