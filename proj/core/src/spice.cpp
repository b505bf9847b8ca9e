#include "magic/spice.hpp"

#include <cstdio>

#include "magic/errors.hpp"

namespace magic {

namespace {

std::string sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.5e", v);
    return buf;
}

// Appends a cycle-local waveform at absolute offset t0, skipping all-zero
// cycles (the line already rests at `baseline` between pulses).
void append_pulse(PwlWaveform& w, const PwlWaveform& local, double t0, double baseline) {
    bool active = false;
    for (const auto& [t, v] : local.breakpoints)
        if (v != baseline) active = true;
    if (!active) return;
    for (const auto& [t, v] : local.breakpoints) {
        const double at = t0 + t;
        if (!w.breakpoints.empty() && at <= w.breakpoints.back().first &&
            v == w.breakpoints.back().second)
            continue;
        w.breakpoints.push_back({at, v});
    }
}

PwlWaveform close_out(PwlWaveform w, double total, double baseline) {
    if (w.breakpoints.empty() || w.breakpoints.front().first > 0.0)
        w.breakpoints.insert(w.breakpoints.begin(), {0.0, baseline});
    if (w.breakpoints.back().first < total) w.breakpoints.push_back({total, baseline});
    return w;
}

// Gate/row control pulse: baseline -> on over one edge time, held for the
// cycle, back to baseline.
PwlWaveform control_pulse(double duration, const Timing& timing, double on) {
    PwlWaveform w;
    w.breakpoints = {{0.0, 0.0},
                     {timing.edge_time, on},
                     {duration - timing.edge_time, on},
                     {duration, 0.0}};
    return w;
}

} // namespace

PwlWaveform global_column_waveform(const std::vector<CycleDrive>& schedule,
                                   const Timing& timing, int cell) {
    PwlWaveform w;
    double t0 = 0.0;
    for (const auto& cycle : schedule) {
        append_pulse(w, cycle.column_waveforms.at(cell), t0, 0.0);
        t0 += cycle.duration + timing.settle_gap;
    }
    return close_out(std::move(w), schedule_duration(schedule, timing), 0.0);
}

PwlWaveform global_gate_waveform(const std::vector<CycleDrive>& schedule,
                                 const Timing& timing, const VoltageLevels& levels,
                                 int cell) {
    PwlWaveform w;
    double t0 = 0.0;
    for (const auto& cycle : schedule) {
        if (cycle.gates_on.at(cell)) {
            PwlWaveform pulse = control_pulse(cycle.duration, timing, levels.v_gate_on);
            for (auto& [t, v] : pulse.breakpoints)
                if (v == 0.0) v = levels.v_gate_off;
            append_pulse(w, pulse, t0, levels.v_gate_off);
        }
        t0 += cycle.duration + timing.settle_gap;
    }
    return close_out(std::move(w), schedule_duration(schedule, timing),
                     levels.v_gate_off);
}

PwlWaveform global_row_control_waveform(const std::vector<CycleDrive>& schedule,
                                        const Timing& timing,
                                        const VoltageLevels& levels) {
    PwlWaveform w;
    double t0 = 0.0;
    for (const auto& cycle : schedule) {
        if (cycle.row_grounded)
            append_pulse(w, control_pulse(cycle.duration, timing, levels.v_gate_on), t0,
                         0.0);
        t0 += cycle.duration + timing.settle_gap;
    }
    return close_out(std::move(w), schedule_duration(schedule, timing), 0.0);
}

std::string emit_pwl_file(const PwlWaveform& w) {
    std::string out;
    for (const auto& [t, v] : w.breakpoints) out += sci(t) + " " + sci(v) + "\n";
    return out;
}

SpiceDeck emit_deck(const ExecutionProgram& p, const std::vector<CycleDrive>& schedule,
                    const SimParams& params, const std::string& stem) {
    if (!schedule.empty() &&
        static_cast<int>(schedule.front().column_waveforms.size()) != p.row_size)
        throw ValidationError("schedule does not match the program row size");
    const VteamParams& d = params.device;
    const CircuitConfig& c = params.circuit;
    const Timing& timing = params.timing;
    const double total = schedule_duration(schedule, timing);

    SpiceDeck deck;
    std::string s;
    s += "* single-row memristor crossbar, " + std::to_string(p.row_size) +
         " cells, " + std::to_string(schedule.size()) + " cycles\n";
    s += "* stem: " + stem + "\n";
    s += "\n";
    s += ".param ron=" + sci(d.r_on) + " roff=" + sci(d.r_off) + "\n";
    s += ".param vtset=" + sci(d.v_t_set) + " vtrst=" + sci(d.v_t_reset) + "\n";
    s += ".param kset=" + sci(d.k_set) + " krst=" + sci(d.k_reset) + "\n";
    s += ".param aset=" + sci(d.alpha_set) + " arst=" + sci(d.alpha_reset) + "\n";
    s += "\n";
    s += "* behavioral memristor: node xs holds the state in [0,1],\n";
    s += "* the resistance is roff - xs*(roff - ron)\n";
    s += ".subckt vteam_cell plus minus xinit=0\n";
    s += "Cx xs 0 1\n";
    s += ".ic V(xs)={xinit}\n";
    s += "Gx 0 xs value={kset*pwr(max(V(plus,minus)/vtset-1,0),aset)*(1-V(xs))"
         "-krst*pwr(max(V(plus,minus)/vtrst-1,0),arst)*V(xs)}\n";
    s += "Gm plus minus value={V(plus,minus)/(roff-V(xs)*(roff-ron))}\n";
    s += ".ends vteam_cell\n";
    s += "\n";
    s += ".model swsel SW(Ron=" + sci(c.r_selector_on) + " Roff=" + sci(c.r_selector_off) +
         " Vt=1.0 Vh=0.1)\n";
    s += ".model swrow SW(Ron=" + sci(c.r_row_switch) + " Roff=1.00000e+12 Vt=1.0 Vh=0.1)\n";
    s += "\n";
    for (int k = 0; k < p.row_size; ++k) {
        const std::string ks = std::to_string(k);
        deck.sidecars.push_back({stem + "_col" + ks + ".pwl",
                                 emit_pwl_file(global_column_waveform(schedule, timing, k))});
        deck.sidecars.push_back(
            {stem + "_gate" + ks + ".pwl",
             emit_pwl_file(global_gate_waveform(schedule, timing, params.levels, k))});
        s += "Vcol" + ks + " col" + ks + " 0 PWL FILE \"" + stem + "_col" + ks +
             ".pwl\"\n";
        s += "Vgate" + ks + " gate" + ks + " 0 PWL FILE \"" + stem + "_gate" + ks +
             ".pwl\"\n";
        s += "Sgate" + ks + " col" + ks + " mid" + ks + " gate" + ks + " 0 swsel\n";
        s += "Xmem" + ks + " mid" + ks + " row vteam_cell xinit=0\n";
    }
    deck.sidecars.push_back(
        {stem + "_row.pwl",
         emit_pwl_file(global_row_control_waveform(schedule, timing, params.levels))});
    s += "Vrowctl rowctl 0 PWL FILE \"" + stem + "_row.pwl\"\n";
    s += "Srow row 0 rowctl 0 swrow\n";
    s += "\n";
    for (int k = 0; k < p.row_size; ++k)
        s += ".meas tran e_dev" + std::to_string(k) + " INTEG par('V(mid" +
             std::to_string(k) + ",row)*I(Vcol" + std::to_string(k) + ")')\n";
    s += "\n";
    s += ".tran " + sci(c.dt) + " " + sci(total) + "\n";
    s += ".end\n";
    deck.deck = std::move(s);
    return deck;
}

} // namespace magic
