#include "magic/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "magic/errors.hpp"

namespace magic {

void VoltageLevels::check() const {
    if (!(v_read < std::abs(v_reset_write) && std::abs(v_reset_write) <= v_exec &&
          v_exec < v_init))
        throw ValidationError(
            "voltage levels: requires v_read < |v_reset_write| <= v_exec < v_init");
}

void Timing::check() const {
    if (!(edge_time > 0.0))
        throw ValidationError("timing: edge_time must be positive");
    if (!(pulse_width > 2.0 * edge_time))
        throw ValidationError("timing: pulse_width must exceed 2*edge_time");
    if (!(settle_gap >= 0.0))
        throw ValidationError("timing: settle_gap must be non-negative");
}

double pwl_value(const PwlWaveform& w, double t) {
    const auto& bp = w.breakpoints;
    if (bp.empty()) return 0.0;
    if (t <= bp.front().first) return bp.front().second;
    if (t >= bp.back().first) return bp.back().second;
    // First breakpoint strictly after t.
    auto hi = std::upper_bound(bp.begin(), bp.end(), t,
                               [](double tt, const auto& b) { return tt < b.first; });
    auto lo = hi - 1;
    const double f = (t - lo->first) / (hi->first - lo->first);
    return lo->second + f * (hi->second - lo->second);
}

const char* category_name(Category c) {
    switch (c) {
        case Category::InputLoad: return "input_load";
        case Category::Init: return "init";
        case Category::Exec: return "exec";
        case Category::Read: return "read";
    }
    return "?";
}

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

CycleDrive blank_cycle(int n, const Timing& t) {
    CycleDrive c;
    c.column_waveforms.assign(n, trapezoid(0.0, t));
    c.gates_on.assign(n, 0);
    c.duration = t.pulse_width;
    return c;
}

} // namespace

std::vector<CycleDrive> build_schedule(const ExecutionProgram& p,
                                       const std::map<std::string, int>& input_bits,
                                       const VoltageLevels& levels, const Timing& timing) {
    levels.check();
    timing.check();
    {
        const auto violations = validate(p);
        if (!violations.empty())
            throw ValidationError("build_schedule: program is invalid: " +
                                  violations.front().message);
    }
    for (const auto& in : p.inputs)
        if (!input_bits.count(in.name))
            throw ValidationError("build_schedule: missing input bit for \"" + in.name + "\"");

    const int n = p.row_size;
    std::vector<CycleDrive> out;

    // Leading input-load cycle: parallel SET of every '1' input bit.
    std::vector<int> ones;
    for (const auto& in : p.inputs)
        if (input_bits.at(in.name)) ones.push_back(in.cell);
    if (!ones.empty()) {
        CycleDrive c = blank_cycle(n, timing);
        c.label = "IN";
        c.category = Category::InputLoad;
        c.row_grounded = true;
        for (int cell : ones) {
            c.column_waveforms[cell] = trapezoid(levels.v_input_write, timing);
            c.gates_on[cell] = 1;
        }
        out.push_back(std::move(c));
    }

    for (const auto& cyc : p.cycles) {
        CycleDrive c = blank_cycle(n, timing);
        c.label = cyc.label;
        if (cyc.op.kind == OpKind::Init) {
            c.category = Category::Init;
            c.row_grounded = true;
            for (const auto& ref : cyc.op.args) {
                c.column_waveforms[ref.cell] = trapezoid(levels.v_init, timing);
                c.gates_on[ref.cell] = 1;
            }
        } else {
            c.category = Category::Exec;
            c.row_grounded = false; // the row switch floats during MAGIC execution
            for (const auto& ref : cyc.op.args) {
                c.column_waveforms[ref.cell] = trapezoid(levels.v_exec, timing);
                c.gates_on[ref.cell] = 1;
            }
            // Output column is driven at 0 V but selected.
            c.gates_on[cyc.op.out.cell] = 1;
        }
        out.push_back(std::move(c));
    }

    CycleDrive rd = blank_cycle(n, timing);
    rd.label = "READ";
    rd.category = Category::Read;
    rd.row_grounded = true;
    for (int k = 0; k < n; ++k) {
        rd.column_waveforms[k] = trapezoid(levels.v_read, timing);
        rd.gates_on[k] = 1;
    }
    out.push_back(std::move(rd));
    return out;
}

double schedule_duration(const std::vector<CycleDrive>& cycles, const Timing& timing) {
    double total = 0.0;
    for (const auto& c : cycles) total += c.duration + timing.settle_gap;
    return total;
}

std::string schedule_csv(const std::vector<CycleDrive>& cycles, const Timing& timing) {
    std::ostringstream out;
    out << "cycle_label,category,cell,breakpoint_t_s,v_volts\n";
    double t0 = 0.0;
    char buf[64];
    for (const auto& c : cycles) {
        for (size_t cell = 0; cell < c.column_waveforms.size(); ++cell) {
            for (const auto& [t, v] : c.column_waveforms[cell].breakpoints) {
                std::snprintf(buf, sizeof(buf), "%.9e,%.9g", t0 + t, v);
                out << c.label << ',' << category_name(c.category) << ',' << cell << ','
                    << buf << '\n';
            }
        }
        t0 += c.duration + timing.settle_gap;
    }
    return out.str();
}

} // namespace magic
