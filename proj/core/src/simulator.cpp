#include "magic/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "magic/errors.hpp"

namespace magic {

void CircuitConfig::check(const Timing& timing) const {
    std::ostringstream bad;
    if (!(r_selector_on > 0.0)) bad << "r_selector_on must be positive; ";
    if (!(r_selector_off > 0.0)) bad << "r_selector_off must be positive; ";
    if (!(r_row_switch > 0.0)) bad << "r_row_switch must be positive; ";
    if (!(dt > 0.0)) bad << "dt must be positive; ";
    if (!(kcl_abs_tol > 0.0)) bad << "kcl_abs_tol must be positive; ";
    if (!(kcl_rel_tol >= 0.0)) bad << "kcl_rel_tol must not be negative; ";
    if (max_newton_iters < 1) bad << "max_newton_iters must be at least 1; ";
    if (dt > timing.pulse_width / 100.0)
        bad << "dt must not exceed pulse_width/100 (" << timing.pulse_width / 100.0
            << " s); ";
    const std::string msg = bad.str();
    if (!msg.empty())
        throw ValidationError("circuit config: " + msg.substr(0, msg.size() - 2));
}

double EnergyReport::device_total() const {
    double sum = 0.0;
    for (double e : category_totals) sum += e;
    return sum;
}

namespace {

// Current balance at the row node considering only the selected branches
// (and the ground switch). Also reports the largest branch magnitude, which
// scales the convergence tolerance.
struct Balance {
    double f = 0.0;      // net current into the node, amperes
    double dfdv = 0.0;   // derivative with respect to v_row (always <= 0)
    double max_i = 0.0;
};

Balance balance_at(const VteamParams& params, const CrossbarState& state,
                   const std::vector<double>& v_columns, const std::vector<char>& gates_on,
                   bool row_grounded, const CircuitConfig& config, double v) {
    Balance b;
    for (size_t k = 0; k < state.cells.size(); ++k) {
        if (!gates_on[k]) continue;
        const double g = 1.0 / (config.r_selector_on + resistance(params, state.cells[k]));
        const double i = g * (v_columns[k] - v);
        b.f += i;
        b.dfdv -= g;
        b.max_i = std::max(b.max_i, std::abs(i));
    }
    if (row_grounded) {
        const double g = 1.0 / config.r_row_switch;
        const double i = g * (0.0 - v);
        b.f += i;
        b.dfdv -= g;
        b.max_i = std::max(b.max_i, std::abs(i));
    }
    return b;
}

} // namespace

RowSolution solve_row_voltage(const VteamParams& params, const CrossbarState& state,
                              const std::vector<double>& v_columns,
                              const std::vector<char>& gates_on, bool row_grounded,
                              const CircuitConfig& config, double prev_v_row) {
    bool any = row_grounded;
    double lo = row_grounded ? 0.0 : 0.0, hi = lo;
    bool first = !row_grounded;
    for (size_t k = 0; k < state.cells.size(); ++k) {
        if (!gates_on[k]) continue;
        if (first) {
            lo = hi = v_columns[k];
            first = false;
        } else {
            lo = std::min(lo, v_columns[k]);
            hi = std::max(hi, v_columns[k]);
        }
        any = true;
    }
    RowSolution sol;
    if (!any) {
        // Floating row with every gate off: no path, keep the last potential.
        sol.v_row = prev_v_row;
        sol.tolerance = config.kcl_abs_tol;
        return sol;
    }
    if (hi - lo == 0.0) {
        const Balance b = balance_at(params, state, v_columns, gates_on, row_grounded,
                                     config, lo);
        sol.v_row = lo;
        sol.residual = b.f;
        sol.tolerance = config.kcl_abs_tol + config.kcl_rel_tol * b.max_i;
        return sol;
    }

    double v = std::clamp(prev_v_row, lo, hi);
    Balance b = balance_at(params, state, v_columns, gates_on, row_grounded, config, v);
    {
        // A warm start that already sits on the root (within 1% of tolerance)
        // needs no iteration; marginal starts still get polished below.
        const double tol = config.kcl_abs_tol + config.kcl_rel_tol * b.max_i;
        if (std::abs(b.f) <= 0.01 * tol) {
            sol.v_row = v;
            sol.residual = b.f;
            sol.tolerance = tol;
            return sol;
        }
    }
    for (int iter = 1; iter <= config.max_newton_iters; ++iter) {
        // f is decreasing in v: shrink the bracket, then take a safeguarded
        // Newton step (bisect when it leaves the bracket). Updating before
        // the convergence check means a marginal warm start gets polished.
        if (b.f > 0.0)
            lo = v;
        else
            hi = v;
        double next = v - b.f / b.dfdv;
        if (!(next >= lo && next <= hi)) next = 0.5 * (lo + hi);
        v = next;
        b = balance_at(params, state, v_columns, gates_on, row_grounded, config, v);
        const double tol = config.kcl_abs_tol + config.kcl_rel_tol * b.max_i;
        if (std::abs(b.f) <= tol) {
            sol.v_row = v;
            sol.residual = b.f;
            sol.tolerance = tol;
            sol.iterations = iter;
            return sol;
        }
    }
    std::ostringstream msg;
    msg << "row-node solve did not converge within " << config.max_newton_iters
        << " iterations: bracket [" << lo << ", " << hi << "] V, residual " << b.f
        << " A against tolerance "
        << config.kcl_abs_tol + config.kcl_rel_tol * b.max_i << " A";
    throw SolverError(msg.str());
}

namespace {

// Per-sample electrical snapshot of the whole row.
struct RowSample {
    double v_row = 0.0;
    std::vector<double> v_dev;    // across the memristor
    std::vector<double> i_dev;    // through the memristor (column -> row positive)
    std::vector<double> p_dev;    // dissipated in the memristor
    double p_selector = 0.0;      // all selector switches (on and leakage path)
    double p_row = 0.0;           // row ground switch
    double p_source = 0.0;        // delivered by the column sources
    double residual_ratio = 0.0;
    double residual = 0.0;
};

RowSample sample_row(const VteamParams& params, const CrossbarState& state,
                     const std::vector<double>& v_columns,
                     const std::vector<char>& gates_on, bool row_grounded,
                     const CircuitConfig& config, double prev_v_row) {
    const size_t n = state.cells.size();
    RowSample s;
    const RowSolution sol = solve_row_voltage(params, state, v_columns, gates_on,
                                              row_grounded, config, prev_v_row);
    s.v_row = sol.v_row;
    s.residual = std::abs(sol.residual);
    s.residual_ratio = sol.tolerance > 0.0 ? s.residual / sol.tolerance : 0.0;
    s.v_dev.resize(n);
    s.i_dev.resize(n);
    s.p_dev.resize(n);
    for (size_t k = 0; k < n; ++k) {
        const double r_mem = resistance(params, state.cells[k]);
        const double r_sel = gates_on[k] ? config.r_selector_on : config.r_selector_off;
        const double i = (v_columns[k] - s.v_row) / (r_sel + r_mem);
        s.i_dev[k] = i;
        s.v_dev[k] = i * r_mem;
        s.p_dev[k] = i * i * r_mem;
        s.p_selector += i * i * r_sel;
        s.p_source += v_columns[k] * i;
    }
    if (row_grounded) s.p_row += s.v_row * s.v_row / config.r_row_switch;
    return s;
}

std::vector<double> segment_times(const CycleDrive& cycle) {
    std::vector<double> ts{0.0, cycle.duration};
    for (const auto& w : cycle.column_waveforms)
        for (const auto& [t, v] : w.breakpoints)
            if (t > 0.0 && t < cycle.duration) ts.push_back(t);
    std::sort(ts.begin(), ts.end());
    std::vector<double> out;
    for (double t : ts)
        if (out.empty() || t - out.back() > 1e-18) out.push_back(t);
    return out;
}

} // namespace

CycleResult run_cycle(const VteamParams& params, CrossbarState& state,
                      const CycleDrive& cycle, const CircuitConfig& config,
                      double t_start, double& v_row_prev, SimTrace* trace) {
    const size_t n = state.cells.size();
    if (cycle.column_waveforms.size() != n || cycle.gates_on.size() != n)
        throw ValidationError("cycle \"" + cycle.label +
                              "\" does not match the crossbar width");
    CycleResult result;
    result.per_cell_energy.assign(n, 0.0);

    std::vector<double> v_cols(n);
    auto columns_at = [&](double t) {
        for (size_t k = 0; k < n; ++k) v_cols[k] = pwl_value(cycle.column_waveforms[k], t);
    };

    auto record = [&](double t_local, const RowSample& s) {
        if (!trace) return;
        if (trace->v_device.empty()) {
            trace->v_device.resize(n);
            trace->i_device.resize(n);
            trace->x.resize(n);
        }
        trace->t.push_back(t_start + t_local);
        trace->v_row.push_back(s.v_row);
        for (size_t k = 0; k < n; ++k) {
            trace->v_device[k].push_back(s.v_dev[k]);
            trace->i_device[k].push_back(s.i_dev[k]);
            trace->x[k].push_back(state.cells[k].x);
        }
    };

    columns_at(0.0);
    RowSample s0 = sample_row(params, state, v_cols, cycle.gates_on, cycle.row_grounded,
                              config, v_row_prev);
    record(0.0, s0);

    auto note_residual = [&](const RowSample& s) {
        result.max_residual_ratio = std::max(result.max_residual_ratio, s.residual_ratio);
        result.max_residual = std::max(result.max_residual, s.residual);
    };
    note_residual(s0);

    const std::vector<double> ts = segment_times(cycle);
    for (size_t seg = 0; seg + 1 < ts.size(); ++seg) {
        const double len = ts[seg + 1] - ts[seg];
        const int steps = std::max(1, static_cast<int>(std::ceil(len / config.dt - 1e-9)));
        const double h = len / steps;
        for (int j = 0; j < steps; ++j) {
            const double t1 = (j + 1 == steps) ? ts[seg + 1] : ts[seg] + (j + 1) * h;
            // Hold each device's terminal voltage over the step, then advance.
            for (size_t k = 0; k < n; ++k)
                state.cells[k] = step_state(params, state.cells[k], s0.v_dev[k], h);
            columns_at(t1);
            const RowSample s1 = sample_row(params, state, v_cols, cycle.gates_on,
                                            cycle.row_grounded, config, s0.v_row);
            note_residual(s1);
            const double half = 0.5 * h;
            for (size_t k = 0; k < n; ++k)
                result.per_cell_energy[k] += half * (s0.p_dev[k] + s1.p_dev[k]);
            result.selector_energy += half * (s0.p_selector + s1.p_selector);
            result.row_switch_energy += half * (s0.p_row + s1.p_row);
            result.source_energy += half * (s0.p_source + s1.p_source);
            record(t1, s1);
            s0 = s1;
        }
    }
    v_row_prev = cycle.row_grounded ? 0.0 : s0.v_row;
    return result;
}

std::vector<int> readout(const VteamParams& params, const CrossbarState& state) {
    const double r_mid = std::sqrt(params.r_on * params.r_off);
    std::vector<int> bits(state.cells.size());
    for (size_t k = 0; k < state.cells.size(); ++k)
        bits[k] = resistance(params, state.cells[k]) < r_mid ? 1 : 0;
    return bits;
}

RunResult run_program(const ExecutionProgram& p,
                      const std::map<std::string, int>& input_bits,
                      const VoltageLevels& levels, const Timing& timing,
                      const VteamParams& params, const CircuitConfig& config,
                      const SimOptions& options, const CrossbarState* warm_start) {
    params.check();
    config.check(timing);
    std::vector<CycleDrive> schedule = build_schedule(p, input_bits, levels, timing);

    if (options.read_outputs_only && !schedule.empty() &&
        schedule.back().category == Category::Read) {
        CycleDrive& read = schedule.back();
        std::vector<char> keep(p.row_size, 0);
        for (const auto& out : p.outputs) keep[out.cell] = 1;
        for (int k = 0; k < p.row_size; ++k) {
            if (keep[k]) continue;
            read.gates_on[k] = 0;
            read.column_waveforms[k].breakpoints = {{0.0, 0.0}, {read.duration, 0.0}};
        }
    }

    RunResult run;
    if (warm_start) {
        if (static_cast<int>(warm_start->cells.size()) != p.row_size)
            throw ValidationError("warm-start state has " +
                                  std::to_string(warm_start->cells.size()) +
                                  " cells but the row has " +
                                  std::to_string(p.row_size));
        run.final_state = *warm_start;
    } else {
        run.final_state.cells.assign(p.row_size, DeviceState{0.0});
    }

    EnergyReport& rep = run.report;
    const size_t n_cycles = schedule.size();
    rep.per_cell_cycle.assign(n_cycles, std::vector<double>(p.row_size, 0.0));
    rep.per_cycle.assign(n_cycles, 0.0);
    rep.per_cell_category.assign(p.row_size, {});

    double t = 0.0;
    double v_row_prev = 0.0;
    SimTrace* trace = options.record_trace ? &run.trace : nullptr;
    for (size_t c = 0; c < n_cycles; ++c) {
        const CycleDrive& cycle = schedule[c];
        rep.cycle_labels.push_back(cycle.label);
        rep.cycle_categories.push_back(cycle.category);
        rep.cycle_window.push_back({t, t + cycle.duration});
        const CycleResult res =
            run_cycle(params, run.final_state, cycle, config, t, v_row_prev, trace);
        const int cat = static_cast<int>(cycle.category);
        for (int k = 0; k < p.row_size; ++k) {
            rep.per_cell_cycle[c][k] = res.per_cell_energy[k];
            rep.per_cycle[c] += res.per_cell_energy[k];
            rep.per_cell_category[k][cat] += res.per_cell_energy[k];
        }
        rep.category_totals[cat] += rep.per_cycle[c];
        rep.peripheral_selector += res.selector_energy;
        rep.peripheral_row += res.row_switch_energy;
        rep.source_delivered += res.source_energy;
        rep.max_kcl_residual_ratio =
            std::max(rep.max_kcl_residual_ratio, res.max_residual_ratio);
        rep.max_kcl_residual = std::max(rep.max_kcl_residual, res.max_residual);
        t += cycle.duration + timing.settle_gap;
        // The settle gap drives every column to 0 V with the row grounded and
        // gates off; no current can flow, so it is skipped analytically.
        v_row_prev = 0.0;
    }

    const std::vector<int> bits = readout(params, run.final_state);
    for (const auto& out : p.outputs) run.readouts[out.name] = bits[out.cell];
    return run;
}

double integrate_energy(const std::vector<double>& power, double h) {
    if (power.size() < 2) return 0.0;
    double sum = 0.0;
    for (double pw : power) sum += pw;
    sum -= 0.5 * (power.front() + power.back());
    return sum * h;
}

std::string trace_csv(const SimTrace& trace, int decimation) {
    if (decimation < 1) decimation = 1;
    std::string out = "t_s,v_row,cell,v_device,i_device,x\n";
    char line[192];
    const size_t samples = trace.t.size();
    for (size_t i = 0; i < samples; ++i) {
        if (i % decimation != 0 && i + 1 != samples) continue;
        for (size_t k = 0; k < trace.v_device.size(); ++k) {
            std::snprintf(line, sizeof line, "%.9e,%.9g,%zu,%.9g,%.9g,%.9g\n", trace.t[i],
                          trace.v_row[i], k, trace.v_device[k][i], trace.i_device[k][i],
                          trace.x[k][i]);
            out += line;
        }
    }
    return out;
}

} // namespace magic
