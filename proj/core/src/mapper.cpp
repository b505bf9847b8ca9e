#include "magic/mapper.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "magic/errors.hpp"

namespace magic {

namespace {

// Last gate index that reads each signal; primary outputs (and inputs) are
// pinned with a sentinel so they are never freed.
std::map<std::string, int> last_use(const GateNetlist& n) {
    constexpr int kPinned = 1 << 30;
    std::map<std::string, int> last;
    for (const auto& name : n.primary_inputs) last[name] = kPinned;
    for (size_t i = 0; i < n.gates.size(); ++i) {
        last[n.gates[i].output] = static_cast<int>(i); // dead unless consumed later
        for (const auto& a : n.gates[i].inputs) last[a] = static_cast<int>(i);
    }
    for (const auto& name : n.primary_outputs) last[name] = kPinned;
    for (const auto& name : n.primary_inputs) last[name] = kPinned;
    return last;
}

struct Allocation {
    using Freed = std::pair<int, std::string>; // cell and the signal it held
    std::vector<int> gate_cell;                // output cell per gate
    std::vector<std::vector<Freed>> freed_after; // released after each gate
    int width = 0;                             // cells actually touched
};

// Free cells are kept sorted: each gate output takes the lowest free index.
Allocation allocate(const GateNetlist& n, int row_size) {
    const int n_pi = static_cast<int>(n.primary_inputs.size());
    Allocation a;
    std::set<int> free_cells;
    for (int c = n_pi; c < row_size; ++c) free_cells.insert(c);

    std::map<std::string, int> cell_of;
    for (int i = 0; i < n_pi; ++i) cell_of[n.primary_inputs[i]] = i;
    const auto last = last_use(n);

    for (size_t i = 0; i < n.gates.size(); ++i) {
        if (free_cells.empty())
            throw ValidationError("row overflow: netlist needs more than " +
                                  std::to_string(row_size) + " cells");
        const int cell = *free_cells.begin();
        free_cells.erase(free_cells.begin());
        a.gate_cell.push_back(cell);
        cell_of[n.gates[i].output] = cell;
        a.width = std::max(a.width, cell + 1);

        // Release every signal whose final reader this gate was, in
        // definition order (earlier-defined signals freed first).
        std::vector<Allocation::Freed> freed;
        for (size_t g = 0; g <= i; ++g) {
            const std::string& name = n.gates[g].output;
            auto it = cell_of.find(name);
            if (it == cell_of.end() || last.at(name) != static_cast<int>(i)) continue;
            freed.push_back({it->second, name});
            cell_of.erase(it);
        }
        for (const auto& [c, name] : freed) free_cells.insert(c);
        a.freed_after.push_back(std::move(freed));
    }
    return a;
}

} // namespace

int peak_live_cells(const GateNetlist& n) {
    const auto last = last_use(n);
    int live = static_cast<int>(n.primary_inputs.size());
    int peak = live;
    for (size_t i = 0; i < n.gates.size(); ++i) {
        ++live; // the new output
        peak = std::max(peak, live);
        for (const auto& g : n.gates)
            if (&g <= &n.gates[i] && last.at(g.output) == static_cast<int>(i)) --live;
    }
    return peak;
}

ExecutionProgram map_to_row(const GateNetlist& n, std::optional<int> row_size) {
    const int peak = peak_live_cells(n);
    const int width = row_size.value_or(peak);
    if (width < peak)
        throw ValidationError("row overflow: netlist needs " + std::to_string(peak) +
                              " cells but the row has " + std::to_string(width));
    const Allocation a = allocate(n, width);

    ExecutionProgram p;
    p.row_size = width;
    for (size_t i = 0; i < n.primary_inputs.size(); ++i)
        p.inputs.push_back({n.primary_inputs[i], static_cast<int>(i)});
    std::map<std::string, int> cell_of;
    for (const auto& in : p.inputs) cell_of[in.name] = in.cell;
    for (size_t i = 0; i < n.gates.size(); ++i)
        cell_of[n.gates[i].output] = a.gate_cell[i];
    for (const auto& name : n.primary_outputs)
        p.outputs.push_back({name, cell_of.at(name)});

    int next_label = 0;
    auto push = [&](MicroOp op) {
        p.cycles.push_back({"T" + std::to_string(next_label++), std::move(op)});
    };

    // One leading Init covering every cell the gates will write.
    std::set<int> touched(a.gate_cell.begin(), a.gate_cell.end());
    if (!touched.empty()) {
        MicroOp init;
        init.kind = OpKind::Init;
        for (int c : touched) init.args.push_back({"D", c});
        push(std::move(init));
    }

    std::vector<std::pair<int, std::string>> dirty; // freed cells awaiting re-init
    int reuse = 0;
    for (size_t i = 0; i < n.gates.size(); ++i) {
        const bool needs_init = std::any_of(
            dirty.begin(), dirty.end(),
            [&](const auto& d) { return d.first == a.gate_cell[i]; });
        if (needs_init) {
            MicroOp init;
            init.kind = OpKind::Init;
            for (const auto& [cell, name] : dirty) init.args.push_back({name, cell});
            push(std::move(init));
            dirty.clear();
            ++reuse;
        }
        const auto& g = n.gates[i];
        MicroOp op;
        op.kind = g.kind == GateNetlist::GateKind::Not ? OpKind::Not : OpKind::Nor;
        op.out = {g.output, a.gate_cell[i]};
        for (const auto& name : g.inputs) op.args.push_back({name, cell_of.at(name)});
        push(std::move(op));
        for (const auto& f : a.freed_after[i]) dirty.push_back(f);
    }

    p.reuse_cycles = reuse;
    p.declared_gate_count = static_cast<int>(n.gates.size());
    return p;
}

} // namespace magic
