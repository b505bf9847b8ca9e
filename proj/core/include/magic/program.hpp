#pragma once

#include <string>
#include <vector>

namespace magic {

// A reference to a row cell, optionally carrying the signal name that the
// mapping file used for it. Names are cosmetic: program semantics and
// equality depend only on cell indices.
struct CellRef {
    std::string name; // may be empty for programmatically built ops
    int cell = -1;

    friend bool operator==(const CellRef& a, const CellRef& b) { return a.cell == b.cell; }
};

enum class OpKind { Init, Not, Nor };

// One scheduled micro-operation. Init SETs every listed cell to LRS; Not/Nor
// execute one MAGIC gate with `args` as the input cells and `out` as the
// output cell (which must have been initialized to LRS beforehand).
struct MicroOp {
    OpKind kind = OpKind::Init;
    std::vector<CellRef> args; // Init: cells to initialize; Not: 1 input; Nor: >= 2 inputs
    CellRef out;               // unused for Init

    friend bool operator==(const MicroOp& a, const MicroOp& b) {
        return a.kind == b.kind && a.args == b.args &&
               (a.kind == OpKind::Init || a.out == b.out);
    }
};

// A named signal pinned to a row cell (program inputs/outputs).
struct NamedCell {
    std::string name;
    int cell = -1;

    friend bool operator==(const NamedCell& a, const NamedCell& b) {
        return a.name == b.name && a.cell == b.cell;
    }
};

// The single-row execution schedule: an ordered list of labeled micro-ops over
// `row_size` cells, with named input/output cell bindings.
struct ExecutionProgram {
    struct Cycle {
        std::string label;
        MicroOp op;

        friend bool operator==(const Cycle& a, const Cycle& b) {
            return a.label == b.label && a.op == b.op;
        }
    };

    int row_size = 0;
    std::vector<NamedCell> inputs;  // declaration order preserved
    std::vector<NamedCell> outputs; // declaration order preserved
    int reuse_cycles = 0;           // count of non-leading Init cycles
    int declared_gate_count = -1;   // "Number of Gates" as parsed; emission recomputes
    std::vector<Cycle> cycles;

    int input_cell(const std::string& name) const;  // -1 when absent
    int output_cell(const std::string& name) const; // -1 when absent
    int gate_count() const;                         // number of Not/Nor cycles

    // Semantic equality: everything except declared_gate_count and ref names.
    friend bool operator==(const ExecutionProgram& a, const ExecutionProgram& b) {
        return a.row_size == b.row_size && a.inputs == b.inputs &&
               a.outputs == b.outputs && a.reuse_cycles == b.reuse_cycles &&
               a.cycles == b.cycles;
    }
};

// Parses the single-row mapping format:
// a JSON object (with or without the enclosing braces) carrying the keys
// "Row size", "Number of Gates", "Inputs", "Outputs", "Reuse cycles" and
// "Execution sequence", where the execution sequence maps labels to op
// strings `Init{...}`, `<ref>=inv1{<ref>}` or `<ref>=nor<K>{...}` and a ref is
// `name(index)` with optional single quotes. Throws ParseError/ValidationError.
// When `warnings` is non-null, non-fatal notes (e.g. a "Reuse cycles" value
// that disagrees with the op list) are appended to it.
ExecutionProgram parse_simpler(const std::string& text,
                               std::vector<std::string>* warnings = nullptr);

// Emits the same format (brace-wrapped valid JSON), recomputing
// "Number of Gates" and "Reuse cycles" from the op list. A disagreeing stored
// reuse_cycles value is reported through `warnings`.
std::string emit_simpler(const ExecutionProgram& p,
                         std::vector<std::string>* warnings = nullptr);

// One static-check failure; cycle_index is -1 for program-level violations.
struct Violation {
    int cycle_index = -1;
    std::string message;
};

// Checks cell bounds, op well-formedness (arities, distinct outputs, duplicate
// Init cells), init-before-use for every gate output, and that input cells are
// never used as gate outputs. Returns an empty list when the program is valid.
std::vector<Violation> validate(const ExecutionProgram& p);

} // namespace magic
