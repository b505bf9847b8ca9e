#include "magic/program.hpp"

#include <cctype>
#include <sstream>

#include <json.hpp>

#include "magic/errors.hpp"

namespace magic {

namespace {

using json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// Parses `name(index)` with optional single quotes around the whole ref.
CellRef parse_ref(const std::string& raw, const std::string& where) {
    std::string s = trim(raw);
    if (s.size() >= 2 && s.front() == '\'' && s.back() == '\'')
        s = trim(s.substr(1, s.size() - 2));
    const size_t open = s.find('(');
    const size_t close = s.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open ||
        close != s.size() - 1)
        throw ParseError(where + ": malformed cell reference \"" + raw + "\"");
    CellRef ref;
    ref.name = trim(s.substr(0, open));
    const std::string idx = trim(s.substr(open + 1, close - open - 1));
    if (ref.name.empty() || idx.empty())
        throw ParseError(where + ": malformed cell reference \"" + raw + "\"");
    for (char c : idx)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw ParseError(where + ": cell index is not a number in \"" + raw + "\"");
    ref.cell = std::stoi(idx);
    return ref;
}

// Splits a `{a,b,c}`-style body on top-level commas.
std::vector<std::string> split_list(const std::string& body) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : body) {
        if (c == ',') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty() || !parts.empty()) parts.push_back(cur);
    return parts;
}

std::vector<CellRef> parse_ref_list(const std::string& body, const std::string& where) {
    std::vector<CellRef> refs;
    for (const auto& part : split_list(body)) refs.push_back(parse_ref(part, where));
    return refs;
}

// Extracts the text between the braces of `...{body}` and the prefix before them.
std::pair<std::string, std::string> split_braces(const std::string& s,
                                                 const std::string& where) {
    const size_t open = s.find('{');
    const size_t close = s.rfind('}');
    if (open == std::string::npos || close == std::string::npos || close < open ||
        trim(s.substr(close + 1)) != "")
        throw ParseError(where + ": expected `...{...}` in op string \"" + s + "\"");
    return {trim(s.substr(0, open)), s.substr(open + 1, close - open - 1)};
}

MicroOp parse_op_string(const std::string& text, const std::string& label) {
    const std::string where = "cycle " + label;
    const std::string s = trim(text);
    const size_t eq = s.find('=');
    const size_t brace = s.find('{');
    MicroOp op;
    if (eq == std::string::npos || (brace != std::string::npos && brace < eq)) {
        // Init{refs}
        auto [head, body] = split_braces(s, where);
        if (head != "Init")
            throw ParseError(where + ": unrecognized op \"" + s + "\"");
        op.kind = OpKind::Init;
        op.args = parse_ref_list(body, where);
        if (op.args.empty())
            throw ParseError(where + ": Init requires at least one cell");
        return op;
    }
    op.out = parse_ref(s.substr(0, eq), where);
    auto [fn, body] = split_braces(s.substr(eq + 1), where);
    op.args = parse_ref_list(body, where);
    if (fn == "inv1") {
        op.kind = OpKind::Not;
        if (op.args.size() != 1)
            throw ParseError(where + ": inv1 requires exactly one operand, got " +
                             std::to_string(op.args.size()));
    } else if (fn.rfind("nor", 0) == 0 && fn.size() > 3) {
        op.kind = OpKind::Nor;
        const std::string k_str = fn.substr(3);
        for (char c : k_str)
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw ParseError(where + ": unrecognized gate \"" + fn + "\"");
        const int k = std::stoi(k_str);
        if (k < 2)
            throw ParseError(where + ": nor arity must be at least 2, got \"" + fn + "\"");
        if (static_cast<int>(op.args.size()) != k)
            throw ParseError(where + ": " + fn + " lists " +
                             std::to_string(op.args.size()) + " operands");
    } else {
        throw ParseError(where + ": unrecognized gate \"" + fn + "\"");
    }
    return op;
}

std::vector<NamedCell> parse_named_cells(const std::string& text, const std::string& where) {
    std::string s = trim(text);
    if (s.size() < 2 || s.front() != '{' || s.back() != '}')
        throw ParseError(where + ": expected `{name(cell),...}`, got \"" + text + "\"");
    s = s.substr(1, s.size() - 2);
    std::vector<NamedCell> out;
    if (trim(s).empty()) return out;
    for (const auto& part : split_list(s)) {
        const CellRef ref = parse_ref(part, where);
        out.push_back({ref.name, ref.cell});
    }
    return out;
}

const json& require_key(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end())
        throw ParseError(std::string("mapping file: missing key \"") + key + "\"");
    return *it;
}

int require_int(const json& j, const char* key) {
    const json& v = require_key(j, key);
    if (!v.is_number_integer())
        throw ParseError(std::string("mapping file: key \"") + key +
                         "\" must be an integer");
    return v.get<int>();
}

std::string require_string(const json& j, const char* key) {
    const json& v = require_key(j, key);
    if (!v.is_string())
        throw ParseError(std::string("mapping file: key \"") + key + "\" must be a string");
    return v.get<std::string>();
}

void check_bounds(const ExecutionProgram& p) {
    auto bound = [&](int cell, const std::string& what) {
        if (cell < 0 || cell >= p.row_size)
            throw ValidationError("mapping file: " + what + " references cell " +
                                  std::to_string(cell) + " outside row of size " +
                                  std::to_string(p.row_size));
    };
    for (const auto& in : p.inputs) bound(in.cell, "input \"" + in.name + "\"");
    for (const auto& out : p.outputs) bound(out.cell, "output \"" + out.name + "\"");
    for (const auto& cyc : p.cycles) {
        for (const auto& ref : cyc.op.args) bound(ref.cell, "cycle " + cyc.label);
        if (cyc.op.kind != OpKind::Init) bound(cyc.op.out.cell, "cycle " + cyc.label);
    }
}

int count_reuse_cycles(const ExecutionProgram& p) {
    // Reuse cycles are Init ops issued after execution has started; the
    // leading Init prefix only prepares fresh cells.
    int reuse = 0;
    bool leading = true;
    for (const auto& cyc : p.cycles) {
        if (cyc.op.kind == OpKind::Init) {
            if (!leading) ++reuse;
        } else {
            leading = false;
        }
    }
    return reuse;
}

std::string ref_text(const CellRef& ref, bool quoted, const char* fallback) {
    std::string name = ref.name.empty() ? fallback : ref.name;
    std::string body = name + "(" + std::to_string(ref.cell) + ")";
    return quoted ? "'" + body + "'" : body;
}

} // namespace

int ExecutionProgram::input_cell(const std::string& name) const {
    for (const auto& in : inputs)
        if (in.name == name) return in.cell;
    return -1;
}

int ExecutionProgram::output_cell(const std::string& name) const {
    for (const auto& out : outputs)
        if (out.name == name) return out.cell;
    return -1;
}

int ExecutionProgram::gate_count() const {
    int n = 0;
    for (const auto& cyc : cycles)
        if (cyc.op.kind != OpKind::Init) ++n;
    return n;
}

ExecutionProgram parse_simpler(const std::string& text,
                               std::vector<std::string>* warnings) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception&) {
        // Tolerate a bare key-value fragment without the enclosing braces.
        try {
            j = json::parse("{" + text + "}");
        } catch (const json::exception& e2) {
            throw ParseError(std::string("mapping file: not valid JSON: ") + e2.what());
        }
    }
    if (!j.is_object()) throw ParseError("mapping file: top level must be an object");

    ExecutionProgram p;
    p.row_size = require_int(j, "Row size");
    p.declared_gate_count = require_int(j, "Number of Gates");
    p.inputs = parse_named_cells(require_string(j, "Inputs"), "Inputs");
    p.outputs = parse_named_cells(require_string(j, "Outputs"), "Outputs");
    p.reuse_cycles = require_int(j, "Reuse cycles");

    const json& seq = require_key(j, "Execution sequence");
    if (!seq.is_object())
        throw ParseError("mapping file: \"Execution sequence\" must be an object");
    for (auto it = seq.begin(); it != seq.end(); ++it) {
        if (!it.value().is_string())
            throw ParseError("mapping file: op for \"" + it.key() + "\" must be a string");
        ExecutionProgram::Cycle cyc;
        cyc.label = it.key();
        cyc.op = parse_op_string(it.value().get<std::string>(), it.key());
        p.cycles.push_back(std::move(cyc));
    }

    check_bounds(p);
    if (warnings) {
        if (p.declared_gate_count != p.gate_count())
            warnings->push_back("mapping file: \"Number of Gates\" is " +
                                std::to_string(p.declared_gate_count) + " but " +
                                std::to_string(p.gate_count()) + " gate ops are listed");
        const int reuse = count_reuse_cycles(p);
        if (p.reuse_cycles != reuse)
            warnings->push_back("mapping file: \"Reuse cycles\" is " +
                                std::to_string(p.reuse_cycles) + " but " +
                                std::to_string(reuse) + " reuse Init cycles are listed");
    }
    return p;
}

std::string emit_simpler(const ExecutionProgram& p, std::vector<std::string>* warnings) {
    const int reuse = count_reuse_cycles(p);
    if (warnings && p.reuse_cycles != reuse)
        warnings->push_back("emit: stored \"Reuse cycles\" (" +
                            std::to_string(p.reuse_cycles) + ") recomputed to " +
                            std::to_string(reuse));
    json j = json::object();
    j["Row size"] = p.row_size;
    j["Number of Gates"] = p.gate_count();
    std::string ins, outs;
    for (const auto& in : p.inputs) ins += (ins.empty() ? "" : ",") + in.name + "(" +
                                           std::to_string(in.cell) + ")";
    for (const auto& out : p.outputs) outs += (outs.empty() ? "" : ",") + out.name + "(" +
                                              std::to_string(out.cell) + ")";
    j["Inputs"] = "{" + ins + "}";
    j["Outputs"] = "{" + outs + "}";
    j["Reuse cycles"] = reuse;
    json seq = json::object();
    for (const auto& cyc : p.cycles) {
        std::string op;
        if (cyc.op.kind == OpKind::Init) {
            // Placeholder cells (no live signal) are quoted, named signals are not.
            op = "Init{";
            for (size_t i = 0; i < cyc.op.args.size(); ++i) {
                const bool quoted = cyc.op.args[i].name.empty() ||
                                    cyc.op.args[i].name == "D";
                op += (i ? "," : "") + ref_text(cyc.op.args[i], quoted, "D");
            }
            op += "}";
        } else {
            op = ref_text(cyc.op.out, false, "D") + "=" +
                 (cyc.op.kind == OpKind::Not
                      ? "inv1"
                      : "nor" + std::to_string(cyc.op.args.size())) +
                 "{";
            for (size_t i = 0; i < cyc.op.args.size(); ++i)
                op += (i ? "," : "") + ref_text(cyc.op.args[i], false, "D");
            op += "}";
        }
        seq[cyc.label] = op;
    }
    j["Execution sequence"] = std::move(seq);
    return j.dump(4) + "\n";
}

std::vector<Violation> validate(const ExecutionProgram& p) {
    std::vector<Violation> v;
    auto add = [&](int idx, std::string msg) { v.push_back({idx, std::move(msg)}); };

    if (p.row_size < 0) add(-1, "row_size is negative");
    auto in_bounds = [&](int cell) { return cell >= 0 && cell < p.row_size; };

    std::vector<char> is_input(std::max(p.row_size, 0), 0);
    {
        std::vector<std::string> seen_names;
        std::vector<int> seen_cells;
        for (const auto& in : p.inputs) {
            if (!in_bounds(in.cell)) {
                add(-1, "input \"" + in.name + "\" cell " + std::to_string(in.cell) +
                            " out of range");
                continue;
            }
            for (const auto& n : seen_names)
                if (n == in.name) add(-1, "duplicate input name \"" + in.name + "\"");
            for (int c : seen_cells)
                if (c == in.cell)
                    add(-1, "inputs share cell " + std::to_string(in.cell));
            seen_names.push_back(in.name);
            seen_cells.push_back(in.cell);
            is_input[in.cell] = 1;
        }
    }
    {
        std::vector<std::string> seen;
        for (const auto& out : p.outputs) {
            if (!in_bounds(out.cell))
                add(-1, "output \"" + out.name + "\" cell " + std::to_string(out.cell) +
                            " out of range");
            for (const auto& n : seen)
                if (n == out.name) add(-1, "duplicate output name \"" + out.name + "\"");
            seen.push_back(out.name);
        }
    }

    // Per-cell write/init tracking for init-before-use.
    std::vector<char> written(std::max(p.row_size, 0), 0);
    std::vector<char> inited(std::max(p.row_size, 0), 0);
    for (size_t i = 0; i < p.cycles.size(); ++i) {
        const auto& cyc = p.cycles[i];
        const MicroOp& op = cyc.op;
        const int idx = static_cast<int>(i);
        bool bounds_ok = true;
        for (const auto& ref : op.args)
            if (!in_bounds(ref.cell)) {
                add(idx, cyc.label + ": cell " + std::to_string(ref.cell) + " out of range");
                bounds_ok = false;
            }
        if (op.kind == OpKind::Init) {
            if (op.args.empty()) add(idx, cyc.label + ": Init lists no cells");
            for (size_t a = 0; a < op.args.size(); ++a)
                for (size_t b = a + 1; b < op.args.size(); ++b)
                    if (op.args[a].cell == op.args[b].cell)
                        add(idx, cyc.label + ": Init lists cell " +
                                     std::to_string(op.args[a].cell) + " twice");
            if (bounds_ok)
                for (const auto& ref : op.args) inited[ref.cell] = 1;
            continue;
        }
        if (op.kind == OpKind::Not && op.args.size() != 1)
            add(idx, cyc.label + ": NOT requires exactly one input");
        if (op.kind == OpKind::Nor && op.args.size() < 2)
            add(idx, cyc.label + ": NOR requires at least two inputs");
        if (!in_bounds(op.out.cell)) {
            add(idx, cyc.label + ": output cell " + std::to_string(op.out.cell) +
                         " out of range");
            continue;
        }
        for (const auto& ref : op.args)
            if (ref.cell == op.out.cell)
                add(idx, cyc.label + ": output cell " + std::to_string(op.out.cell) +
                             " also appears as an input");
        if (is_input[op.out.cell])
            add(idx, cyc.label + ": input cell " + std::to_string(op.out.cell) +
                         " used as a gate output");
        if (written[op.out.cell] && !inited[op.out.cell])
            add(idx, cyc.label + ": output cell " + std::to_string(op.out.cell) +
                         " reused without an Init since its previous use");
        written[op.out.cell] = 1;
        inited[op.out.cell] = 0;
    }
    return v;
}

} // namespace magic
