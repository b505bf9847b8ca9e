#include "magic/netlist.hpp"

#include <cctype>
#include <set>
#include <sstream>

#include "magic/errors.hpp"

namespace magic {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool valid_name(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' ||
              c == '[' || c == ']' || c == '.'))
            return false;
    return true;
}

std::vector<std::string> split_args(const std::string& body, int line,
                                    const std::string& where) {
    std::vector<std::string> args;
    std::string cur;
    for (char c : body) {
        if (c == ',') {
            args.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    args.push_back(trim(cur));
    for (const auto& a : args)
        if (!valid_name(a))
            throw ParseError("netlist line " + std::to_string(line) + ": bad operand \"" +
                             a + "\" in " + where);
    return args;
}

} // namespace

GateNetlist parse_netlist(const std::string& text) {
    GateNetlist n;
    std::set<std::string> defined;     // primary inputs + gate outputs seen so far
    std::set<std::string> gate_outs;   // gate outputs only
    std::set<std::string> requested_outputs;

    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const size_t hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        const std::string s = trim(raw);
        if (s.empty()) continue;

        auto header = [&](const char* kw) -> std::string {
            const size_t len = std::string(kw).size();
            if (s.rfind(kw, 0) == 0 && s.size() > len &&
                std::isspace(static_cast<unsigned char>(s[len])))
                return trim(s.substr(len));
            // Also accept INPUT(name) style.
            if (s.rfind(std::string(kw) + "(", 0) == 0 && s.back() == ')')
                return trim(s.substr(len + 1, s.size() - len - 2));
            return "";
        };

        if (std::string name = header("INPUT"); !name.empty()) {
            if (!valid_name(name))
                throw ParseError("netlist line " + std::to_string(line) +
                                 ": bad input name \"" + name + "\"");
            if (defined.count(name))
                throw ParseError("netlist line " + std::to_string(line) +
                                 ": duplicate definition of \"" + name + "\"");
            defined.insert(name);
            n.primary_inputs.push_back(name);
            continue;
        }
        if (std::string name = header("OUTPUT"); !name.empty()) {
            if (!valid_name(name))
                throw ParseError("netlist line " + std::to_string(line) +
                                 ": bad output name \"" + name + "\"");
            if (requested_outputs.count(name))
                throw ParseError("netlist line " + std::to_string(line) +
                                 ": duplicate OUTPUT declaration of \"" + name + "\"");
            requested_outputs.insert(name);
            n.primary_outputs.push_back(name);
            continue;
        }

        const size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ParseError("netlist line " + std::to_string(line) +
                             ": expected INPUT/OUTPUT header or gate definition, got \"" +
                             s + "\"");
        const std::string out = trim(s.substr(0, eq));
        if (!valid_name(out))
            throw ParseError("netlist line " + std::to_string(line) +
                             ": bad signal name \"" + out + "\"");
        const std::string rhs = trim(s.substr(eq + 1));
        const size_t open = rhs.find('(');
        const size_t close = rhs.rfind(')');
        if (open == std::string::npos || close == std::string::npos || close < open ||
            trim(rhs.substr(close + 1)) != "")
            throw ParseError("netlist line " + std::to_string(line) +
                             ": expected NOT(...) or NOR(...), got \"" + rhs + "\"");
        const std::string fn = trim(rhs.substr(0, open));
        const std::string body = rhs.substr(open + 1, close - open - 1);

        GateNetlist::Gate g;
        g.output = out;
        g.inputs = split_args(body, line, fn);
        if (fn == "NOT") {
            g.kind = GateNetlist::GateKind::Not;
            if (g.inputs.size() != 1)
                throw ParseError("netlist line " + std::to_string(line) +
                                 ": NOT takes exactly one operand");
        } else if (fn == "NOR") {
            g.kind = GateNetlist::GateKind::Nor;
            if (g.inputs.size() < 2)
                throw ParseError("netlist line " + std::to_string(line) +
                                 ": NOR takes at least two operands");
        } else {
            throw ParseError("netlist line " + std::to_string(line) +
                             ": unsupported gate \"" + fn + "\" (only NOT and NOR)");
        }
        if (defined.count(out))
            throw ParseError("netlist line " + std::to_string(line) +
                             ": duplicate definition of \"" + out + "\"");
        for (const auto& a : g.inputs) {
            if (a == out)
                throw ParseError("netlist line " + std::to_string(line) +
                                 ": combinational cycle: \"" + out +
                                 "\" feeds its own definition");
            if (!defined.count(a))
                throw ParseError("netlist line " + std::to_string(line) +
                                 ": operand \"" + a +
                                 "\" is not defined yet (unknown signal or cycle)");
        }
        defined.insert(out);
        gate_outs.insert(out);
        n.gates.push_back(std::move(g));
    }

    if (n.primary_inputs.empty())
        throw ParseError("netlist: no INPUT declarations");
    for (const auto& name : n.primary_outputs)
        if (!defined.count(name))
            throw ParseError("netlist: OUTPUT \"" + name + "\" is never defined");
    if (n.primary_outputs.empty()) {
        // Default: every gate output nothing else consumes.
        std::set<std::string> consumed;
        for (const auto& g : n.gates)
            for (const auto& a : g.inputs) consumed.insert(a);
        for (const auto& g : n.gates)
            if (!consumed.count(g.output)) n.primary_outputs.push_back(g.output);
    }
    if (n.primary_outputs.empty())
        throw ParseError("netlist: no outputs (declare OUTPUT lines or add gates)");
    return n;
}

std::map<std::string, int> evaluate_logic(const GateNetlist& n,
                                          const std::map<std::string, int>& inputs) {
    std::map<std::string, int> values;
    for (const auto& name : n.primary_inputs) {
        auto it = inputs.find(name);
        if (it == inputs.end())
            throw ValidationError("evaluate_logic: missing value for input \"" + name +
                                  "\"");
        values[name] = it->second ? 1 : 0;
    }
    for (const auto& g : n.gates) {
        int v;
        if (g.kind == GateNetlist::GateKind::Not) {
            v = values.at(g.inputs[0]) ? 0 : 1;
        } else {
            v = 1;
            for (const auto& a : g.inputs)
                if (values.at(a)) {
                    v = 0;
                    break;
                }
        }
        values[g.output] = v;
    }
    return values;
}

} // namespace magic
