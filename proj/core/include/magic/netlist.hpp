#pragma once

#include <map>
#include <string>
#include <vector>

namespace magic {

// A combinational NOR/NOT netlist in definition order (gate inputs always
// refer to a primary input or an earlier gate, so the list is topological).
struct GateNetlist {
    enum class GateKind { Not, Nor };
    struct Gate {
        std::string output;
        GateKind kind = GateKind::Not;
        std::vector<std::string> inputs;
    };

    std::vector<std::string> primary_inputs;
    std::vector<std::string> primary_outputs;
    std::vector<Gate> gates;
};

// Parses the line-based netlist format:
//   INPUT <name> / OUTPUT <name> headers, then one gate per line:
//   <out> = NOT(<in>)  or  <out> = NOR(<in1>, <in2>[, ...])
// '#' starts a comment. Throws ParseError for malformed lines, unknown
// signals, duplicate definitions and cycles (forward references).
GateNetlist parse_netlist(const std::string& text);

// Topological boolean evaluation; returns the value of every signal.
// Throws ValidationError when `inputs` misses a primary input.
std::map<std::string, int> evaluate_logic(const GateNetlist& n,
                                          const std::map<std::string, int>& inputs);

} // namespace magic
