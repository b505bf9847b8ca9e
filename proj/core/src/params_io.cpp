#include "magic/params_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
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

// name -> setter; one map drives parsing, formatting and documentation.
using Setter = std::function<void(SimParams&, double)>;
using Getter = std::function<double(const SimParams&)>;
struct Key {
    const char* name;
    Setter set;
    Getter get;
};

const std::vector<Key>& device_keys() {
    static const std::vector<Key> keys = {
        {"v_t_set", [](SimParams& p, double v) { p.device.v_t_set = v; },
         [](const SimParams& p) { return p.device.v_t_set; }},
        {"v_t_reset", [](SimParams& p, double v) { p.device.v_t_reset = v; },
         [](const SimParams& p) { return p.device.v_t_reset; }},
        {"k_set", [](SimParams& p, double v) { p.device.k_set = v; },
         [](const SimParams& p) { return p.device.k_set; }},
        {"k_reset", [](SimParams& p, double v) { p.device.k_reset = v; },
         [](const SimParams& p) { return p.device.k_reset; }},
        {"alpha_set", [](SimParams& p, double v) { p.device.alpha_set = v; },
         [](const SimParams& p) { return p.device.alpha_set; }},
        {"alpha_reset", [](SimParams& p, double v) { p.device.alpha_reset = v; },
         [](const SimParams& p) { return p.device.alpha_reset; }},
        {"r_on", [](SimParams& p, double v) { p.device.r_on = v; },
         [](const SimParams& p) { return p.device.r_on; }},
        {"r_off", [](SimParams& p, double v) { p.device.r_off = v; },
         [](const SimParams& p) { return p.device.r_off; }},
    };
    return keys;
}

const std::vector<Key>& other_keys() {
    static const std::vector<Key> keys = {
        {"v_input_write", [](SimParams& p, double v) { p.levels.v_input_write = v; },
         [](const SimParams& p) { return p.levels.v_input_write; }},
        {"v_init", [](SimParams& p, double v) { p.levels.v_init = v; },
         [](const SimParams& p) { return p.levels.v_init; }},
        {"v_exec", [](SimParams& p, double v) { p.levels.v_exec = v; },
         [](const SimParams& p) { return p.levels.v_exec; }},
        {"v_read", [](SimParams& p, double v) { p.levels.v_read = v; },
         [](const SimParams& p) { return p.levels.v_read; }},
        {"v_gate_on", [](SimParams& p, double v) { p.levels.v_gate_on = v; },
         [](const SimParams& p) { return p.levels.v_gate_on; }},
        {"v_gate_off", [](SimParams& p, double v) { p.levels.v_gate_off = v; },
         [](const SimParams& p) { return p.levels.v_gate_off; }},
        {"v_reset_write", [](SimParams& p, double v) { p.levels.v_reset_write = v; },
         [](const SimParams& p) { return p.levels.v_reset_write; }},
        {"pulse_width", [](SimParams& p, double v) { p.timing.pulse_width = v; },
         [](const SimParams& p) { return p.timing.pulse_width; }},
        {"edge_time", [](SimParams& p, double v) { p.timing.edge_time = v; },
         [](const SimParams& p) { return p.timing.edge_time; }},
        {"settle_gap", [](SimParams& p, double v) { p.timing.settle_gap = v; },
         [](const SimParams& p) { return p.timing.settle_gap; }},
        {"r_selector_on", [](SimParams& p, double v) { p.circuit.r_selector_on = v; },
         [](const SimParams& p) { return p.circuit.r_selector_on; }},
        {"r_selector_off", [](SimParams& p, double v) { p.circuit.r_selector_off = v; },
         [](const SimParams& p) { return p.circuit.r_selector_off; }},
        {"r_row_switch", [](SimParams& p, double v) { p.circuit.r_row_switch = v; },
         [](const SimParams& p) { return p.circuit.r_row_switch; }},
        {"dt", [](SimParams& p, double v) { p.circuit.dt = v; },
         [](const SimParams& p) { return p.circuit.dt; }},
        {"kcl_abs_tol", [](SimParams& p, double v) { p.circuit.kcl_abs_tol = v; },
         [](const SimParams& p) { return p.circuit.kcl_abs_tol; }},
        {"kcl_rel_tol", [](SimParams& p, double v) { p.circuit.kcl_rel_tol = v; },
         [](const SimParams& p) { return p.circuit.kcl_rel_tol; }},
        {"max_newton_iters",
         [](SimParams& p, double v) { p.circuit.max_newton_iters = static_cast<int>(v); },
         [](const SimParams& p) { return static_cast<double>(p.circuit.max_newton_iters); }},
    };
    return keys;
}

const Key* find_key(const std::string& name) {
    for (const auto& k : device_keys())
        if (name == k.name) return &k;
    for (const auto& k : other_keys())
        if (name == k.name) return &k;
    return nullptr;
}

std::string format_value(double v) {
    char buf[48];
    // Up to 12 significant digits, trailing zeros trimmed by %g.
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace

void SimParams::check() const {
    device.check();
    levels.check();
    timing.check();
    circuit.check(timing);
}

SimParams parse_params(const std::string& text, SimParams base) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("params line " + std::to_string(line_no) +
                             ": expected `name = value`, got \"" + line + "\"");
        const std::string name = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const Key* key = find_key(name);
        if (!key)
            throw ParseError("params line " + std::to_string(line_no) +
                             ": unknown parameter \"" + name + "\"");
        try {
            size_t used = 0;
            const double v = std::stod(value, &used);
            if (used != value.size() || !std::isfinite(v))
                throw std::invalid_argument(value);
            key->set(base, v);
        } catch (const std::exception&) {
            throw ParseError("params line " + std::to_string(line_no) +
                             ": cannot parse value \"" + value + "\" for \"" + name + "\"");
        }
    }
    base.check();
    return base;
}

SimParams load_params_file(const std::string& path, SimParams base) {
    return parse_params(read_text_file(path), std::move(base));
}

namespace {

void emit_comment(std::ostringstream& out, const std::string& comment) {
    if (comment.empty()) return;
    std::istringstream lines(comment);
    std::string line;
    while (std::getline(lines, line)) out << "# " << line << "\n";
}

} // namespace

std::string format_device_params(const VteamParams& p, const std::string& comment) {
    SimParams wrap;
    wrap.device = p;
    std::ostringstream out;
    emit_comment(out, comment);
    for (const auto& k : device_keys())
        out << k.name << " = " << format_value(k.get(wrap)) << "\n";
    return out.str();
}

std::string format_params(const SimParams& p, const std::string& comment) {
    std::ostringstream out;
    emit_comment(out, comment);
    for (const auto& k : device_keys())
        out << k.name << " = " << format_value(k.get(p)) << "\n";
    for (const auto& k : other_keys())
        out << k.name << " = " << format_value(k.get(p)) << "\n";
    return out.str();
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("failed reading file: " + path);
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open file for writing: " + path);
    out << content;
    if (!out) throw IoError("failed writing file: " + path);
}

} // namespace magic
