#include "magic/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace magic {

namespace {

std::string fj(double joules) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.4f", joules * 1e15);
    return buf;
}

std::string ratio_str(double r) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.1f" "\xc3\x97", r); // U+00D7 multiplication sign
    return buf;
}

std::string pad(std::string s, size_t width, bool left = false) {
    if (s.size() >= width) return s;
    const std::string fill(width - s.size(), ' ');
    return left ? s + fill : fill + s;
}

} // namespace

double coarse_estimate(long n_not, long n_nor, const CoarseModel& m) {
    return static_cast<double>(n_not) * m.avg_not_energy +
           static_cast<double>(n_nor) * m.avg_nor_energy;
}

double RunSummary::init_exec_ratio(bool fold_input_load) const {
    const double numer = fold_input_load ? e_init + e_input_load : e_init;
    return e_exec > 0.0 ? numer / e_exec : 0.0;
}

std::string render_comparison(const std::vector<RunSummary>& rows, bool fold_input_load) {
    std::vector<std::string> headers = {"benchmark", "pattern", "gates",  "cycles",
                                        "coarse_fJ", "fine_fJ", "init_fJ", "exec_fJ",
                                        "read_fJ",   "fine/coarse", "init/exec"};
    if (!fold_input_load) headers.insert(headers.begin() + 6, "load_fJ");
    std::vector<std::vector<std::string>> cells;
    for (const auto& r : rows) {
        std::vector<std::string> row;
        row.push_back(r.benchmark);
        row.push_back(r.pattern);
        row.push_back(std::to_string(r.n_not + r.n_nor));
        row.push_back(std::to_string(r.cycles));
        row.push_back(fj(r.coarse));
        row.push_back(fj(r.fine_total()));
        if (!fold_input_load) row.push_back(fj(r.e_input_load));
        row.push_back(fj(fold_input_load ? r.e_init + r.e_input_load : r.e_init));
        row.push_back(fj(r.e_exec));
        row.push_back(fj(r.e_read));
        row.push_back(ratio_str(r.coarse > 0.0 ? r.fine_total() / r.coarse : 0.0));
        row.push_back(ratio_str(r.init_exec_ratio(fold_input_load)));
        cells.push_back(std::move(row));
    }
    std::vector<size_t> width(headers.size());
    for (size_t c = 0; c < headers.size(); ++c) {
        width[c] = headers[c].size();
        for (const auto& row : cells) width[c] = std::max(width[c], row[c].size());
    }
    std::string out;
    for (size_t c = 0; c < headers.size(); ++c)
        out += (c ? "  " : "") + pad(headers[c], width[c], c < 2);
    out += "\n";
    for (const auto& row : cells) {
        for (size_t c = 0; c < row.size(); ++c)
            out += (c ? "  " : "") + pad(row[c], width[c], c < 2);
        out += "\n";
    }
    return out;
}

std::string render_comparison_csv(const std::vector<RunSummary>& rows) {
    std::string out =
        "benchmark,pattern,n_pi,n_po,n_not,n_nor,cycles,coarse_J,fine_J,"
        "input_load_J,init_J,exec_J,read_J\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%s,%d,%d,%d,%d,%d,%.9e,%.9e,%.9e,%.9e,%.9e,%.9e\n",
                      r.benchmark.c_str(), r.pattern.c_str(), r.n_pi, r.n_po, r.n_not,
                      r.n_nor, r.cycles, r.coarse, r.fine_total(), r.e_input_load,
                      r.e_init, r.e_exec, r.e_read);
        out += buf;
    }
    return out;
}

std::string render_energy_report(const EnergyReport& report,
                                 const ExecutionProgram& program,
                                 const std::map<std::string, int>& readouts,
                                 bool fold_input_load) {
    std::ostringstream out;
    out << "per-cycle device energy (fJ)\n";
    const size_t n_cells = report.per_cell_category.size();
    out << pad("cycle", 10, true) << pad("category", 11, true);
    for (size_t k = 0; k < n_cells; ++k) out << pad("cell" + std::to_string(k), 10);
    out << pad("total", 11) << "\n";
    for (size_t c = 0; c < report.cycle_labels.size(); ++c) {
        out << pad(report.cycle_labels[c], 10, true)
            << pad(category_name(report.cycle_categories[c]), 11, true);
        for (size_t k = 0; k < n_cells; ++k) out << pad(fj(report.per_cell_cycle[c][k]), 10);
        out << pad(fj(report.per_cycle[c]), 11) << "\n";
    }
    out << "\n";
    out << "category totals (fJ)\n";
    auto total_of = [&](Category cat) {
        return report.category_totals[static_cast<int>(cat)];
    };
    const double load = total_of(Category::InputLoad);
    const double init = total_of(Category::Init);
    const double exec = total_of(Category::Exec);
    const double read = total_of(Category::Read);
    if (fold_input_load) {
        out << "  init (incl. input load): " << fj(init + load) << "\n";
    } else {
        out << "  input load: " << fj(load) << "\n";
        out << "  init:       " << fj(init) << "\n";
    }
    out << "  exec:       " << fj(exec) << "\n";
    out << "  read:       " << fj(read) << "\n";
    out << "  device total:     " << fj(report.device_total()) << "\n";
    out << "  peripheral total: " << fj(report.peripheral_total()) << "\n";
    out << "  source delivered: " << fj(report.source_delivered) << "\n";
    const double init_all = fold_input_load ? init + load : init;
    if (exec > 0.0) {
        out << "  init/exec ratio: " << ratio_str(init_all / exec) << "\n";
        out << "  read/exec ratio: " << ratio_str(read / exec) << "\n";
    }
    out << "\n";
    out << "readouts\n";
    for (const auto& o : program.outputs) {
        auto it = readouts.find(o.name);
        out << "  " << o.name << "(" << o.cell
            << ") = " << (it == readouts.end() ? "?" : std::to_string(it->second)) << "\n";
    }
    return out.str();
}

std::string energy_report_json(const EnergyReport& report,
                               const ExecutionProgram& program,
                               const std::map<std::string, int>& readouts) {
    nlohmann::ordered_json j;
    j["cycles"] = nlohmann::ordered_json::array();
    for (size_t c = 0; c < report.cycle_labels.size(); ++c) {
        nlohmann::ordered_json jc;
        jc["label"] = report.cycle_labels[c];
        jc["category"] = category_name(report.cycle_categories[c]);
        jc["t_start_s"] = report.cycle_window[c][0];
        jc["t_end_s"] = report.cycle_window[c][1];
        jc["device_energy_j"] = report.per_cycle[c];
        jc["per_cell_j"] = report.per_cell_cycle[c];
        j["cycles"].push_back(std::move(jc));
    }
    j["per_cell_category_j"] = nlohmann::ordered_json::array();
    for (size_t k = 0; k < report.per_cell_category.size(); ++k) {
        nlohmann::ordered_json jk;
        jk["cell"] = k;
        for (int cat = 0; cat < kCategoryCount; ++cat)
            jk[category_name(static_cast<Category>(cat))] =
                report.per_cell_category[k][cat];
        j["per_cell_category_j"].push_back(std::move(jk));
    }
    nlohmann::ordered_json totals;
    for (int cat = 0; cat < kCategoryCount; ++cat)
        totals[category_name(static_cast<Category>(cat))] = report.category_totals[cat];
    totals["device_total"] = report.device_total();
    totals["peripheral_selector"] = report.peripheral_selector;
    totals["peripheral_row"] = report.peripheral_row;
    totals["peripheral_total"] = report.peripheral_total();
    totals["source_delivered"] = report.source_delivered;
    j["totals_j"] = std::move(totals);
    j["kcl"] = {{"max_residual_a", report.max_kcl_residual},
                {"max_residual_ratio", report.max_kcl_residual_ratio}};
    nlohmann::ordered_json reads = nlohmann::ordered_json::object();
    for (const auto& o : program.outputs) {
        auto it = readouts.find(o.name);
        if (it != readouts.end()) reads[o.name] = it->second;
    }
    j["readouts"] = std::move(reads);
    return j.dump(2) + "\n";
}

} // namespace magic
