#include "epm/report.hpp"

#include <algorithm>
#include <cstdio>

namespace epm {

std::string to_string(Cohort c) {
    switch (c) {
    case Cohort::Pass: return "Pass";
    case Cohort::Fail: return "Fail";
    case Cohort::All: return "All";
    }
    return "?";
}

int FitnessReport::max_unit() const {
    int max = 0;
    for (const auto& [key, cell] : cells) max = std::max(max, key.unit);
    return max;
}

FitnessReport fitness_table(const std::map<CellKey, FitnessCell>& cells,
                            const std::string& miner_label) {
    FitnessReport report;
    report.miner_label = miner_label;
    for (const auto& [key, cell] : cells) {
        if (!cell.net || !cell.log || cell.log->empty()) continue;
        CellResult result;
        result.fitness = fitness(*cell.net, *cell.log);
        result.counts = replay_log(*cell.net, *cell.log);
        result.stats.num_cases = static_cast<std::size_t>(cell.log->num_traces());
        for (const auto& [trace, count] : cell.log->variants)
            result.stats.num_events += trace.size() * count;
        report.cells.emplace(key, result);
    }
    return report;
}

namespace {

const Cohort kColumns[] = {Cohort::Pass, Cohort::Fail, Cohort::All};
const char* kHeaders[] = {"Pass students", "Fail students", "All students"};

std::string fmt3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string row_label(int unit) {
    return unit == 0 ? "All Units" : "Unit " + std::to_string(unit);
}

std::string cell_text(const FitnessReport& report, int unit, Cohort cohort) {
    auto it = report.cells.find(CellKey{unit, cohort});
    return it == report.cells.end() ? "-" : fmt3(it->second.fitness);
}

std::string title(const FitnessReport& report) {
    std::string t = "Fitness (token replay";
    if (!report.miner_label.empty()) t += ", " + report.miner_label;
    t += ")";
    return t;
}

std::vector<int> row_units(const FitnessReport& report) {
    std::vector<int> units{0};
    for (int u = 1; u <= report.max_unit(); ++u) units.push_back(u);
    return units;
}

} // namespace

std::string render_report_text(const FitnessReport& report) {
    const auto units = row_units(report);
    std::size_t label_w = std::string("Units").size();
    for (int u : units) label_w = std::max(label_w, row_label(u).size());

    std::string out = title(report) + "\n\n";
    out += "Units";
    out.append(label_w - 5, ' ');
    for (const char* h : kHeaders) {
        out += "  ";
        out += h;
    }
    out += "\n";
    for (int u : units) {
        std::string label = row_label(u);
        out += label;
        out.append(label_w - label.size(), ' ');
        for (std::size_t c = 0; c < 3; ++c) {
            std::string v = cell_text(report, u, kColumns[c]);
            std::size_t w = std::string(kHeaders[c]).size();
            out += "  ";
            out.append(w - v.size(), ' ');
            out += v;
        }
        out += "\n";
    }
    return out;
}

std::string render_report_csv(const FitnessReport& report) {
    std::string out = "units,pass,fail,all\n";
    for (int u : row_units(report)) {
        out += row_label(u);
        for (Cohort c : kColumns) {
            out += ",";
            out += cell_text(report, u, c);
        }
        out += "\n";
    }
    return out;
}

std::string render_report_markdown(const FitnessReport& report) {
    std::string out = "| Units | Pass students | Fail students | All students |\n";
    out += "| --- | --- | --- | --- |\n";
    for (int u : row_units(report)) {
        out += "| " + row_label(u);
        for (Cohort c : kColumns) out += " | " + cell_text(report, u, c);
        out += " |\n";
    }
    return out;
}

} // namespace epm
