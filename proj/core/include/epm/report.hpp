#pragma once

#include "epm/event_log.hpp"
#include "epm/petri.hpp"
#include "epm/replay.hpp"

#include <map>
#include <optional>
#include <string>

namespace epm {

enum class Cohort { Pass, Fail, All };

std::string to_string(Cohort c);

/// Row scope of the fitness table: unit 0 stands for "All Units".
struct CellKey {
    int unit = 0;
    Cohort cohort = Cohort::All;

    auto operator<=>(const CellKey&) const = default;
};

struct CellResult {
    double fitness = 0.0;
    ReplayCounts counts;
    LogStats stats;
};

/// Per-(unit x cohort) fitness grid: rows All Units, Unit 1..K; columns
/// Pass / Fail / All. Absent cells render as "-".
struct FitnessReport {
    std::map<CellKey, CellResult> cells;
    std::string miner_label; // which variant produced the models

    int max_unit() const;
};

struct FitnessCell {
    const WorkflowNet* net = nullptr;
    const ActivityLog* log = nullptr;
};

/// Computes fitness per cell. Cells whose log is empty are left absent.
FitnessReport fitness_table(const std::map<CellKey, FitnessCell>& cells,
                            const std::string& miner_label = {});

// Renderers; all print fitness with three decimals and are byte-stable.
std::string render_report_text(const FitnessReport& report);
std::string render_report_csv(const FitnessReport& report);
std::string render_report_markdown(const FitnessReport& report);

} // namespace epm
