#pragma once

#include "epm/event_log.hpp"
#include "epm/preprocess.hpp"
#include "epm/process_tree.hpp"

#include <cstdint>

namespace epm {

/// Parameters of the synthetic trace sampler. Everything downstream of the
/// seed is deterministic, bit for bit.
struct GenConfig {
    std::uint64_t n_traces = 100;
    std::uint64_t seed = 1;
    std::size_t max_loop_unrollings = 2;
    double noise_rate = 0.0; // probability a trace gets one random swap/insert/drop
    std::int64_t timestamp_start = 1362355200; // 2013-03-04T00:00:00Z
    std::int64_t timestamp_step = 60;
    std::string case_prefix = "case";
};

/// Samples n_traces walks of the tree: uniform Xor branches, random And
/// interleavings, geometric(1/2) loop repeats capped at
/// max_loop_unrollings. With noise_rate 0 every trace lies in the tree's
/// language.
EventLog sample_log(const ProcessTree& t, const GenConfig& cfg);

/// Directly-follows relation the tree itself can produce: all edges, start
/// and end activities, and whether the empty trace is in the language.
/// Oracle for checking sampled logs directly-follows complete.
struct TreeDfRelation {
    std::set<std::string> activities;
    std::set<std::pair<std::string, std::string>> edges;
    std::set<std::string> start_acts;
    std::set<std::string> end_acts;
    bool can_be_empty = false;
};

TreeDfRelation tree_df_relation(const ProcessTree& t);

struct SynthCourse {
    EventLog log;        // raw Moodle-shaped log (actions + info, no codes)
    GradeBook grades;
    UnitRule units;
};

/// Fabricates a whole course: per unit, passing students follow a
/// learn-then-execute-then-review tree that opens in the forum, failing
/// students an execute-first tree that defers reading to the end. Adds a
/// sprinkling of duplicate rows and irrelevant actions so the preprocessing
/// stages have real work to do. Grades are drawn consistent with the
/// cohort.
SynthCourse synth_course(int units, int students, double pass_ratio,
                         std::uint64_t seed);

} // namespace epm
