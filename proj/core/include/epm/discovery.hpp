#pragma once

#include "epm/event_log.hpp"
#include "epm/process_tree.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace epm {

/// The view of a log the miner works on: distinct activity sequences with
/// multiplicities. Trace content beyond activity identity is irrelevant to
/// discovery.
struct ActivityLog {
    std::map<ActivityTrace, std::uint64_t> variants;

    static ActivityLog from_event_log(const EventLog& log);
    static ActivityLog from_traces(const std::vector<ActivityTrace>& traces);

    void add(const ActivityTrace& trace, std::uint64_t count = 1);
    std::uint64_t num_traces() const;
    bool empty() const { return variants.empty(); }
    std::set<std::string> alphabet() const;
};

/// Directly-follows graph: edge (a,b) counts how often b immediately
/// follows a within a trace, plus start/end activity counts.
struct Dfg {
    std::set<std::string> activities;
    std::map<std::pair<std::string, std::string>, std::uint64_t> edges;
    std::map<std::string, std::uint64_t> start_acts;
    std::map<std::string, std::uint64_t> end_acts;
    std::uint64_t empty_traces = 0;

    bool has_edge(const std::string& a, const std::string& b) const {
        return edges.find({a, b}) != edges.end();
    }
};

Dfg build_dfg(const ActivityLog& log);
Dfg build_dfg(const EventLog& log);

enum class CutKind { Xor, Seq, And, Loop };

/// A partition of the DFG activities certifying one operator. Parts are
/// sorted activity sets; their order is semantic for Seq (chain order) and
/// Loop (body first).
struct Cut {
    CutKind kind = CutKind::Xor;
    std::vector<std::vector<std::string>> parts;
};

/// Tries Xor, Seq, And, Loop in that order, each maximal; returns the first
/// cut found or nullopt when none applies.
std::optional<Cut> find_cut(const Dfg& dfg);

/// Projects/segments the log along the cut, one sub-log per part. Xor routes
/// whole traces to the part holding the majority of their events (ties to
/// the earliest part); Seq and And project; Loop segments traces into
/// body/redo excursions.
std::vector<ActivityLog> split_log(const ActivityLog& log, const Cut& cut);

/// Basic Inductive Miner. Deterministic in the trace multiset; the returned
/// tree replays every trace of the log.
ProcessTree discover(const ActivityLog& log);
ProcessTree discover(const EventLog& log);

/// Infrequent variant: at every recursion step, DFG edges (and start/end
/// entries) relatively rarer than noise_threshold times the strongest
/// alternative of the same source are removed before cut detection. Sound,
/// but no longer guarantees perfect fitness. Threshold must lie in [0,1].
ProcessTree discover_infrequent(const ActivityLog& log, double noise_threshold);
ProcessTree discover_infrequent(const EventLog& log, double noise_threshold);

/// The filtering step of discover_infrequent, exposed for tests.
Dfg filter_dfg(const Dfg& dfg, double noise_threshold);

} // namespace epm
