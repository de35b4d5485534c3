#pragma once

#include "epm/discovery.hpp"
#include "epm/event_log.hpp"
#include "epm/process_tree.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace epm {

/// A discovered model decorated with the frequencies observed in the log it
/// was mined from: event counts per activity and directly-follows counts per
/// edge.
struct AnnotatedModel {
    ProcessTree tree;
    std::map<std::string, std::uint64_t> activity_freq;
    std::map<std::pair<std::string, std::string>, std::uint64_t> edge_freq;
    std::vector<std::string> warnings; // log activities absent from the tree
};

AnnotatedModel annotate(const ProcessTree& tree, const ActivityLog& log);
AnnotatedModel annotate(const ProcessTree& tree, const EventLog& log);

/// Renders the model as a deterministic DOT graph: activity leaves as boxes
/// labeled "name\n(freq)", silent steps as small filled squares, And/Xor/
/// Loop operators as split+join diamond pairs ("+", "x", loop arrow), a
/// filled-circle initial node and a double-circle final node. Edges between
/// activity boxes carry their directly-follows frequency when known.
std::string to_dot(const AnnotatedModel& model);

/// Secondary mode: the raw place/transition graph of a workflow net.
struct WorkflowNet;
std::string net_to_dot(const WorkflowNet& net);

} // namespace epm
