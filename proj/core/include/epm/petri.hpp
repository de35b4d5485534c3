#pragma once

#include "epm/process_tree.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace epm {

using PlaceId = std::uint32_t;

/// Petri net with a designated source place (no incoming arcs) and sink
/// place (no outgoing arcs). Transitions are stored in creation order; that
/// order is the tie-break everywhere nets are explored.
struct WorkflowNet {
    struct Transition {
        std::string label;          // empty when silent
        bool silent = false;
        std::vector<PlaceId> inputs;
        std::vector<PlaceId> outputs;
    };

    std::size_t num_places = 0;
    std::vector<Transition> transitions;
    PlaceId source = 0;
    PlaceId sink = 0;

    std::size_t num_transitions() const { return transitions.size(); }
};

/// Token counts per place.
using Marking = std::vector<std::uint32_t>;

Marking initial_marking(const WorkflowNet& net);
Marking final_marking(const WorkflowNet& net);

/// Standard recursive translation: leaves become single transitions between
/// fresh places, Seq fuses sinks to sources, Xor shares source and sink,
/// And fans out/in through silent transitions, Loop wraps body and redo
/// parts between silent enter/exit transitions so the net source and sink
/// stay pure.
WorkflowNet tree_to_net(const ProcessTree& t);

enum class SoundnessVerdict { Sound, Unsound, Inconclusive };

struct SoundnessResult {
    SoundnessVerdict verdict = SoundnessVerdict::Inconclusive;
    std::string reason;
    std::size_t markings_explored = 0;
};

/// Explores the reachability graph from {source:1} breadth-first. Sound iff
/// the final marking is reachable from every reachable marking, no reachable
/// marking strictly covers it, and every transition fires somewhere. Returns
/// Inconclusive once state_cap markings have been expanded.
SoundnessResult check_soundness(const WorkflowNet& net, std::size_t state_cap = 100000);

/// Label sequences (tau erased, length <= max_len) of firing sequences from
/// the initial to the final marking. Test oracle for the tree translation;
/// exploration is capped to keep it total.
TraceSet net_language(const WorkflowNet& net, std::size_t max_len,
                      std::size_t state_cap = 1000000);

} // namespace epm
