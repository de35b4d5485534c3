#pragma once

#include "epm/discovery.hpp"
#include "epm/event_log.hpp"
#include "epm/petri.hpp"

#include <cstdint>

namespace epm {

/// Token-replay bookkeeping: produced, consumed, missing, remaining.
/// Invariants: m <= c, r <= p, and r == p + m - c.
struct ReplayCounts {
    std::uint64_t produced = 0;
    std::uint64_t consumed = 0;
    std::uint64_t missing = 0;
    std::uint64_t remaining = 0;

    bool operator==(const ReplayCounts&) const = default;

    void add(const ReplayCounts& other) {
        produced += other.produced;
        consumed += other.consumed;
        missing += other.missing;
        remaining += other.remaining;
    }
};

/// Replays one trace on the net. Convention: one token is produced into the
/// source; per event, a transition with that label is fired, enabling it
/// first via a shortest sequence of silent transitions when one exists
/// (silent firings also count into produced/consumed), force-firing with
/// missing tokens when it cannot be enabled, and counting one consumed plus
/// one missing when no transition bears the label at all; at the end a token
/// is consumed from the sink (again after silent moves when needed) and
/// every token still on the net counts as remaining.
ReplayCounts replay_trace(const WorkflowNet& net, const ActivityTrace& trace);

/// f = (1 - sum(m)/sum(c))/2 + (1 - sum(r)/sum(p))/2 over all traces,
/// each trace replayed once per multiplicity weight. 1.0 exactly iff every
/// trace replays with zero missing and zero remaining. Empty logs have no
/// fitness; ConfigError.
double fitness(const WorkflowNet& net, const ActivityLog& log);
double fitness(const WorkflowNet& net, const EventLog& log);

ReplayCounts replay_log(const WorkflowNet& net, const ActivityLog& log);

} // namespace epm
