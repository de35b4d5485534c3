#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace epm {

/// The five high-level labels a preprocessed event may carry.
enum class SrlLabel {
    Planning,
    Learning,
    Executing,
    Review,
    ForumPeerLearning,
};

std::string to_string(SrlLabel label);
std::optional<SrlLabel> srl_label_from_string(std::string_view text);

/// One logged student action. `timestamp` is seconds since the Unix epoch
/// (UTC); the source exports carry at least second resolution. `code` stays
/// empty until preprocessing assigns one of the five labels.
struct Event {
    std::string case_id;
    std::string action;
    std::int64_t timestamp = 0;
    std::string info;
    std::optional<SrlLabel> code;

    bool operator==(const Event&) const = default;
};

/// All events of one case (student), ordered by non-decreasing timestamp.
struct Trace {
    std::string case_id;
    std::vector<Event> events;

    bool operator==(const Trace&) const = default;
};

struct EventLog {
    std::vector<Trace> traces;
    std::map<std::string, std::string> attributes;

    std::size_t num_events() const;

    bool operator==(const EventLog&) const = default;
};

struct LogStats {
    std::size_t num_cases = 0;
    std::size_t num_events = 0;

    bool operator==(const LogStats&) const = default;
};

LogStats log_stats(const EventLog& log);

/// Activity identity used by mining: "CODE|action" once coded, the bare
/// action otherwise.
std::string activity_of(const Event& e);

/// Sorts events of every trace by timestamp (stable, so file order breaks
/// ties) and checks case_id uniqueness across traces.
void sort_and_validate(EventLog& log);

// Timestamp helpers (UTC, second resolution).
std::string format_iso8601(std::int64_t epoch_seconds);
/// Accepts "YYYY-MM-DD HH:MM[:SS]" and ISO-8601 ("YYYY-MM-DDTHH:MM:SS" with
/// optional fractional seconds and Z / +hh:mm offset). Throws ParseError.
std::int64_t parse_timestamp(std::string_view text);

} // namespace epm
