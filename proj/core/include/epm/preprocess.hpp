#pragma once

#include "epm/event_log.hpp"

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace epm {

/// Maps low-level actions onto the five high-level labels. The bundled
/// default holds exactly the sixteen rows the pipeline codes with.
struct CodingScheme {
    std::map<std::string, SrlLabel> mapping;

    std::set<std::string> actions() const;

    /// The sixteen-action default scheme.
    static const CodingScheme& default_scheme();

    /// TSV, one "action<TAB>label" row per line; '#' starts a comment.
    static CodingScheme load_tsv(std::istream& in);
};

/// case_id -> final mark on a 10-point scale.
struct GradeBook {
    std::map<std::string, double> grades;

    /// CSV "case_id,grade"; an optional header row is skipped. Grades must
    /// lie in [0,10].
    static GradeBook load_csv(std::istream& in);
};

/// Ordered (pattern, unit) rules over the info attribute; first match wins.
/// Patterns are ECMAScript regexes applied with search semantics, so plain
/// text behaves as a substring match.
struct UnitRule {
    struct Entry {
        std::string pattern;
        int unit = 0;
    };
    std::vector<Entry> entries;
    int unit_count = 0;

    /// Returns the matched unit id, or 0 when no pattern applies.
    int unit_of(const std::string& info) const;

    /// TSV "pattern<TAB>unit" rows; unit ids must lie in 1..K.
    static UnitRule load_tsv(std::istream& in);
};

/// Activity identity used during mining: the (action, code) pair under its
/// canonical name "CODE|action".
struct EventClass {
    std::string action;
    SrlLabel code = SrlLabel::Planning;
    std::string name;

    bool operator==(const EventClass&) const = default;
    bool operator<(const EventClass& other) const { return name < other.name; }
};

/// Requires e.code to be present; throws ConfigError otherwise.
EventClass event_class(const Event& e);

/// Replaces every case_id by a stable pseudonym (keyed SHA-256 over
/// salt+name, first 16 hex digits). Injective on the input's names; a
/// truncation collision raises ConfigError rather than silently merging
/// cases.
EventLog anonymize(const EventLog& log, const std::string& salt);

/// Collapses events identical in (case_id, action, timestamp, info); the
/// first occurrence survives, order is otherwise untouched.
EventLog dedup(const EventLog& log);

/// Drops whole traces whose case_id is listed (instructor, admin, test
/// users).
EventLog filter_cases(const EventLog& log, const std::set<std::string>& excluded);

/// Drops events whose action is not whitelisted, then drops traces left
/// empty.
EventLog filter_actions(const EventLog& log, const std::set<std::string>& whitelist);

enum class UnknownActionPolicy { Drop, Error };

struct CodingResult {
    EventLog log;
    std::size_t dropped_events = 0;
};

/// Assigns every event its high-level code. Unmapped actions are dropped
/// and counted under Drop policy (traces emptied this way disappear), or
/// abort with ConfigError naming the action under Error policy.
CodingResult apply_coding(const EventLog& log, const CodingScheme& scheme,
                          UnknownActionPolicy policy = UnknownActionPolicy::Drop);

struct GradeSplit {
    EventLog pass;
    EventLog fail;
};

/// Routes each trace by final mark: pass iff grade >= threshold. Every case
/// must have a grade; otherwise ConfigError lists the missing case_ids. The
/// outputs carry a "cohort" provenance attribute.
GradeSplit split_by_grade(const EventLog& log, const GradeBook& grades,
                          double threshold = 5.0);

struct UnitSplit {
    std::map<int, EventLog> units;
    EventLog unassigned;
};

/// Routes each event to the unit its info matches; events matching no
/// pattern land in the unassigned bucket. A case appears in a unit only if
/// it has at least one event there.
UnitSplit split_by_unit(const EventLog& log, const UnitRule& rule);

} // namespace epm
