#pragma once

#include "epm/event_log.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace epm {

/// Layout of a raw Moodle export: six columns, of which only time, name,
/// action and info are retained. Columns are addressed by header name when
/// `has_header` is set, otherwise by zero-based index.
struct CsvSchema {
    char delimiter = ',';
    bool has_header = true;

    std::string course_column = "course";
    std::string ip_column = "ip";
    std::string time_column = "time";
    std::string name_column = "name";
    std::string action_column = "action";
    std::string info_column = "info";

    // Used when has_header is false.
    int course_index = 0;
    int ip_index = 1;
    int time_index = 2;
    int name_index = 3;
    int action_index = 4;
    int info_index = 5;

    /// strptime-style format for the time column; empty means auto-detect
    /// ("YYYY-MM-DD HH:MM[:SS]" or ISO-8601).
    std::string time_format;
};

/// Parses a raw Moodle CSV export into an event log: one trace per distinct
/// name, events grouped by case and sorted by timestamp (stable), course and
/// ip columns dropped. Empty input yields an empty log. Throws ParseError
/// with the line number for malformed rows or unparseable timestamps.
EventLog parse_moodle_csv(std::istream& in, const CsvSchema& schema = {});
EventLog parse_moodle_csv(const std::string& text, const CsvSchema& schema = {});

/// Splits one CSV record honouring double quotes ("" escapes a quote).
std::vector<std::string> split_csv_line(const std::string& line, char delimiter);

/// Quotes a field if it contains the delimiter, a quote or a newline.
std::string csv_escape(const std::string& field, char delimiter);

} // namespace epm
