#include "epm/csv.hpp"

#include "epm/errors.hpp"

#include <algorithm>
#include <ctime>
#include <iomanip>
#include <istream>
#include <map>
#include <sstream>

namespace epm {

std::vector<std::string> split_csv_line(const std::string& line, char delimiter) {
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"' && field.empty()) {
            in_quotes = true;
        } else if (c == delimiter) {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field += c;
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

std::string csv_escape(const std::string& field, char delimiter) {
    const bool needs_quotes = field.find(delimiter) != std::string::npos ||
                              field.find('"') != std::string::npos ||
                              field.find('\n') != std::string::npos;
    if (!needs_quotes) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

namespace {

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

std::int64_t parse_with_format(const std::string& value, const std::string& format,
                               std::size_t line_no) {
    std::tm tm = {};
    std::istringstream ss(value);
    ss >> std::get_time(&tm, format.c_str());
    if (ss.fail())
        throw ParseError("line " + std::to_string(line_no) + ": unparseable timestamp \"" +
                         value + "\" for format \"" + format + "\"");
    // Interpret as UTC.
    std::string iso(32, '\0');
    const int n = std::snprintf(iso.data(), iso.size(), "%04d-%02d-%02dT%02d:%02d:%02dZ",
                                tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                                tm.tm_min, tm.tm_sec);
    iso.resize(static_cast<std::size_t>(n));
    return parse_timestamp(iso);
}

} // namespace

EventLog parse_moodle_csv(std::istream& in, const CsvSchema& schema) {
    EventLog log;
    std::string line;
    std::size_t line_no = 0;

    int time_idx = schema.time_index;
    int name_idx = schema.name_index;
    int action_idx = schema.action_index;
    int info_idx = schema.info_index;
    bool have_indices = !schema.has_header;

    // case_id -> trace slot, in order of first appearance
    std::map<std::string, std::size_t> slot;

    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;

        auto fields = split_csv_line(line, schema.delimiter);

        if (!have_indices) {
            // Header row: resolve column names to indices.
            auto find_col = [&](const std::string& name, bool required) {
                auto it = std::find(fields.begin(), fields.end(), name);
                if (it == fields.end()) {
                    if (required)
                        throw ParseError("header is missing required column \"" + name + "\"");
                    return -1;
                }
                return static_cast<int>(it - fields.begin());
            };
            time_idx = find_col(schema.time_column, true);
            name_idx = find_col(schema.name_column, true);
            action_idx = find_col(schema.action_column, true);
            info_idx = find_col(schema.info_column, false);
            have_indices = true;
            continue;
        }

        const int max_idx = std::max({time_idx, name_idx, action_idx, info_idx});
        if (static_cast<int>(fields.size()) <= max_idx)
            throw ParseError("line " + std::to_string(line_no) + ": expected at least " +
                             std::to_string(max_idx + 1) + " fields, got " +
                             std::to_string(fields.size()));

        Event e;
        e.case_id = fields[static_cast<std::size_t>(name_idx)];
        e.action = fields[static_cast<std::size_t>(action_idx)];
        if (info_idx >= 0) e.info = fields[static_cast<std::size_t>(info_idx)];
        const std::string& time_str = fields[static_cast<std::size_t>(time_idx)];
        try {
            e.timestamp = schema.time_format.empty()
                              ? parse_timestamp(time_str)
                              : parse_with_format(time_str, schema.time_format, line_no);
        } catch (const ParseError&) {
            throw ParseError("line " + std::to_string(line_no) + ": unparseable timestamp \"" +
                             time_str + "\"");
        }
        if (e.case_id.empty())
            throw ParseError("line " + std::to_string(line_no) + ": empty case name");
        if (e.action.empty())
            throw ParseError("line " + std::to_string(line_no) + ": empty action");

        auto [it, inserted] = slot.try_emplace(e.case_id, log.traces.size());
        if (inserted) log.traces.push_back(Trace{e.case_id, {}});
        log.traces[it->second].events.push_back(std::move(e));
    }

    sort_and_validate(log);
    return log;
}

EventLog parse_moodle_csv(const std::string& text, const CsvSchema& schema) {
    std::istringstream in(text);
    return parse_moodle_csv(in, schema);
}

} // namespace epm
