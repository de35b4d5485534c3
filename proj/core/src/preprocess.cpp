#include "epm/preprocess.hpp"

#include "epm/csv.hpp"
#include "epm/errors.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <istream>
#include <regex>
#include <sstream>
#include <tuple>

namespace epm {

std::set<std::string> CodingScheme::actions() const {
    std::set<std::string> out;
    for (const auto& [action, label] : mapping) out.insert(action);
    return out;
}

const CodingScheme& CodingScheme::default_scheme() {
    static const CodingScheme scheme{{
        {"assign submit", SrlLabel::Executing},
        {"assign view", SrlLabel::Planning},
        {"forum add discussion", SrlLabel::ForumPeerLearning},
        {"forum add post", SrlLabel::ForumPeerLearning},
        {"forum update post", SrlLabel::ForumPeerLearning},
        {"forum view discussion", SrlLabel::ForumPeerLearning},
        {"forum view forum", SrlLabel::ForumPeerLearning},
        {"page view", SrlLabel::Learning},
        {"quiz attempt", SrlLabel::Executing},
        {"quiz close attempt", SrlLabel::Executing},
        {"quiz continue attempt", SrlLabel::Executing},
        {"quiz review", SrlLabel::Review},
        {"quiz view", SrlLabel::Planning},
        {"quiz view summary", SrlLabel::Planning},
        {"resource view", SrlLabel::Learning},
        {"URL view", SrlLabel::Learning},
    }};
    return scheme;
}

namespace {

std::string trim_copy(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

CodingScheme CodingScheme::load_tsv(std::istream& in) {
    CodingScheme scheme;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim_copy(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t tab = t.find('\t');
        if (tab == std::string::npos)
            throw ParseError("coding scheme line " + std::to_string(line_no) +
                             ": expected \"action<TAB>label\"");
        std::string action = trim_copy(t.substr(0, tab));
        std::string label_text = trim_copy(t.substr(tab + 1));
        auto label = srl_label_from_string(label_text);
        if (!label)
            throw ParseError("coding scheme line " + std::to_string(line_no) +
                             ": unknown label \"" + label_text + "\"");
        if (!scheme.mapping.emplace(action, *label).second)
            throw ParseError("coding scheme line " + std::to_string(line_no) +
                             ": duplicate action \"" + action + "\"");
    }
    return scheme;
}

GradeBook GradeBook::load_csv(std::istream& in) {
    GradeBook book;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim_copy(line).empty()) continue;
        auto fields = split_csv_line(line, ',');
        if (fields.size() < 2)
            throw ParseError("grade file line " + std::to_string(line_no) +
                             ": expected \"case_id,grade\"");
        std::string case_id = trim_copy(fields[0]);
        std::string grade_text = trim_copy(fields[1]);
        double grade = 0.0;
        try {
            std::size_t pos = 0;
            grade = std::stod(grade_text, &pos);
            if (pos != grade_text.size()) throw std::invalid_argument(grade_text);
        } catch (const std::exception&) {
            if (line_no == 1) continue; // header row
            throw ParseError("grade file line " + std::to_string(line_no) +
                             ": grade \"" + grade_text + "\" is not a number");
        }
        if (grade < 0.0 || grade > 10.0)
            throw ParseError("grade file line " + std::to_string(line_no) + ": grade " +
                             grade_text + " outside [0,10]");
        if (!book.grades.emplace(case_id, grade).second)
            throw ParseError("grade file line " + std::to_string(line_no) +
                             ": duplicate case \"" + case_id + "\"");
    }
    return book;
}

namespace {

std::vector<std::regex> compile_entries(const std::vector<UnitRule::Entry>& entries) {
    std::vector<std::regex> out;
    out.reserve(entries.size());
    for (const auto& entry : entries) {
        try {
            out.emplace_back(entry.pattern, std::regex::ECMAScript);
        } catch (const std::regex_error& e) {
            throw ConfigError("bad unit pattern \"" + entry.pattern + "\": " + e.what());
        }
    }
    return out;
}

int unit_of_compiled(const std::vector<UnitRule::Entry>& entries,
                     const std::vector<std::regex>& compiled, const std::string& info) {
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (std::regex_search(info, compiled[i])) return entries[i].unit;
    return 0;
}

} // namespace

int UnitRule::unit_of(const std::string& info) const {
    return unit_of_compiled(entries, compile_entries(entries), info);
}

UnitRule UnitRule::load_tsv(std::istream& in) {
    UnitRule rule;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim_copy(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t tab = t.find('\t');
        if (tab == std::string::npos)
            throw ParseError("unit rule line " + std::to_string(line_no) +
                             ": expected \"pattern<TAB>unit\"");
        Entry entry;
        entry.pattern = trim_copy(t.substr(0, tab));
        std::string unit_text = trim_copy(t.substr(tab + 1));
        try {
            std::size_t pos = 0;
            entry.unit = std::stoi(unit_text, &pos);
            if (pos != unit_text.size()) throw std::invalid_argument(unit_text);
        } catch (const std::exception&) {
            throw ParseError("unit rule line " + std::to_string(line_no) + ": unit \"" +
                             unit_text + "\" is not an integer");
        }
        if (entry.unit < 1)
            throw ParseError("unit rule line " + std::to_string(line_no) +
                             ": unit ids start at 1");
        rule.unit_count = std::max(rule.unit_count, entry.unit);
        rule.entries.push_back(std::move(entry));
    }
    compile_entries(rule.entries); // reject bad regexes at load time
    return rule;
}

EventClass event_class(const Event& e) {
    if (!e.code) throw ConfigError("event \"" + e.action + "\" has no code assigned");
    return EventClass{e.action, *e.code, activity_of(e)};
}

namespace {

std::string pseudonym(const std::string& salt, const std::string& name) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    std::string material = salt + name;
    if (EVP_Digest(material.data(), material.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw ConfigError("SHA-256 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(16);
    for (unsigned i = 0; i < 8; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

} // namespace

EventLog anonymize(const EventLog& log, const std::string& salt) {
    std::map<std::string, std::string> renames;
    std::map<std::string, std::string> taken; // pseudonym -> original
    for (const auto& trace : log.traces) {
        std::string alias = pseudonym(salt, trace.case_id);
        auto [it, fresh] = taken.emplace(alias, trace.case_id);
        if (!fresh && it->second != trace.case_id)
            throw ConfigError("pseudonym collision between \"" + it->second + "\" and \"" +
                              trace.case_id + "\"; pick another salt");
        renames[trace.case_id] = alias;
    }
    EventLog out = log;
    for (auto& trace : out.traces) {
        trace.case_id = renames[trace.case_id];
        for (auto& e : trace.events) e.case_id = trace.case_id;
    }
    return out;
}

EventLog dedup(const EventLog& log) {
    EventLog out;
    out.attributes = log.attributes;
    for (const auto& trace : log.traces) {
        Trace kept;
        kept.case_id = trace.case_id;
        std::set<std::tuple<std::string, std::int64_t, std::string>> seen;
        for (const auto& e : trace.events)
            if (seen.emplace(e.action, e.timestamp, e.info).second) kept.events.push_back(e);
        out.traces.push_back(std::move(kept));
    }
    return out;
}

EventLog filter_cases(const EventLog& log, const std::set<std::string>& excluded) {
    EventLog out;
    out.attributes = log.attributes;
    for (const auto& trace : log.traces)
        if (!excluded.count(trace.case_id)) out.traces.push_back(trace);
    return out;
}

EventLog filter_actions(const EventLog& log, const std::set<std::string>& whitelist) {
    EventLog out;
    out.attributes = log.attributes;
    for (const auto& trace : log.traces) {
        Trace kept;
        kept.case_id = trace.case_id;
        for (const auto& e : trace.events)
            if (whitelist.count(e.action)) kept.events.push_back(e);
        if (!kept.events.empty()) out.traces.push_back(std::move(kept));
    }
    return out;
}

CodingResult apply_coding(const EventLog& log, const CodingScheme& scheme,
                          UnknownActionPolicy policy) {
    CodingResult result;
    result.log.attributes = log.attributes;
    for (const auto& trace : log.traces) {
        Trace kept;
        kept.case_id = trace.case_id;
        for (const auto& e : trace.events) {
            auto it = scheme.mapping.find(e.action);
            if (it == scheme.mapping.end()) {
                if (policy == UnknownActionPolicy::Error)
                    throw ConfigError("no code for action \"" + e.action + "\" (case \"" +
                                      trace.case_id + "\")");
                ++result.dropped_events;
                continue;
            }
            Event coded = e;
            coded.code = it->second;
            kept.events.push_back(std::move(coded));
        }
        if (!kept.events.empty()) result.log.traces.push_back(std::move(kept));
    }
    return result;
}

GradeSplit split_by_grade(const EventLog& log, const GradeBook& grades, double threshold) {
    std::vector<std::string> missing;
    for (const auto& trace : log.traces)
        if (!grades.grades.count(trace.case_id)) missing.push_back(trace.case_id);
    if (!missing.empty()) {
        std::sort(missing.begin(), missing.end());
        std::string joined;
        for (const auto& id : missing) {
            if (!joined.empty()) joined += ", ";
            joined += id;
        }
        throw ConfigError("no grade for case(s): " + joined);
    }

    GradeSplit split;
    split.pass.attributes = log.attributes;
    split.fail.attributes = log.attributes;
    split.pass.attributes["cohort"] = "pass";
    split.fail.attributes["cohort"] = "fail";
    for (const auto& trace : log.traces) {
        double grade = grades.grades.at(trace.case_id);
        (grade >= threshold ? split.pass : split.fail).traces.push_back(trace);
    }
    return split;
}

UnitSplit split_by_unit(const EventLog& log, const UnitRule& rule) {
    const auto compiled = compile_entries(rule.entries);
    UnitSplit split;
    split.unassigned.attributes = log.attributes;
    split.unassigned.attributes["unit"] = "unassigned";

    std::map<int, std::vector<Trace>> buckets;
    for (const auto& trace : log.traces) {
        std::map<int, Trace> parts;
        for (const auto& e : trace.events) {
            int unit = unit_of_compiled(rule.entries, compiled, e.info);
            auto [it, fresh] = parts.try_emplace(unit);
            if (fresh) it->second.case_id = trace.case_id;
            it->second.events.push_back(e);
        }
        for (auto& [unit, part] : parts) buckets[unit].push_back(std::move(part));
    }
    for (auto& [unit, traces] : buckets) {
        if (unit == 0) {
            split.unassigned.traces = std::move(traces);
            continue;
        }
        EventLog unit_log;
        unit_log.attributes = log.attributes;
        unit_log.attributes["unit"] = std::to_string(unit);
        unit_log.traces = std::move(traces);
        split.units.emplace(unit, std::move(unit_log));
    }
    return split;
}

} // namespace epm
