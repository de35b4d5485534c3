#include "epm/event_log.hpp"

#include "epm/errors.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <set>

namespace epm {

std::string to_string(SrlLabel label) {
    switch (label) {
    case SrlLabel::Planning: return "PLANNING";
    case SrlLabel::Learning: return "LEARNING";
    case SrlLabel::Executing: return "EXECUTING";
    case SrlLabel::Review: return "REVIEW";
    case SrlLabel::ForumPeerLearning: return "FORUM PEER LEARNING";
    }
    return "?";
}

std::optional<SrlLabel> srl_label_from_string(std::string_view text) {
    if (text == "PLANNING") return SrlLabel::Planning;
    if (text == "LEARNING") return SrlLabel::Learning;
    if (text == "EXECUTING") return SrlLabel::Executing;
    if (text == "REVIEW") return SrlLabel::Review;
    if (text == "FORUM PEER LEARNING") return SrlLabel::ForumPeerLearning;
    return std::nullopt;
}

std::size_t EventLog::num_events() const {
    std::size_t n = 0;
    for (const auto& t : traces) n += t.events.size();
    return n;
}

LogStats log_stats(const EventLog& log) {
    return {log.traces.size(), log.num_events()};
}

std::string activity_of(const Event& e) {
    if (e.code) return to_string(*e.code) + "|" + e.action;
    return e.action;
}

void sort_and_validate(EventLog& log) {
    std::set<std::string> seen;
    for (auto& trace : log.traces) {
        if (!seen.insert(trace.case_id).second)
            throw ParseError("duplicate case_id across traces: " + trace.case_id);
        std::stable_sort(trace.events.begin(), trace.events.end(),
                         [](const Event& a, const Event& b) { return a.timestamp < b.timestamp; });
        for (auto& e : trace.events) e.case_id = trace.case_id;
    }
}

namespace {

constexpr std::int64_t kSecsPerDay = 86400;

// Howard Hinnant's civil-from-days round trips; std::chrono's calendar types
// wrap the same arithmetic.
std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    using namespace std::chrono;
    const sys_days sd = year{y} / month{m} / day{d};
    return sd.time_since_epoch().count();
}

void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
    using namespace std::chrono;
    const year_month_day ymd{sys_days{days{z}}};
    y = static_cast<int>(ymd.year());
    m = static_cast<unsigned>(ymd.month());
    d = static_cast<unsigned>(ymd.day());
}

bool parse_int(std::string_view s, int& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

} // namespace

std::string format_iso8601(std::int64_t epoch_seconds) {
    std::int64_t days = epoch_seconds / kSecsPerDay;
    std::int64_t rem = epoch_seconds % kSecsPerDay;
    if (rem < 0) {
        rem += kSecsPerDay;
        days -= 1;
    }
    int y;
    unsigned m, d;
    civil_from_days(days, y, m, d);
    const int hh = static_cast<int>(rem / 3600);
    const int mm = static_cast<int>((rem / 60) % 60);
    const int ss = static_cast<int>(rem % 60);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", y, m, d, hh, mm, ss);
    return buf;
}

std::int64_t parse_timestamp(std::string_view text) {
    // Trim surrounding whitespace.
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
        text.remove_suffix(1);

    const std::string original(text);
    auto fail = [&]() -> std::int64_t {
        throw ParseError("unparseable timestamp: \"" + original + "\"");
    };

    // Date part: YYYY-MM-DD
    if (text.size() < 10 || text[4] != '-' || text[7] != '-') fail();
    int year, month, day;
    if (!parse_int(text.substr(0, 4), year) || !parse_int(text.substr(5, 2), month) ||
        !parse_int(text.substr(8, 2), day))
        fail();
    if (month < 1 || month > 12 || day < 1 || day > 31) fail();
    text.remove_prefix(10);

    int hh = 0, mm = 0, ss = 0;
    std::int64_t offset = 0;
    if (!text.empty()) {
        if (text.front() != ' ' && text.front() != 'T') fail();
        text.remove_prefix(1);
        if (text.size() < 5 || text[2] != ':') fail();
        if (!parse_int(text.substr(0, 2), hh) || !parse_int(text.substr(3, 2), mm)) fail();
        text.remove_prefix(5);
        if (!text.empty() && text.front() == ':') {
            if (text.size() < 3 || !parse_int(text.substr(1, 2), ss)) fail();
            text.remove_prefix(3);
        }
        // Fractional seconds: parsed and dropped, the model is second-resolution.
        if (!text.empty() && (text.front() == '.' || text.front() == ',')) {
            text.remove_prefix(1);
            std::size_t digits = 0;
            while (digits < text.size() && text[digits] >= '0' && text[digits] <= '9') ++digits;
            if (digits == 0) fail();
            text.remove_prefix(digits);
        }
        if (!text.empty()) {
            if (text == "Z" || text == "z") {
                text = {};
            } else if (text.front() == '+' || text.front() == '-') {
                const int sign = text.front() == '-' ? -1 : 1;
                text.remove_prefix(1);
                int oh = 0, om = 0;
                if (text.size() == 5 && text[2] == ':') {
                    if (!parse_int(text.substr(0, 2), oh) || !parse_int(text.substr(3, 2), om)) fail();
                } else if (text.size() == 4) {
                    if (!parse_int(text.substr(0, 2), oh) || !parse_int(text.substr(2, 2), om)) fail();
                } else if (text.size() == 2) {
                    if (!parse_int(text.substr(0, 2), oh)) fail();
                } else {
                    fail();
                }
                offset = sign * (oh * 3600LL + om * 60LL);
                text = {};
            } else {
                fail();
            }
        }
        if (hh > 23 || mm > 59 || ss > 60) fail();
    }

    return days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day)) *
               kSecsPerDay +
           hh * 3600LL + mm * 60LL + ss - offset;
}

} // namespace epm
