#include "epm/csv.hpp"
#include "epm/errors.hpp"
#include "epm/event_log.hpp"
#include "epm/xes.hpp"

#include <doctest.h>

#include <sstream>

using namespace epm;

namespace {

Event ev(std::string cid, std::string action, std::int64_t ts, std::string info = {}) {
    Event e;
    e.case_id = std::move(cid);
    e.action = std::move(action);
    e.timestamp = ts;
    e.info = std::move(info);
    return e;
}

} // namespace

TEST_CASE("iso8601 formatting") {
    CHECK(format_iso8601(0) == "1970-01-01T00:00:00Z");
    CHECK(format_iso8601(1362355200) == "2013-03-04T00:00:00Z");
    CHECK(format_iso8601(-1) == "1969-12-31T23:59:59Z");
}

TEST_CASE("timestamp parsing accepts both export shapes") {
    CHECK(parse_timestamp("2013-03-04T00:00:00Z") == 1362355200);
    CHECK(parse_timestamp("2013-03-04 00:00:00") == 1362355200);
    CHECK(parse_timestamp("2013-03-04 00:00") == 1362355200);
    CHECK(parse_timestamp("2013-03-04") == 1362355200);
    CHECK(parse_timestamp("2013-03-04T01:00:00+01:00") == 1362355200);
    CHECK(parse_timestamp("2013-03-03T23:30:00-00:30") == 1362355200);
    CHECK(parse_timestamp("2013-03-04T00:00:00.750Z") == 1362355200);
    CHECK(parse_timestamp("  2013-03-04 00:00:00\r") == 1362355200);

    for (std::int64_t ts : {std::int64_t{0}, std::int64_t{1362355200},
                            std::int64_t{4102444799}, std::int64_t{-86400}})
        CHECK(parse_timestamp(format_iso8601(ts)) == ts);

    CHECK_THROWS_AS(parse_timestamp("yesterday"), ParseError);
    CHECK_THROWS_AS(parse_timestamp("2013-13-04 00:00:00"), ParseError);
    CHECK_THROWS_AS(parse_timestamp("2013-03-04 25:00:00"), ParseError);
    CHECK_THROWS_AS(parse_timestamp("2013-03-04T00:00:00X"), ParseError);
    CHECK_THROWS_AS(parse_timestamp(""), ParseError);
}

TEST_CASE("srl labels round trip through their names") {
    for (SrlLabel label : {SrlLabel::Planning, SrlLabel::Learning, SrlLabel::Executing,
                           SrlLabel::Review, SrlLabel::ForumPeerLearning})
        CHECK(srl_label_from_string(to_string(label)) == label);
    CHECK(!srl_label_from_string("SLEEPING"));
}

TEST_CASE("activity identity is the coded pair once a code exists") {
    Event e = ev("s1", "quiz attempt", 0);
    CHECK(activity_of(e) == "quiz attempt");
    e.code = SrlLabel::Executing;
    CHECK(activity_of(e) == "EXECUTING|quiz attempt");
}

TEST_CASE("sort_and_validate orders events and rejects duplicate cases") {
    EventLog log;
    log.traces.push_back({"s1", {ev("s1", "b", 20), ev("s1", "a", 10),
                                 ev("s1", "c", 20), ev("s1", "d", 5)}});
    sort_and_validate(log);
    CHECK(log.traces[0].events[0].action == "d");
    CHECK(log.traces[0].events[1].action == "a");
    // Stable: equal timestamps keep their file order.
    CHECK(log.traces[0].events[2].action == "b");
    CHECK(log.traces[0].events[3].action == "c");

    log.traces.push_back({"s1", {}});
    CHECK_THROWS_AS(sort_and_validate(log), ParseError);
}

TEST_CASE("log stats count cases and events") {
    EventLog log;
    log.traces.push_back({"s1", {ev("s1", "a", 1), ev("s1", "b", 2)}});
    log.traces.push_back({"s2", {ev("s2", "a", 3)}});
    CHECK(log_stats(log) == LogStats{2, 3});
    CHECK(log.num_events() == 3);
}

TEST_CASE("csv line splitting honours quotes") {
    CHECK(split_csv_line("a,b,c", ',') == std::vector<std::string>{"a", "b", "c"});
    CHECK(split_csv_line("a,\"b,c\",d", ',') == std::vector<std::string>{"a", "b,c", "d"});
    CHECK(split_csv_line("\"a\"\"b\",c", ',') == std::vector<std::string>{"a\"b", "c"});
    CHECK(split_csv_line("a,,c", ',') == std::vector<std::string>{"a", "", "c"});
    CHECK(split_csv_line("", ',') == std::vector<std::string>{""});
    CHECK(split_csv_line("a;b", ';') == std::vector<std::string>{"a", "b"});
}

TEST_CASE("csv_escape round trips through split_csv_line") {
    for (const std::string field : {"plain", "with,comma", "with\"quote", "a\nb", ""}) {
        auto line = csv_escape(field, ',') + "," + csv_escape("x", ',');
        auto fields = split_csv_line(line, ',');
        REQUIRE(fields.size() == 2);
        CHECK(fields[0] == field);
        CHECK(fields[1] == "x");
    }
}

TEST_CASE("moodle csv parsing groups by student and sorts by time") {
    const std::string csv =
        "course,ip,time,name,action,info\n"
        "c1,1.2.3.4,2013-03-04 10:00:00,maria,quiz view,unit 1\n"
        "c1,1.2.3.4,2013-03-04 09:00:00,pablo,page view,unit 1\n"
        "c1,1.2.3.4,2013-03-04 09:30:00,maria,resource view,unit 1\n";
    EventLog log = parse_moodle_csv(csv);
    REQUIRE(log.traces.size() == 2);
    // Traces appear in first-appearance order.
    CHECK(log.traces[0].case_id == "maria");
    CHECK(log.traces[1].case_id == "pablo");
    REQUIRE(log.traces[0].events.size() == 2);
    CHECK(log.traces[0].events[0].action == "resource view");
    CHECK(log.traces[0].events[1].action == "quiz view");
    CHECK(log.traces[0].events[0].info == "unit 1");
}

TEST_CASE("moodle csv header columns may be reordered") {
    CsvSchema schema;
    const std::string csv =
        "name,action,info,time,course,ip\n"
        "maria,quiz view,unit 1,2013-03-04 10:00:00,c1,::1\n";
    EventLog log = parse_moodle_csv(csv, schema);
    REQUIRE(log.traces.size() == 1);
    CHECK(log.traces[0].events[0].action == "quiz view");
    CHECK(log.traces[0].events[0].timestamp == parse_timestamp("2013-03-04 10:00:00"));
}

TEST_CASE("moodle csv without header uses column indices") {
    CsvSchema schema;
    schema.has_header = false;
    schema.delimiter = ';';
    const std::string csv = "c1;::1;2013-03-04 10:00:00;maria;quiz view;unit 1\n";
    EventLog log = parse_moodle_csv(csv, schema);
    REQUIRE(log.traces.size() == 1);
    CHECK(log.traces[0].events[0].action == "quiz view");
}

TEST_CASE("moodle csv errors carry line numbers") {
    CHECK(parse_moodle_csv(std::string{}).traces.empty());
    CHECK(parse_moodle_csv(std::string{"course,ip,time,name,action,info\n"}).traces.empty());

    CHECK_THROWS_WITH_AS(
        parse_moodle_csv(std::string{"course,ip,when,name,action,info\nx\n"}),
        doctest::Contains("missing required column"), ParseError);
    CHECK_THROWS_WITH_AS(
        parse_moodle_csv(std::string{"course,ip,time,name,action,info\nc1,::1\n"}),
        doctest::Contains("line 2"), ParseError);
    CHECK_THROWS_WITH_AS(
        parse_moodle_csv(
            std::string{"course,ip,time,name,action,info\nc1,::1,soon,maria,quiz view,u\n"}),
        doctest::Contains("line 2"), ParseError);
}

TEST_CASE("xes round trip preserves the log exactly") {
    EventLog log;
    log.attributes["source"] = "unit <tests> & \"quotes\"";
    Trace t1{"maria", {}};
    Event e1 = ev("maria", "quiz attempt", 1362355200, "unit 1");
    e1.code = SrlLabel::Executing;
    Event e2 = ev("maria", "page view", 1362355260, "says \"hi\" & <bye>");
    t1.events = {e1, e2};
    log.traces.push_back(t1);
    log.traces.push_back({"pablo", {ev("pablo", "URL view", 1362355300)}});

    const std::string xml = write_xes(log);
    EventLog back = read_xes(xml);
    CHECK(back == log);
    // Re-serialization is byte-stable.
    CHECK(write_xes(back) == xml);
}

TEST_CASE("xes writer emits coded activity names") {
    EventLog log;
    Event e = ev("s1", "quiz attempt", 0);
    e.code = SrlLabel::Executing;
    log.traces.push_back({"s1", {e}});
    const std::string xml = write_xes(log);
    CHECK(xml.find("value=\"EXECUTING|quiz attempt\"") != std::string::npos);
    CHECK(xml.find("<date key=\"time:timestamp\" value=\"1970-01-01T00:00:00Z\"/>") !=
          std::string::npos);
}

TEST_CASE("foreign xes falls back to concept:name") {
    const std::string xml =
        "<?xml version=\"1.0\"?>\n"
        "<log>\n"
        "  <trace>\n"
        "    <string key=\"concept:name\" value=\"case1\"/>\n"
        "    <event>\n"
        "      <string key=\"concept:name\" value=\"submit\"/>\n"
        "      <date key=\"time:timestamp\" value=\"2013-03-04T00:00:00Z\"/>\n"
        "    </event>\n"
        "  </trace>\n"
        "</log>\n";
    EventLog log = read_xes(xml);
    REQUIRE(log.traces.size() == 1);
    CHECK(log.traces[0].case_id == "case1");
    CHECK(log.traces[0].events[0].action == "submit");
    CHECK(log.traces[0].events[0].timestamp == 1362355200);
}

TEST_CASE("xes reader rejects broken documents") {
    CHECK_THROWS_AS(read_xes(std::string{"<log><trace>"}), ParseError);
    CHECK_THROWS_AS(read_xes(std::string{"<notalog/>"}), ParseError);
    CHECK_THROWS_WITH_AS(
        read_xes(std::string{"<log><trace><event/></trace></log>"}),
        doctest::Contains("trace #1"), ParseError);
    CHECK_THROWS_WITH_AS(
        read_xes(std::string{"<log><trace>"
                             "<string key=\"concept:name\" value=\"c\"/>"
                             "<event/></trace></log>"}),
        doctest::Contains("\"c\""), ParseError);
    CHECK_THROWS_WITH_AS(
        read_xes(std::string{"<log><trace>"
                             "<string key=\"concept:name\" value=\"c\"/>"
                             "<event><string key=\"action\" value=\"a\"/>"
                             "<string key=\"code\" value=\"NAPPING\"/>"
                             "</event></trace></log>"}),
        doctest::Contains("unknown code"), ParseError);
}

TEST_CASE("empty log round trips") {
    EventLog log;
    log.attributes["note"] = "empty";
    CHECK(read_xes(write_xes(log)) == log);
}
