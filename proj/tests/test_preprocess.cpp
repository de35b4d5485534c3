#include "epm/errors.hpp"
#include "epm/preprocess.hpp"

#include <doctest.h>

#include <algorithm>
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

EventLog two_student_log() {
    EventLog log;
    log.traces.push_back({"maria", {ev("maria", "quiz attempt", 10, "unit 1"),
                                    ev("maria", "page view", 20, "unit 2")}});
    log.traces.push_back({"pablo", {ev("pablo", "URL view", 30, "unit 1")}});
    return log;
}

} // namespace

TEST_CASE("default coding scheme covers exactly sixteen actions") {
    const auto& scheme = CodingScheme::default_scheme();
    CHECK(scheme.mapping.size() == 16);
    CHECK(scheme.mapping.at("quiz attempt") == SrlLabel::Executing);
    CHECK(scheme.mapping.at("URL view") == SrlLabel::Learning);
    CHECK(scheme.mapping.at("forum add discussion") == SrlLabel::ForumPeerLearning);
    CHECK(scheme.mapping.at("quiz view summary") == SrlLabel::Planning);
    CHECK(scheme.actions().size() == 16);
}

TEST_CASE("coding scheme tsv loading") {
    std::istringstream in(
        "# comment\n"
        "quiz attempt\tEXECUTING\n"
        "\n"
        "page view\tLEARNING\n");
    auto scheme = CodingScheme::load_tsv(in);
    CHECK(scheme.mapping.size() == 2);
    CHECK(scheme.mapping.at("page view") == SrlLabel::Learning);

    std::istringstream dup("a\tLEARNING\na\tREVIEW\n");
    CHECK_THROWS_AS(CodingScheme::load_tsv(dup), ParseError);
    std::istringstream bad_label("a\tSLEEPING\n");
    CHECK_THROWS_AS(CodingScheme::load_tsv(bad_label), ParseError);
    std::istringstream no_tab("just one field\n");
    CHECK_THROWS_AS(CodingScheme::load_tsv(no_tab), ParseError);
}

TEST_CASE("grade book csv loading") {
    std::istringstream in("name,grade\nmaria,7.5\npablo,4.9\n");
    auto book = GradeBook::load_csv(in);
    CHECK(book.grades.size() == 2);
    CHECK(book.grades.at("maria") == doctest::Approx(7.5));

    std::istringstream headerless("maria,10\npablo,0\n");
    auto edges = GradeBook::load_csv(headerless);
    CHECK(edges.grades.at("maria") == 10.0);
    CHECK(edges.grades.at("pablo") == 0.0);

    std::istringstream out_of_range("maria,10.1\n");
    CHECK_THROWS_WITH_AS(GradeBook::load_csv(out_of_range),
                         doctest::Contains("outside [0,10]"), ParseError);
    std::istringstream not_a_number("h1\nmaria,good\n");
    CHECK_THROWS_AS(GradeBook::load_csv(not_a_number), ParseError);
    std::istringstream dup("maria,5\nmaria,6\n");
    CHECK_THROWS_WITH_AS(GradeBook::load_csv(dup), doctest::Contains("duplicate"),
                         ParseError);
}

TEST_CASE("unit rules match in order with search semantics") {
    std::istringstream in(
        "# patterns are regexes, plain text means substring\n"
        "unit 0[12]\t1\n"
        "unit 3\t3\n");
    auto rule = UnitRule::load_tsv(in);
    CHECK(rule.unit_count == 3);
    CHECK(rule.unit_of("quiz of unit 01") == 1);
    CHECK(rule.unit_of("unit 02") == 1);
    CHECK(rule.unit_of("unit 3 intro") == 3);
    CHECK(rule.unit_of("general area") == 0);

    std::istringstream bad_unit("pattern\tzero\n");
    CHECK_THROWS_AS(UnitRule::load_tsv(bad_unit), ParseError);
    std::istringstream negative("pattern\t0\n");
    CHECK_THROWS_AS(UnitRule::load_tsv(negative), ParseError);
    std::istringstream bad_regex("un[closed\t1\n");
    CHECK_THROWS_AS(UnitRule::load_tsv(bad_regex), ConfigError);
}

TEST_CASE("event_class requires a code") {
    Event e = ev("s", "quiz attempt", 0);
    CHECK_THROWS_AS(event_class(e), ConfigError);
    e.code = SrlLabel::Executing;
    auto cls = event_class(e);
    CHECK(cls.name == "EXECUTING|quiz attempt");
    CHECK(cls.action == "quiz attempt");
    CHECK(cls.code == SrlLabel::Executing);
}

TEST_CASE("anonymize assigns stable distinct pseudonyms") {
    EventLog log = two_student_log();
    EventLog anon1 = anonymize(log, "salt");
    EventLog anon2 = anonymize(log, "salt");
    CHECK(anon1 == anon2);

    CHECK(anon1.traces[0].case_id != "maria");
    CHECK(anon1.traces[0].case_id.size() == 16);
    CHECK(anon1.traces[0].case_id != anon1.traces[1].case_id);
    // Events follow their trace's new identity.
    CHECK(anon1.traces[0].events[0].case_id == anon1.traces[0].case_id);
    // Payload untouched.
    CHECK(anon1.traces[0].events[0].action == "quiz attempt");

    EventLog other_salt = anonymize(log, "pepper");
    CHECK(other_salt.traces[0].case_id != anon1.traces[0].case_id);
}

TEST_CASE("dedup keeps the first of identical rows") {
    EventLog log;
    log.traces.push_back({"s", {ev("s", "a", 10, "u"), ev("s", "a", 10, "u"),
                                ev("s", "a", 10, "other"), ev("s", "a", 11, "u"),
                                ev("s", "b", 10, "u")}});
    EventLog out = dedup(log);
    CHECK(out.traces[0].events.size() == 4);
    CHECK(out.traces[0].events[0].action == "a");
    CHECK(out.traces[0].events[1].info == "other");
}

TEST_CASE("filter_cases drops whole traces") {
    EventLog out = filter_cases(two_student_log(), {"pablo", "admin"});
    REQUIRE(out.traces.size() == 1);
    CHECK(out.traces[0].case_id == "maria");
}

TEST_CASE("filter_actions drops events and emptied traces") {
    EventLog out = filter_actions(two_student_log(), {"quiz attempt", "page view"});
    REQUIRE(out.traces.size() == 1);
    CHECK(out.traces[0].case_id == "maria");
    CHECK(out.traces[0].events.size() == 2);
}

TEST_CASE("apply_coding assigns labels and handles unknowns") {
    EventLog log = two_student_log();
    log.traces[0].events.push_back(ev("maria", "calendar view", 40));

    CodingResult coded = apply_coding(log, CodingScheme::default_scheme());
    CHECK(coded.dropped_events == 1);
    CHECK(coded.log.traces[0].events.size() == 2);
    CHECK(coded.log.traces[0].events[0].code == SrlLabel::Executing);
    CHECK(coded.log.traces[1].events[0].code == SrlLabel::Learning);

    CHECK_THROWS_WITH_AS(
        apply_coding(log, CodingScheme::default_scheme(), UnknownActionPolicy::Error),
        doctest::Contains("calendar view"), ConfigError);
}

TEST_CASE("apply_coding drops traces emptied by unknown actions") {
    EventLog log;
    log.traces.push_back({"ghost", {ev("ghost", "calendar view", 1)}});
    log.traces.push_back({"maria", {ev("maria", "page view", 2)}});
    CodingResult coded = apply_coding(log, CodingScheme::default_scheme());
    REQUIRE(coded.log.traces.size() == 1);
    CHECK(coded.log.traces[0].case_id == "maria");
}

TEST_CASE("split_by_grade routes cohorts at the boundary") {
    GradeBook book;
    book.grades = {{"maria", 5.0}, {"pablo", 4.9}};
    GradeSplit split = split_by_grade(two_student_log(), book);
    REQUIRE(split.pass.traces.size() == 1);
    REQUIRE(split.fail.traces.size() == 1);
    CHECK(split.pass.traces[0].case_id == "maria");
    CHECK(split.fail.traces[0].case_id == "pablo");
    CHECK(split.pass.attributes.at("cohort") == "pass");
    CHECK(split.fail.attributes.at("cohort") == "fail");
}

TEST_CASE("split_by_grade demands complete grade coverage") {
    GradeBook book;
    book.grades = {{"maria", 6.0}};
    CHECK_THROWS_WITH_AS(split_by_grade(two_student_log(), book),
                         doctest::Contains("pablo"), ConfigError);
}

TEST_CASE("split_by_unit routes events by info and collects the rest") {
    std::istringstream in("unit 1\t1\nunit 2\t2\n");
    auto rule = UnitRule::load_tsv(in);

    EventLog log = two_student_log();
    log.traces[1].events.push_back(ev("pablo", "forum view forum", 40, "general"));

    UnitSplit split = split_by_unit(log, rule);
    REQUIRE(split.units.count(1) == 1);
    REQUIRE(split.units.count(2) == 1);
    CHECK(split.units.at(1).traces.size() == 2);
    CHECK(split.units.at(2).traces.size() == 1);
    CHECK(split.units.at(2).traces[0].case_id == "maria");
    REQUIRE(split.unassigned.traces.size() == 1);
    CHECK(split.unassigned.traces[0].events[0].info == "general");
    CHECK(split.units.at(1).attributes.at("unit") == "1");
    CHECK(split.unassigned.attributes.at("unit") == "unassigned");
}
