#include "epm/discovery.hpp"
#include "epm/errors.hpp"
#include "epm/petri.hpp"
#include "epm/replay.hpp"

#include <doctest.h>

using namespace epm;

namespace {

ActivityLog log_of(std::vector<std::pair<ActivityTrace, std::uint64_t>> variants) {
    ActivityLog log;
    for (auto& [trace, count] : variants) log.add(trace, count);
    return log;
}

ActivityLog log_of(std::vector<ActivityTrace> traces) {
    return ActivityLog::from_traces(traces);
}

} // namespace

TEST_CASE("activity log counts variants") {
    ActivityLog log = log_of({{{"a", "b"}, 2}, {{"a"}, 1}});
    CHECK(log.num_traces() == 3);
    CHECK(log.variants.size() == 2);
    CHECK(log.alphabet() == std::set<std::string>{"a", "b"});
    CHECK(!log.empty());
    CHECK(ActivityLog{}.empty());
}

TEST_CASE("dfg counts edges, starts, ends and empty traces") {
    Dfg dfg = build_dfg(log_of({{{"a", "b"}, 2}, {{"a"}, 1}, {{}, 1}}));
    CHECK(dfg.activities == std::set<std::string>{"a", "b"});
    CHECK(dfg.edges.at({"a", "b"}) == 2);
    CHECK(dfg.edges.size() == 1);
    CHECK(dfg.start_acts.at("a") == 3);
    CHECK(dfg.end_acts.at("b") == 2);
    CHECK(dfg.end_acts.at("a") == 1);
    CHECK(dfg.empty_traces == 1);
    CHECK(dfg.has_edge("a", "b"));
    CHECK(!dfg.has_edge("b", "a"));
}

TEST_CASE("xor cut finds disconnected components") {
    auto cut = find_cut(build_dfg(log_of({{{"a", "b"}, 1}, {{"c"}, 1}})));
    REQUIRE(cut);
    CHECK(cut->kind == CutKind::Xor);
    REQUIRE(cut->parts.size() == 2);
    CHECK(cut->parts[0] == std::vector<std::string>{"a", "b"});
    CHECK(cut->parts[1] == std::vector<std::string>{"c"});
}

TEST_CASE("xor cut is maximal") {
    auto cut = find_cut(build_dfg(log_of({{{"a"}, 1}, {{"b"}, 1}, {{"c"}, 1}})));
    REQUIRE(cut);
    CHECK(cut->kind == CutKind::Xor);
    CHECK(cut->parts.size() == 3);
}

TEST_CASE("seq cut orders groups by reachability") {
    auto cut = find_cut(build_dfg(log_of({{{"a", "b", "c"}, 1}, {{"a", "c", "b"}, 1}})));
    REQUIRE(cut);
    CHECK(cut->kind == CutKind::Seq);
    REQUIRE(cut->parts.size() == 2);
    CHECK(cut->parts[0] == std::vector<std::string>{"a"});
    CHECK(cut->parts[1] == std::vector<std::string>{"b", "c"});
}

TEST_CASE("and cut needs starts and ends in every part") {
    auto cut = find_cut(build_dfg(log_of({{{"a", "b"}, 1}, {{"b", "a"}, 1}})));
    REQUIRE(cut);
    CHECK(cut->kind == CutKind::And);
    REQUIRE(cut->parts.size() == 2);
    CHECK(cut->parts[0] == std::vector<std::string>{"a"});
    CHECK(cut->parts[1] == std::vector<std::string>{"b"});
}

TEST_CASE("loop cut separates body from redo") {
    auto cut = find_cut(build_dfg(log_of({{{"a", "b", "a"}, 1}, {{"a"}, 1}})));
    REQUIRE(cut);
    CHECK(cut->kind == CutKind::Loop);
    REQUIRE(cut->parts.size() == 2);
    CHECK(cut->parts[0] == std::vector<std::string>{"a"});
    CHECK(cut->parts[1] == std::vector<std::string>{"b"});
}

TEST_CASE("no cut on one-cycle behavior") {
    // a->b, b->c, c->a with mixed starts/ends defeats all four cuts.
    CHECK(!find_cut(build_dfg(log_of({{{"a", "b"}, 1}, {{"b", "c"}, 1}, {{"c", "a"}, 1}}))));
}

TEST_CASE("xor split routes whole traces by majority part") {
    Cut cut{CutKind::Xor, {{"a", "b"}, {"c"}}};
    ActivityLog log = log_of({{{"a", "b"}, 2}, {{"c"}, 3}, {{"a", "c", "b"}, 1}});
    auto parts = split_log(log, cut);
    REQUIRE(parts.size() == 2);
    // The mixed trace has majority in part 0 and is projected onto it.
    CHECK(parts[0].variants.at({"a", "b"}) == 3);
    CHECK(parts[1].variants.at({"c"}) == 3);
    CHECK(parts[0].num_traces() == 3);
    CHECK(parts[1].num_traces() == 3);
}

TEST_CASE("xor split breaks ties toward the earliest part") {
    Cut cut{CutKind::Xor, {{"a"}, {"b"}}};
    auto parts = split_log(log_of({{{"a", "b"}, 1}}), cut);
    CHECK(parts[0].variants.at({"a"}) == 1);
    CHECK(parts[1].empty());
}

TEST_CASE("seq and par splits project") {
    Cut cut{CutKind::Seq, {{"a"}, {"b", "c"}}};
    auto parts = split_log(log_of({{{"a", "b", "c"}, 1}, {{"a", "c", "b"}, 1}}), cut);
    CHECK(parts[0].variants.at({"a"}) == 2);
    CHECK(parts[1].variants.size() == 2);

    Cut pcut{CutKind::And, {{"a"}, {"b"}}};
    auto pparts = split_log(log_of({{{"b", "a"}, 1}}), pcut);
    CHECK(pparts[0].variants.at({"a"}) == 1);
    CHECK(pparts[1].variants.at({"b"}) == 1);
}

TEST_CASE("loop split segments body and redo excursions") {
    Cut cut{CutKind::Loop, {{"a"}, {"b"}}};
    auto parts = split_log(log_of({{{"a", "b", "a", "b", "a"}, 1}}), cut);
    CHECK(parts[0].variants.at({"a"}) == 3);
    CHECK(parts[1].variants.at({"b"}) == 2);
}

TEST_CASE("discover base cases") {
    CHECK(discover(log_of({{{}, 2}})) == ProcessTree::tau());
    CHECK(discover(log_of({{{"a"}, 3}})) == ProcessTree::leaf("a"));
    CHECK(discover(log_of({{{"a"}, 1}, {{}, 1}})) ==
          parse_tree("xor(tau, a)"));
    CHECK(discover(log_of({{{"a", "a"}, 1}})) == parse_tree("loop(a, tau)"));
}

TEST_CASE("discover worked examples") {
    CHECK(format_tree(discover(log_of({{{"a", "b", "c"}, 1}, {{"a", "c", "b"}, 1}}))) ==
          "\xE2\x86\x92(a, \xE2\x88\xA7(b, c))");
    CHECK(discover(log_of({{{"a", "b"}, 1}, {{"a", "c"}, 1}})) ==
          parse_tree("seq(a, xor(b, c))"));
    CHECK(discover(log_of({{{"a", "b", "a"}, 1}, {{"a"}, 1}})) ==
          parse_tree("loop(a, b)"));
    CHECK(discover(log_of({{{"a", "b", "a", "b", "a"}, 1}})) ==
          parse_tree("loop(a, b)"));
}

TEST_CASE("discover falls through to the flower model") {
    ProcessTree t = discover(log_of({{{"a", "b"}, 1}, {{"b", "c"}, 1}, {{"c", "a"}, 1}}));
    CHECK(t == parse_tree("loop(xor(a, b, c), tau)"));
}

TEST_CASE("discovered models replay their logs perfectly") {
    const std::vector<ActivityLog> logs = {
        log_of({{{"a", "b", "c"}, 1}, {{"a", "c", "b"}, 1}}),
        log_of({{{"a", "b"}, 1}, {{"b", "c"}, 1}, {{"c", "a"}, 1}}),
        log_of({{{"a", "b", "a"}, 2}, {{"a"}, 1}, {{}, 1}}),
        log_of({{{"x"}, 5}, {{"x", "x", "x"}, 2}}),
    };
    for (const auto& log : logs)
        CHECK(fitness(tree_to_net(discover(log)), log) == 1.0);
}

TEST_CASE("discovery is insensitive to trace insertion order") {
    ActivityLog forward = log_of({{{"a", "b"}, 1}, {{"b", "a"}, 1}, {{"c"}, 4}});
    ActivityLog backward = log_of({{{"c"}, 4}, {{"b", "a"}, 1}, {{"a", "b"}, 1}});
    CHECK(discover(forward) == discover(backward));
}

TEST_CASE("dfg noise filter drops relatively rare edges") {
    ActivityLog log = log_of({{{"a", "b"}, 99}, {{"b", "a"}, 1}});
    Dfg filtered = filter_dfg(build_dfg(log), 0.2);
    CHECK(filtered.has_edge("a", "b"));
    CHECK(!filtered.has_edge("b", "a"));
    CHECK(filtered.start_acts.count("b") == 0);

    CHECK(discover_infrequent(log, 0.2) == parse_tree("seq(a, b)"));
}

TEST_CASE("threshold zero equals the basic miner") {
    const std::vector<ActivityLog> logs = {
        log_of({{{"a", "b", "c"}, 1}, {{"a", "c", "b"}, 1}}),
        log_of({{{"a", "b"}, 99}, {{"b", "a"}, 1}}),
        log_of({{{"a", "b", "a"}, 2}, {{"a"}, 1}}),
    };
    for (const auto& log : logs) CHECK(discover_infrequent(log, 0.0) == discover(log));
}

TEST_CASE("noise threshold must lie in the unit interval") {
    ActivityLog log = log_of({{{"a"}, 1}});
    CHECK_THROWS_AS(discover_infrequent(log, -0.1), ConfigError);
    CHECK_THROWS_AS(discover_infrequent(log, 1.5), ConfigError);
}

TEST_CASE("event log overload mines over coded activity names") {
    EventLog log;
    Event e1;
    e1.case_id = "s1";
    e1.action = "quiz attempt";
    e1.code = SrlLabel::Executing;
    e1.timestamp = 1;
    log.traces.push_back({"s1", {e1}});
    CHECK(discover(log) == ProcessTree::leaf("EXECUTING|quiz attempt"));
}
