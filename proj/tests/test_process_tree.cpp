#include "epm/errors.hpp"
#include "epm/process_tree.hpp"

#include <doctest.h>

using namespace epm;

namespace {

ProcessTree leaf(const char* name) { return ProcessTree::leaf(name); }

ProcessTree seq(std::vector<ProcessTree> cs) { return ProcessTree::make(TreeOp::Seq, std::move(cs)); }
ProcessTree alt(std::vector<ProcessTree> cs) { return ProcessTree::make(TreeOp::Xor, std::move(cs)); }
ProcessTree par(std::vector<ProcessTree> cs) { return ProcessTree::make(TreeOp::And, std::move(cs)); }
ProcessTree loop(std::vector<ProcessTree> cs) { return ProcessTree::make(TreeOp::Loop, std::move(cs)); }

} // namespace

TEST_CASE("leaf_count and activities skip silent steps") {
    ProcessTree t = seq({leaf("a"), alt({leaf("b"), ProcessTree::tau()}), leaf("a")});
    CHECK(t.leaf_count() == 3);
    CHECK(t.activities() == std::set<std::string>{"a", "b"});
}

TEST_CASE("language of the basic operators") {
    CHECK(language(leaf("a"), 8, 2) == TraceSet{{"a"}});
    CHECK(language(ProcessTree::tau(), 8, 2) == TraceSet{{}});
    CHECK(language(seq({leaf("a"), leaf("b")}), 8, 2) == TraceSet{{"a", "b"}});
    CHECK(language(alt({leaf("a"), leaf("b")}), 8, 2) == TraceSet{{"a"}, {"b"}});
    CHECK(language(alt({leaf("a"), ProcessTree::tau()}), 8, 2) == TraceSet{{}, {"a"}});
    CHECK(language(par({leaf("a"), leaf("b")}), 8, 2) ==
          TraceSet{{"a", "b"}, {"b", "a"}});
    CHECK(language(par({leaf("a"), leaf("b"), leaf("c")}), 8, 2).size() == 6);
}

TEST_CASE("loop language unrolls body-first") {
    ProcessTree t = loop({leaf("a"), leaf("b")});
    CHECK(language(t, 8, 2) ==
          TraceSet{{"a"}, {"a", "b", "a"}, {"a", "b", "a", "b", "a"}});
    CHECK(language(t, 2, 2) == TraceSet{{"a"}});
    // Two redo options.
    ProcessTree t2 = loop({leaf("a"), leaf("b"), leaf("c")});
    CHECK(language(t2, 3, 1) == TraceSet{{"a"}, {"a", "b", "a"}, {"a", "c", "a"}});
}

TEST_CASE("max_len bounds interleavings globally") {
    ProcessTree t = par({seq({leaf("a"), leaf("b")}), leaf("c")});
    CHECK(language(t, 2, 2).empty());
    CHECK(language(t, 3, 2) ==
          TraceSet{{"a", "b", "c"}, {"a", "c", "b"}, {"c", "a", "b"}});
}

TEST_CASE("language_capped gives up on huge languages") {
    ProcessTree flower =
        loop({alt({leaf("a"), leaf("b"), leaf("c"), leaf("d"), leaf("e"), leaf("f")}),
              ProcessTree::tau()});
    CHECK(!language_capped(flower, 8, 8, 100));
    auto small = language_capped(flower, 2, 2, 1000000);
    REQUIRE(small);
    CHECK(*small == language(flower, 2, 2));
}

TEST_CASE("normalize flattens and collapses") {
    CHECK(normalize(seq({seq({leaf("a"), leaf("b")}), leaf("c")})) ==
          seq({leaf("a"), leaf("b"), leaf("c")}));
    CHECK(normalize(par({par({leaf("a"), leaf("b")}), leaf("c")})) ==
          par({leaf("a"), leaf("b"), leaf("c")}));
    CHECK(normalize(alt({leaf("a")})) == leaf("a"));
    CHECK(normalize(loop({leaf("a")})) == leaf("a"));
    CHECK(normalize(seq({})) == ProcessTree::tau());
    // Loops do not flatten into enclosing loops; their children keep roles.
    ProcessTree nested = loop({loop({leaf("a"), leaf("b")}), leaf("c")});
    CHECK(normalize(nested) == nested);
    // Idempotent.
    ProcessTree messy = seq({seq({alt({leaf("a")}), seq({leaf("b")})}), leaf("c")});
    CHECK(normalize(normalize(messy)) == normalize(messy));
}

TEST_CASE("format_tree renders the operator glyphs") {
    CHECK(format_tree(leaf("a")) == "a");
    CHECK(format_tree(ProcessTree::tau()) == "\xCF\x84");
    CHECK(format_tree(seq({leaf("a"), par({leaf("b"), leaf("c")})})) ==
          "\xE2\x86\x92(a, \xE2\x88\xA7(b, c))");
    CHECK(format_tree(alt({leaf("a"), ProcessTree::tau()})) ==
          "\xC3\x97(a, \xCF\x84)");
    CHECK(format_tree(loop({leaf("a"), leaf("b")})) == "\xE2\x9F\xB2(a, b)");
}

TEST_CASE("format_tree quotes awkward activity names") {
    CHECK(format_tree(leaf("quiz attempt")) == "quiz attempt");
    CHECK(format_tree(leaf("a,b")) == "\"a,b\"");
    CHECK(format_tree(leaf("a(b)")) == "\"a(b)\"");
    CHECK(format_tree(leaf("tau")) == "\"tau\"");
    CHECK(format_tree(leaf("")) == "\"\"");
    CHECK(format_tree(leaf(" padded ")) == "\" padded \"");
    CHECK(format_tree(leaf("say \"hi\"")) == "\"say \\\"hi\\\"\"");
}

TEST_CASE("parse_tree accepts glyphs and ascii forms") {
    ProcessTree expected = seq({leaf("a"), par({leaf("b"), leaf("c")})});
    CHECK(parse_tree("\xE2\x86\x92(a, \xE2\x88\xA7(b, c))") == expected);
    CHECK(parse_tree("seq(a, and(b, c))") == expected);
    CHECK(parse_tree("->(a,and(b,c))") == expected);
    CHECK(parse_tree("  seq( a , and( b , c ) )  ") == expected);
    CHECK(parse_tree("xor(a, tau)") == alt({leaf("a"), ProcessTree::tau()}));
    CHECK(parse_tree("loop(a, b)") == loop({leaf("a"), leaf("b")}));
    CHECK(parse_tree("\"tau\"") == leaf("tau"));
}

TEST_CASE("parse_tree inverts format_tree") {
    const std::vector<ProcessTree> trees = {
        leaf("a"),
        leaf("quiz attempt"),
        leaf("a, (b)"),
        ProcessTree::tau(),
        seq({leaf("a"), alt({leaf("b"), ProcessTree::tau()}), leaf("c")}),
        loop({seq({leaf("a"), leaf("b")}), leaf("c"), leaf("d")}),
        par({leaf("EXECUTING|quiz attempt"), leaf("say \"hi\"")}),
    };
    for (const auto& t : trees) CHECK(parse_tree(format_tree(t)) == t);
}

TEST_CASE("parse_tree rejects malformed text") {
    CHECK_THROWS_AS(parse_tree(""), ParseError);
    CHECK_THROWS_AS(parse_tree("seq(a, b"), ParseError);
    CHECK_THROWS_AS(parse_tree("seq(a,)"), ParseError);
    CHECK_THROWS_AS(parse_tree("seq(a) trailing"), ParseError);
    CHECK_THROWS_AS(parse_tree("\"unterminated"), ParseError);
    CHECK_THROWS_AS(parse_tree("(a, b)"), ParseError);
}
