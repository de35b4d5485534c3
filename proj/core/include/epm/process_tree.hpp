#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace epm {

enum class TreeOp {
    Leaf, // one activity
    Tau,  // silent step, contributes the empty trace
    Seq,  // children in order
    Xor,  // exactly one child
    And,  // all interleavings of the children
    Loop, // first child is the body, remaining children are redo paths
};

/// Block-structured process model. Operators carry >= 2 children once
/// normalized; a Loop executes its body at least once, then any number of
/// (redo, body) rounds.
struct ProcessTree {
    TreeOp op = TreeOp::Tau;
    std::string activity;             // Leaf only
    std::vector<ProcessTree> children; // operators only

    bool operator==(const ProcessTree&) const = default;

    static ProcessTree leaf(std::string name);
    static ProcessTree tau();
    static ProcessTree make(TreeOp op, std::vector<ProcessTree> children);

    std::size_t leaf_count() const;      // non-tau leaves
    std::set<std::string> activities() const;
};

using ActivityTrace = std::vector<std::string>;
using TraceSet = std::set<ActivityTrace>;

/// Exactly the traces of length <= max_len producible with each loop
/// unrolled at most max_loop_unrollings times.
TraceSet language(const ProcessTree& t, std::size_t max_len,
                  std::size_t max_loop_unrollings);

/// As language(), but gives up (nullopt) once the set would exceed
/// max_traces. Lets tests compare against a huge mis-discovered model
/// without enumerating it in full.
std::optional<TraceSet> language_capped(const ProcessTree& t, std::size_t max_len,
                                        std::size_t max_loop_unrollings,
                                        std::size_t max_traces);

/// Flattens nested same-kind Seq/Xor/And operators and collapses
/// single-child operators. Language-equivalent to the input; idempotent.
ProcessTree normalize(const ProcessTree& t);

/// Canonical textual form: ->(a, x(b, c)) with UTF-8 glyphs for the
/// operators; deterministic, parse_tree inverts it.
std::string format_tree(const ProcessTree& t);

/// Accepts both the glyph form and the ASCII fallbacks seq/xor/and/loop and
/// tau. Throws ParseError on malformed input.
ProcessTree parse_tree(const std::string& text);

} // namespace epm
