#include "epm/process_tree.hpp"

#include "epm/errors.hpp"

#include <algorithm>
#include <utility>

namespace epm {

ProcessTree ProcessTree::leaf(std::string name) {
    ProcessTree t;
    t.op = TreeOp::Leaf;
    t.activity = std::move(name);
    return t;
}

ProcessTree ProcessTree::tau() { return ProcessTree{}; }

ProcessTree ProcessTree::make(TreeOp op, std::vector<ProcessTree> children) {
    ProcessTree t;
    t.op = op;
    t.children = std::move(children);
    return t;
}

std::size_t ProcessTree::leaf_count() const {
    if (op == TreeOp::Leaf) return 1;
    std::size_t n = 0;
    for (const auto& c : children) n += c.leaf_count();
    return n;
}

namespace {

void collect_activities(const ProcessTree& t, std::set<std::string>& out) {
    if (t.op == TreeOp::Leaf) {
        out.insert(t.activity);
        return;
    }
    for (const auto& c : t.children) collect_activities(c, out);
}

} // namespace

std::set<std::string> ProcessTree::activities() const {
    std::set<std::string> out;
    collect_activities(*this, out);
    return out;
}

namespace {

constexpr std::size_t kNoCap = static_cast<std::size_t>(-1);

// All interleavings of a and b (relative orders preserved).
void shuffles(const ActivityTrace& a, std::size_t ai, const ActivityTrace& b, std::size_t bi,
              ActivityTrace& prefix, TraceSet& out) {
    if (ai == a.size() && bi == b.size()) {
        out.insert(prefix);
        return;
    }
    if (ai < a.size()) {
        prefix.push_back(a[ai]);
        shuffles(a, ai + 1, b, bi, prefix, out);
        prefix.pop_back();
    }
    if (bi < b.size()) {
        prefix.push_back(b[bi]);
        shuffles(a, ai, b, bi + 1, prefix, out);
        prefix.pop_back();
    }
}

// nullopt signals the cap was hit somewhere below.
std::optional<TraceSet> enumerate(const ProcessTree& t, std::size_t max_len,
                                  std::size_t max_unroll, std::size_t cap) {
    TraceSet result;
    switch (t.op) {
    case TreeOp::Tau:
        result.insert(ActivityTrace{});
        break;
    case TreeOp::Leaf:
        if (max_len >= 1) result.insert(ActivityTrace{t.activity});
        break;
    case TreeOp::Seq: {
        result.insert(ActivityTrace{});
        for (const auto& child : t.children) {
            auto part = enumerate(child, max_len, max_unroll, cap);
            if (!part) return std::nullopt;
            TraceSet next;
            for (const auto& x : result)
                for (const auto& y : *part) {
                    if (x.size() + y.size() > max_len) continue;
                    ActivityTrace xy = x;
                    xy.insert(xy.end(), y.begin(), y.end());
                    next.insert(std::move(xy));
                    if (next.size() > cap) return std::nullopt;
                }
            result = std::move(next);
            if (result.empty()) break;
        }
        break;
    }
    case TreeOp::Xor: {
        for (const auto& child : t.children) {
            auto part = enumerate(child, max_len, max_unroll, cap);
            if (!part) return std::nullopt;
            result.insert(part->begin(), part->end());
            if (result.size() > cap) return std::nullopt;
        }
        break;
    }
    case TreeOp::And: {
        result.insert(ActivityTrace{});
        for (const auto& child : t.children) {
            auto part = enumerate(child, max_len, max_unroll, cap);
            if (!part) return std::nullopt;
            TraceSet next;
            for (const auto& x : result)
                for (const auto& y : *part) {
                    if (x.size() + y.size() > max_len) continue;
                    ActivityTrace prefix;
                    shuffles(x, 0, y, 0, prefix, next);
                    if (next.size() > cap) return std::nullopt;
                }
            result = std::move(next);
            if (result.empty()) break;
        }
        break;
    }
    case TreeOp::Loop: {
        if (t.children.empty()) {
            result.insert(ActivityTrace{});
            break;
        }
        auto body = enumerate(t.children[0], max_len, max_unroll, cap);
        if (!body) return std::nullopt;
        TraceSet redo;
        for (std::size_t i = 1; i < t.children.size(); ++i) {
            auto part = enumerate(t.children[i], max_len, max_unroll, cap);
            if (!part) return std::nullopt;
            redo.insert(part->begin(), part->end());
            if (redo.size() > cap) return std::nullopt;
        }
        TraceSet round = *body;
        result = round;
        if (result.size() > cap) return std::nullopt;
        for (std::size_t r = 0; r < max_unroll && !round.empty(); ++r) {
            TraceSet next;
            for (const auto& x : round)
                for (const auto& m : redo)
                    for (const auto& y : *body) {
                        if (x.size() + m.size() + y.size() > max_len) continue;
                        ActivityTrace xy = x;
                        xy.insert(xy.end(), m.begin(), m.end());
                        xy.insert(xy.end(), y.begin(), y.end());
                        next.insert(std::move(xy));
                        if (next.size() > cap) return std::nullopt;
                    }
            result.insert(next.begin(), next.end());
            if (result.size() > cap) return std::nullopt;
            round = std::move(next);
        }
        break;
    }
    }
    return result;
}

} // namespace

TraceSet language(const ProcessTree& t, std::size_t max_len, std::size_t max_loop_unrollings) {
    return *enumerate(t, max_len, max_loop_unrollings, kNoCap);
}

std::optional<TraceSet> language_capped(const ProcessTree& t, std::size_t max_len,
                                        std::size_t max_loop_unrollings,
                                        std::size_t max_traces) {
    return enumerate(t, max_len, max_loop_unrollings, max_traces);
}

ProcessTree normalize(const ProcessTree& t) {
    if (t.op == TreeOp::Leaf || t.op == TreeOp::Tau) return t;

    std::vector<ProcessTree> kids;
    kids.reserve(t.children.size());
    for (const auto& c : t.children) kids.push_back(normalize(c));

    if (kids.empty()) return ProcessTree::tau();
    if (kids.size() == 1) return kids[0];

    if (t.op == TreeOp::Loop) return ProcessTree::make(TreeOp::Loop, std::move(kids));

    std::vector<ProcessTree> flat;
    for (auto& c : kids) {
        if (c.op == t.op)
            for (auto& gc : c.children) flat.push_back(std::move(gc));
        else
            flat.push_back(std::move(c));
    }
    return ProcessTree::make(t.op, std::move(flat));
}

namespace {

bool needs_quoting(const std::string& name) {
    if (name.empty()) return true;
    if (name == "tau" || name == "\xcf\x84") return true; // would read back as silence
    if (name.front() == ' ' || name.back() == ' ') return true;
    return name.find_first_of("(),\"\t\n\r") != std::string::npos;
}

void format_into(const ProcessTree& t, std::string& out) {
    switch (t.op) {
    case TreeOp::Tau:
        out += "\xcf\x84"; // τ
        return;
    case TreeOp::Leaf:
        if (!needs_quoting(t.activity)) {
            out += t.activity;
            return;
        }
        out += '"';
        for (char c : t.activity) {
            if (c == '"' || c == '\\') out += '\\';
            out += c;
        }
        out += '"';
        return;
    case TreeOp::Seq: out += "\xe2\x86\x92"; break;  // →
    case TreeOp::Xor: out += "\xc3\x97"; break;      // ×
    case TreeOp::And: out += "\xe2\x88\xa7"; break;  // ∧
    case TreeOp::Loop: out += "\xe2\x9f\xb2"; break; // ⟲
    }
    out += '(';
    for (std::size_t i = 0; i < t.children.size(); ++i) {
        if (i) out += ", ";
        format_into(t.children[i], out);
    }
    out += ')';
}

struct TreeParser {
    const std::string& text;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& why) const {
        throw ParseError("tree text, offset " + std::to_string(pos) + ": " + why);
    }

    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' ||
                                     text[pos] == '\n' || text[pos] == '\r'))
            ++pos;
    }

    bool at(char c) const { return pos < text.size() && text[pos] == c; }

    std::string quoted() {
        ++pos; // opening quote
        std::string out;
        while (pos < text.size() && text[pos] != '"') {
            if (text[pos] == '\\') {
                ++pos;
                if (pos == text.size()) fail("dangling escape");
            }
            out += text[pos++];
        }
        if (pos == text.size()) fail("unterminated quote");
        ++pos;
        return out;
    }

    std::string bare() {
        std::size_t start = pos;
        while (pos < text.size() && text.find_first_of("(),\"", pos) != pos) ++pos;
        std::string word = text.substr(start, pos - start);
        while (!word.empty() && (word.back() == ' ' || word.back() == '\t' ||
                                 word.back() == '\n' || word.back() == '\r'))
            word.pop_back();
        return word;
    }

    std::optional<TreeOp> op_of(const std::string& head) const {
        if (head == "\xe2\x86\x92" || head == "->" || head == "seq") return TreeOp::Seq;
        if (head == "\xc3\x97" || head == "xor") return TreeOp::Xor;
        if (head == "\xe2\x88\xa7" || head == "and") return TreeOp::And;
        if (head == "\xe2\x9f\xb2" || head == "loop") return TreeOp::Loop;
        return std::nullopt;
    }

    ProcessTree node() {
        skip_ws();
        if (pos == text.size()) fail("expected a node");
        if (at('"')) return ProcessTree::leaf(quoted());
        if (at('(') || at(')') || at(',')) fail("expected a node");

        std::string word = bare();
        skip_ws();
        if (at('(')) {
            auto op = op_of(word);
            if (!op) fail("unknown operator \"" + word + "\"");
            ++pos;
            std::vector<ProcessTree> children;
            children.push_back(node());
            skip_ws();
            while (at(',')) {
                ++pos;
                children.push_back(node());
                skip_ws();
            }
            if (!at(')')) fail("expected ')'");
            ++pos;
            return ProcessTree::make(*op, std::move(children));
        }
        if (word.empty()) fail("expected a node");
        if (word == "tau" || word == "\xcf\x84") return ProcessTree::tau();
        return ProcessTree::leaf(word);
    }
};

} // namespace

std::string format_tree(const ProcessTree& t) {
    std::string out;
    format_into(t, out);
    return out;
}

ProcessTree parse_tree(const std::string& text) {
    TreeParser p{text};
    ProcessTree t = p.node();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing characters");
    return t;
}

} // namespace epm
