#include "epm/viz.hpp"

#include "epm/petri.hpp"

#include <stdexcept>

namespace epm {

AnnotatedModel annotate(const ProcessTree& tree, const ActivityLog& log) {
    AnnotatedModel model;
    model.tree = tree;
    for (const auto& [trace, count] : log.variants)
        for (const auto& a : trace) model.activity_freq[a] += count;
    Dfg dfg = build_dfg(log);
    model.edge_freq = std::move(dfg.edges);
    const auto known = tree.activities();
    for (const auto& [a, freq] : model.activity_freq)
        if (!known.count(a)) model.warnings.push_back(a);
    return model;
}

AnnotatedModel annotate(const ProcessTree& tree, const EventLog& log) {
    return annotate(tree, ActivityLog::from_event_log(log));
}

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

struct DotBuilder {
    const AnnotatedModel& model;
    std::string out;
    int next_id = 0;

    // A rendered subtree exposes one entry and one exit node; leaf nodes
    // remember their activity so directly-follows frequencies can label the
    // edges between adjacent boxes.
    struct Port {
        std::string node;
        std::string activity; // empty unless the node is an activity box
    };

    std::string fresh() { return "n" + std::to_string(next_id++); }

    std::string diamond(const std::string& glyph) {
        std::string id = fresh();
        out += "  " + id + " [shape=diamond, label=\"" + glyph + "\"];\n";
        return id;
    }

    void edge(const Port& from, const Port& to) {
        out += "  " + from.node + " -> " + to.node;
        if (!from.activity.empty() && !to.activity.empty()) {
            auto it = model.edge_freq.find({from.activity, to.activity});
            if (it != model.edge_freq.end())
                out += " [label=\"" + std::to_string(it->second) + "\"]";
        }
        out += ";\n";
    }

    std::pair<Port, Port> render(const ProcessTree& t) {
        switch (t.op) {
        case TreeOp::Leaf: {
            std::string id = fresh();
            std::uint64_t freq = 0;
            if (auto it = model.activity_freq.find(t.activity);
                it != model.activity_freq.end())
                freq = it->second;
            out += "  " + id + " [shape=box, label=\"" + dot_escape(t.activity) +
                   "\\n(" + std::to_string(freq) + ")\"];\n";
            Port p{id, t.activity};
            return {p, p};
        }
        case TreeOp::Tau: {
            std::string id = fresh();
            out += "  " + id +
                   " [shape=square, width=0.15, style=filled, fillcolor=black, "
                   "label=\"\"];\n";
            Port p{id, ""};
            return {p, p};
        }
        case TreeOp::Seq: {
            if (t.children.empty()) return render(ProcessTree::tau());
            std::pair<Port, Port> first, prev;
            for (std::size_t i = 0; i < t.children.size(); ++i) {
                auto ports = render(t.children[i]);
                if (i == 0)
                    first = ports;
                else
                    edge(prev.second, ports.first);
                prev = ports;
            }
            return {first.first, prev.second};
        }
        case TreeOp::Xor:
        case TreeOp::And: {
            const char* glyph = t.op == TreeOp::Xor ? "\xc3\x97" : "+";
            Port split{diamond(glyph), ""};
            Port join{diamond(glyph), ""};
            for (const auto& child : t.children) {
                auto ports = render(child);
                edge(split, ports.first);
                edge(ports.second, join);
            }
            return {split, join};
        }
        case TreeOp::Loop: {
            Port split{diamond("\xe2\x86\xbb"), ""};
            Port join{diamond("\xe2\x86\xbb"), ""};
            auto body = render(t.children.empty() ? ProcessTree::tau() : t.children[0]);
            edge(split, body.first);
            edge(body.second, join);
            for (std::size_t i = 1; i < t.children.size(); ++i) {
                auto redo = render(t.children[i]);
                edge(join, redo.first);
                edge(redo.second, split);
            }
            return {split, join};
        }
        }
        throw std::logic_error("unreachable tree op");
    }
};

} // namespace

std::string to_dot(const AnnotatedModel& model) {
    DotBuilder b{model, {}, 0};
    b.out = "digraph model {\n";
    b.out += "  rankdir=LR;\n";
    b.out += "  start [shape=circle, style=filled, fillcolor=black, width=0.2, "
             "label=\"\"];\n";
    b.out += "  end [shape=doublecircle, width=0.15, label=\"\"];\n";
    auto ports = b.render(model.tree);
    b.edge({"start", ""}, ports.first);
    b.edge(ports.second, {"end", ""});
    b.out += "}\n";
    return b.out;
}

std::string net_to_dot(const WorkflowNet& net) {
    std::string out = "digraph net {\n  rankdir=LR;\n";
    for (std::size_t p = 0; p < net.num_places; ++p) {
        std::string label;
        if (p == net.source) label = "i";
        if (p == net.sink) label = "o";
        out += "  p" + std::to_string(p) + " [shape=circle, label=\"" + label + "\"];\n";
    }
    for (std::size_t t = 0; t < net.transitions.size(); ++t) {
        const auto& tr = net.transitions[t];
        out += "  t" + std::to_string(t);
        if (tr.silent)
            out += " [shape=box, width=0.1, style=filled, fillcolor=black, label=\"\"];\n";
        else
            out += " [shape=box, label=\"" + dot_escape(tr.label) + "\"];\n";
    }
    for (std::size_t t = 0; t < net.transitions.size(); ++t) {
        for (PlaceId p : net.transitions[t].inputs)
            out += "  p" + std::to_string(p) + " -> t" + std::to_string(t) + ";\n";
        for (PlaceId p : net.transitions[t].outputs)
            out += "  t" + std::to_string(t) + " -> p" + std::to_string(p) + ";\n";
    }
    out += "}\n";
    return out;
}

} // namespace epm
