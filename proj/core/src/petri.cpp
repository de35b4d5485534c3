#include "epm/petri.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace epm {

Marking initial_marking(const WorkflowNet& net) {
    Marking m(net.num_places, 0);
    m[net.source] = 1;
    return m;
}

Marking final_marking(const WorkflowNet& net) {
    Marking m(net.num_places, 0);
    m[net.sink] = 1;
    return m;
}

namespace {

struct NetBuilder {
    WorkflowNet net;

    PlaceId place() { return static_cast<PlaceId>(net.num_places++); }

    void transition(std::string label, bool silent, std::vector<PlaceId> in,
                    std::vector<PlaceId> out) {
        net.transitions.push_back(
            {std::move(label), silent, std::move(in), std::move(out)});
    }

    void build(const ProcessTree& t, PlaceId src, PlaceId snk) {
        switch (t.op) {
        case TreeOp::Leaf:
            transition(t.activity, false, {src}, {snk});
            return;
        case TreeOp::Tau:
            transition("", true, {src}, {snk});
            return;
        case TreeOp::Seq: {
            PlaceId prev = src;
            for (std::size_t i = 0; i < t.children.size(); ++i) {
                PlaceId next = i + 1 == t.children.size() ? snk : place();
                build(t.children[i], prev, next);
                prev = next;
            }
            if (t.children.empty()) transition("", true, {src}, {snk});
            return;
        }
        case TreeOp::Xor: {
            for (const auto& child : t.children) build(child, src, snk);
            if (t.children.empty()) transition("", true, {src}, {snk});
            return;
        }
        case TreeOp::And: {
            if (t.children.empty()) {
                transition("", true, {src}, {snk});
                return;
            }
            std::vector<PlaceId> entries, exits;
            for (std::size_t i = 0; i < t.children.size(); ++i) {
                entries.push_back(place());
                exits.push_back(place());
            }
            transition("", true, {src}, entries);
            for (std::size_t i = 0; i < t.children.size(); ++i)
                build(t.children[i], entries[i], exits[i]);
            transition("", true, exits, {snk});
            return;
        }
        case TreeOp::Loop: {
            if (t.children.empty()) {
                transition("", true, {src}, {snk});
                return;
            }
            // Inner entry/exit places keep the net source arc-free on the
            // way in and the sink pure on the way out.
            PlaceId in = place();
            PlaceId out = place();
            transition("", true, {src}, {in});
            build(t.children[0], in, out);
            for (std::size_t i = 1; i < t.children.size(); ++i)
                build(t.children[i], out, in);
            transition("", true, {out}, {snk});
            return;
        }
        }
    }
};

} // namespace

WorkflowNet tree_to_net(const ProcessTree& t) {
    NetBuilder b;
    b.net.source = b.place();
    b.net.sink = b.place();
    b.build(t, b.net.source, b.net.sink);
    return std::move(b.net);
}

namespace {

bool enabled(const WorkflowNet::Transition& t, const Marking& m) {
    for (PlaceId p : t.inputs)
        if (m[p] == 0) return false;
    return true;
}

Marking fire(const WorkflowNet::Transition& t, Marking m) {
    for (PlaceId p : t.inputs) --m[p];
    for (PlaceId p : t.outputs) ++m[p];
    return m;
}

} // namespace

SoundnessResult check_soundness(const WorkflowNet& net, std::size_t state_cap) {
    const Marking start = initial_marking(net);
    const Marking fin = final_marking(net);

    std::map<Marking, std::size_t> id_of;
    std::vector<Marking> markings;
    std::vector<std::vector<std::size_t>> succ;
    std::vector<bool> fired(net.transitions.size(), false);

    auto intern = [&](Marking m) {
        auto [it, fresh] = id_of.emplace(std::move(m), markings.size());
        if (fresh) {
            markings.push_back(it->first);
            succ.emplace_back();
        }
        return it->second;
    };

    std::deque<std::size_t> queue{intern(start)};
    std::set<std::size_t> queued{0};
    std::size_t expanded = 0;
    while (!queue.empty()) {
        if (expanded >= state_cap)
            return {SoundnessVerdict::Inconclusive, "state cap reached", markings.size()};
        std::size_t id = queue.front();
        queue.pop_front();
        ++expanded;
        const Marking m = markings[id];

        if (m[net.sink] >= 1 && m != fin)
            return {SoundnessVerdict::Unsound,
                    "a reachable marking strictly covers the final marking",
                    markings.size()};

        for (std::size_t t = 0; t < net.transitions.size(); ++t) {
            if (!enabled(net.transitions[t], m)) continue;
            fired[t] = true;
            std::size_t next = intern(fire(net.transitions[t], m));
            succ[id].push_back(next);
            if (queued.insert(next).second) queue.push_back(next);
        }
    }

    auto fin_it = id_of.find(fin);
    if (fin_it == id_of.end())
        return {SoundnessVerdict::Unsound, "the final marking is unreachable",
                markings.size()};

    // Option to complete: walk the explored graph backwards from the final
    // marking; every reachable marking must be in its backward cone.
    std::vector<std::vector<std::size_t>> pred(markings.size());
    for (std::size_t id = 0; id < succ.size(); ++id)
        for (std::size_t next : succ[id]) pred[next].push_back(id);
    std::vector<bool> completes(markings.size(), false);
    std::deque<std::size_t> back{fin_it->second};
    completes[fin_it->second] = true;
    while (!back.empty()) {
        std::size_t id = back.front();
        back.pop_front();
        for (std::size_t p : pred[id])
            if (!completes[p]) {
                completes[p] = true;
                back.push_back(p);
            }
    }
    for (std::size_t id = 0; id < markings.size(); ++id)
        if (!completes[id])
            return {SoundnessVerdict::Unsound,
                    "option to complete fails from a reachable marking", markings.size()};

    for (std::size_t t = 0; t < fired.size(); ++t)
        if (!fired[t]) {
            const auto& tr = net.transitions[t];
            std::string name = tr.silent ? "tau #" + std::to_string(t) : tr.label;
            return {SoundnessVerdict::Unsound, "dead transition: " + name,
                    markings.size()};
        }

    return {SoundnessVerdict::Sound, "", markings.size()};
}

TraceSet net_language(const WorkflowNet& net, std::size_t max_len, std::size_t state_cap) {
    const Marking fin = final_marking(net);
    TraceSet result;

    std::set<std::pair<Marking, ActivityTrace>> seen;
    std::deque<std::pair<Marking, ActivityTrace>> queue;
    queue.emplace_back(initial_marking(net), ActivityTrace{});
    seen.insert(queue.front());

    std::size_t processed = 0;
    while (!queue.empty() && processed < state_cap) {
        auto [m, trace] = std::move(queue.front());
        queue.pop_front();
        ++processed;

        if (m == fin) {
            result.insert(trace);
            continue;
        }
        for (const auto& t : net.transitions) {
            if (!enabled(t, m)) continue;
            ActivityTrace next_trace = trace;
            if (!t.silent) {
                if (trace.size() == max_len) continue;
                next_trace.push_back(t.label);
            }
            auto state = std::make_pair(fire(t, m), std::move(next_trace));
            if (seen.insert(state).second) queue.push_back(std::move(state));
        }
    }
    return result;
}

} // namespace epm
