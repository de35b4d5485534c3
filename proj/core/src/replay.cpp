#include "epm/replay.hpp"

#include "epm/errors.hpp"

#include <deque>
#include <map>
#include <set>

namespace epm {

namespace {

constexpr std::size_t kMaxTauStates = 10000;

bool enabled(const WorkflowNet::Transition& t, const Marking& m) {
    for (PlaceId p : t.inputs)
        if (m[p] == 0) return false;
    return true;
}

struct Replayer {
    const WorkflowNet& net;
    Marking marking;
    ReplayCounts counts;

    explicit Replayer(const WorkflowNet& n) : net(n), marking(n.num_places, 0) {
        marking[net.source] = 1;
        counts.produced += 1;
    }

    void fire(std::size_t t) {
        for (PlaceId p : net.transitions[t].inputs) {
            --marking[p];
            ++counts.consumed;
        }
        for (PlaceId p : net.transitions[t].outputs) {
            ++marking[p];
            ++counts.produced;
        }
    }

    // Shortest silent-transition sequence from the current marking to one
    // satisfying goal; ties resolved by BFS order, hence by transition
    // creation order. Fires the sequence and reports whether a goal marking
    // was reached.
    template <typename Goal>
    bool advance_silent(Goal goal) {
        if (goal(marking)) return true;
        const std::size_t depth_cap = 2 * net.transitions.size();
        std::map<Marking, std::pair<Marking, std::size_t>> parent;
        std::deque<std::pair<Marking, std::size_t>> queue{{marking, 0}};
        std::set<Marking> seen{marking};
        while (!queue.empty() && seen.size() < kMaxTauStates) {
            auto [m, depth] = std::move(queue.front());
            queue.pop_front();
            if (depth == depth_cap) continue;
            for (std::size_t t = 0; t < net.transitions.size(); ++t) {
                const auto& tr = net.transitions[t];
                if (!tr.silent || !enabled(tr, m)) continue;
                Marking next = m;
                for (PlaceId p : tr.inputs) --next[p];
                for (PlaceId p : tr.outputs) ++next[p];
                if (!seen.insert(next).second) continue;
                parent.emplace(next, std::make_pair(m, t));
                if (goal(next)) {
                    std::vector<std::size_t> path;
                    Marking at = next;
                    while (at != marking) {
                        auto it = parent.find(at);
                        path.push_back(it->second.second);
                        at = it->second.first;
                    }
                    for (auto rit = path.rbegin(); rit != path.rend(); ++rit) fire(*rit);
                    return true;
                }
                queue.emplace_back(std::move(next), depth + 1);
            }
        }
        return false;
    }

    void replay_event(const std::string& label) {
        std::vector<std::size_t> candidates;
        for (std::size_t t = 0; t < net.transitions.size(); ++t)
            if (!net.transitions[t].silent && net.transitions[t].label == label)
                candidates.push_back(t);
        if (candidates.empty()) {
            counts.consumed += 1;
            counts.missing += 1;
            return;
        }
        auto some_enabled = [&](const Marking& m) {
            for (std::size_t t : candidates)
                if (enabled(net.transitions[t], m)) return true;
            return false;
        };
        if (advance_silent(some_enabled)) {
            for (std::size_t t : candidates)
                if (enabled(net.transitions[t], marking)) {
                    fire(t);
                    return;
                }
        }
        // Force-fire the first candidate, conjuring the tokens it lacks.
        std::size_t t = candidates.front();
        for (PlaceId p : net.transitions[t].inputs)
            if (marking[p] == 0) {
                ++marking[p];
                ++counts.missing;
            }
        fire(t);
    }

    void finish() {
        advance_silent([&](const Marking& m) { return m[net.sink] >= 1; });
        if (marking[net.sink] >= 1) {
            --marking[net.sink];
            counts.consumed += 1;
        } else {
            counts.missing += 1;
            counts.consumed += 1;
        }
        for (PlaceId p = 0; p < marking.size(); ++p) counts.remaining += marking[p];
    }
};

} // namespace

ReplayCounts replay_trace(const WorkflowNet& net, const ActivityTrace& trace) {
    Replayer r(net);
    for (const auto& label : trace) r.replay_event(label);
    r.finish();
    return r.counts;
}

ReplayCounts replay_log(const WorkflowNet& net, const ActivityLog& log) {
    ReplayCounts total;
    for (const auto& [trace, count] : log.variants) {
        ReplayCounts one = replay_trace(net, trace);
        total.produced += one.produced * count;
        total.consumed += one.consumed * count;
        total.missing += one.missing * count;
        total.remaining += one.remaining * count;
    }
    return total;
}

double fitness(const WorkflowNet& net, const ActivityLog& log) {
    if (log.empty()) throw ConfigError("fitness of an empty log is undefined");
    ReplayCounts c = replay_log(net, log);
    double miss = static_cast<double>(c.missing) / static_cast<double>(c.consumed);
    double rem = static_cast<double>(c.remaining) / static_cast<double>(c.produced);
    return 0.5 * (1.0 - miss) + 0.5 * (1.0 - rem);
}

double fitness(const WorkflowNet& net, const EventLog& log) {
    return fitness(net, ActivityLog::from_event_log(log));
}

} // namespace epm
