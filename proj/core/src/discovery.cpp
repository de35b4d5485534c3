#include "epm/discovery.hpp"

#include "epm/errors.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace epm {

ActivityLog ActivityLog::from_event_log(const EventLog& log) {
    ActivityLog out;
    for (const auto& trace : log.traces) {
        ActivityTrace t;
        t.reserve(trace.events.size());
        for (const auto& e : trace.events) t.push_back(activity_of(e));
        out.add(t);
    }
    return out;
}

ActivityLog ActivityLog::from_traces(const std::vector<ActivityTrace>& traces) {
    ActivityLog out;
    for (const auto& t : traces) out.add(t);
    return out;
}

void ActivityLog::add(const ActivityTrace& trace, std::uint64_t count) {
    if (count == 0) return;
    variants[trace] += count;
}

std::uint64_t ActivityLog::num_traces() const {
    std::uint64_t n = 0;
    for (const auto& [t, c] : variants) n += c;
    return n;
}

std::set<std::string> ActivityLog::alphabet() const {
    std::set<std::string> out;
    for (const auto& [t, c] : variants) out.insert(t.begin(), t.end());
    return out;
}

Dfg build_dfg(const ActivityLog& log) {
    Dfg dfg;
    for (const auto& [trace, count] : log.variants) {
        if (trace.empty()) {
            dfg.empty_traces += count;
            continue;
        }
        dfg.start_acts[trace.front()] += count;
        dfg.end_acts[trace.back()] += count;
        for (const auto& a : trace) dfg.activities.insert(a);
        for (std::size_t i = 0; i + 1 < trace.size(); ++i)
            dfg.edges[{trace[i], trace[i + 1]}] += count;
    }
    return dfg;
}

Dfg build_dfg(const EventLog& log) { return build_dfg(ActivityLog::from_event_log(log)); }

Dfg filter_dfg(const Dfg& dfg, double noise_threshold) {
    if (noise_threshold < 0.0 || noise_threshold > 1.0)
        throw ConfigError("noise threshold must lie in [0,1]");

    // Strongest outgoing frequency per source, the trace end counting as one
    // more outgoing edge.
    std::map<std::string, std::uint64_t> max_out;
    for (const auto& [edge, freq] : dfg.edges)
        max_out[edge.first] = std::max(max_out[edge.first], freq);
    for (const auto& [a, freq] : dfg.end_acts) max_out[a] = std::max(max_out[a], freq);

    Dfg out;
    out.activities = dfg.activities;
    out.empty_traces = dfg.empty_traces;
    for (const auto& [edge, freq] : dfg.edges)
        if (static_cast<double>(freq) >= noise_threshold * max_out[edge.first])
            out.edges.emplace(edge, freq);
    for (const auto& [a, freq] : dfg.end_acts)
        if (static_cast<double>(freq) >= noise_threshold * max_out[a])
            out.end_acts.emplace(a, freq);

    std::uint64_t max_start = 0;
    for (const auto& [a, freq] : dfg.start_acts) max_start = std::max(max_start, freq);
    for (const auto& [a, freq] : dfg.start_acts)
        if (static_cast<double>(freq) >= noise_threshold * max_start)
            out.start_acts.emplace(a, freq);
    return out;
}

namespace {

struct ActIndex {
    std::vector<std::string> names; // sorted
    std::map<std::string, int> of;

    explicit ActIndex(const std::set<std::string>& acts)
        : names(acts.begin(), acts.end()) {
        for (int i = 0; i < static_cast<int>(names.size()); ++i) of[names[i]] = i;
    }
    int size() const { return static_cast<int>(names.size()); }
};

using BoolMatrix = std::vector<std::vector<bool>>;

BoolMatrix edge_matrix(const Dfg& dfg, const ActIndex& idx) {
    BoolMatrix m(idx.size(), std::vector<bool>(idx.size(), false));
    for (const auto& [edge, freq] : dfg.edges) {
        auto a = idx.of.find(edge.first);
        auto b = idx.of.find(edge.second);
        if (a != idx.of.end() && b != idx.of.end()) m[a->second][b->second] = true;
    }
    return m;
}

// Strict transitive closure: paths of one or more edges.
BoolMatrix reach_matrix(const BoolMatrix& edge) {
    BoolMatrix r = edge;
    int n = static_cast<int>(r.size());
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) {
            if (!r[i][k]) continue;
            for (int j = 0; j < n; ++j)
                if (r[k][j]) r[i][j] = true;
        }
    return r;
}

struct UnionFind {
    std::vector<int> parent;

    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[std::max(a, b)] = std::min(a, b);
        return true;
    }
};

// Groups as sorted index lists, ordered by smallest member.
std::vector<std::vector<int>> uf_groups(UnionFind& uf, int n) {
    std::map<int, std::vector<int>> by_root;
    for (int i = 0; i < n; ++i) by_root[uf.find(i)].push_back(i);
    std::vector<std::vector<int>> out;
    out.reserve(by_root.size());
    for (auto& [root, members] : by_root) out.push_back(std::move(members));
    return out;
}

std::vector<std::string> part_names(const std::vector<int>& members, const ActIndex& idx) {
    std::vector<std::string> out;
    out.reserve(members.size());
    for (int m : members) out.push_back(idx.names[m]);
    return out;
}

std::optional<Cut> xor_cut(const ActIndex& idx, const BoolMatrix& edge) {
    UnionFind uf(idx.size());
    for (int a = 0; a < idx.size(); ++a)
        for (int b = 0; b < idx.size(); ++b)
            if (edge[a][b]) uf.unite(a, b);
    auto groups = uf_groups(uf, idx.size());
    if (groups.size() < 2) return std::nullopt;
    Cut cut;
    cut.kind = CutKind::Xor;
    for (const auto& g : groups) cut.parts.push_back(part_names(g, idx));
    return cut;
}

std::optional<Cut> seq_cut(const ActIndex& idx, const BoolMatrix& edge) {
    const BoolMatrix reach = reach_matrix(edge);
    UnionFind uf(idx.size());

    // Two activities stay in one part when they reach each other both ways
    // (a loop) or neither way (alternatives); only strictly one-directional
    // pairs may end up in different parts.
    for (int a = 0; a < idx.size(); ++a)
        for (int b = a + 1; b < idx.size(); ++b)
            if (reach[a][b] == reach[b][a]) uf.unite(a, b);

    auto groups = uf_groups(uf, idx.size());
    if (groups.size() < 2) return std::nullopt;

    // Rank by how many other groups a group reaches; a strict chain gives
    // distinct ranks n-1 .. 0.
    auto reaches = [&](const std::vector<int>& from, const std::vector<int>& to) {
        for (int a : from)
            for (int b : to)
                if (reach[a][b]) return true;
        return false;
    };
    std::vector<std::pair<std::size_t, std::size_t>> ranked; // (reached count, index)
    for (std::size_t i = 0; i < groups.size(); ++i) {
        std::size_t rank = 0;
        for (std::size_t j = 0; j < groups.size(); ++j)
            if (i != j && reaches(groups[i], groups[j])) ++rank;
        ranked.emplace_back(rank, i);
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
        return x.first != y.first ? x.first > y.first : x.second < y.second;
    });
    std::vector<std::vector<int>> ordered;
    ordered.reserve(groups.size());
    for (const auto& [rank, i] : ranked) ordered.push_back(std::move(groups[i]));
    groups = std::move(ordered);
    for (std::size_t i = 0; i < groups.size(); ++i)
        for (std::size_t j = i + 1; j < groups.size(); ++j)
            if (!reaches(groups[i], groups[j]) || reaches(groups[j], groups[i]))
                return std::nullopt;

    Cut cut;
    cut.kind = CutKind::Seq;
    for (const auto& g : groups) cut.parts.push_back(part_names(g, idx));
    return cut;
}

std::optional<Cut> and_cut(const Dfg& dfg, const ActIndex& idx, const BoolMatrix& edge) {
    UnionFind uf(idx.size());
    for (int a = 0; a < idx.size(); ++a)
        for (int b = a + 1; b < idx.size(); ++b)
            if (!(edge[a][b] && edge[b][a])) uf.unite(a, b);
    auto groups = uf_groups(uf, idx.size());
    if (groups.size() < 2) return std::nullopt;

    // Every part must contain a start and an end activity. A component with
    // neither (a loop redo, typically) invalidates the whole cut; merging it
    // away would steal logs that belong to the loop cut below.
    for (const auto& g : groups) {
        bool has_start = false, has_end = false;
        for (int a : g) {
            has_start = has_start || dfg.start_acts.count(idx.names[a]) > 0;
            has_end = has_end || dfg.end_acts.count(idx.names[a]) > 0;
        }
        if (!has_start || !has_end) return std::nullopt;
    }
    std::vector<std::vector<int>> parts = std::move(groups);
    std::sort(parts.begin(), parts.end());

    Cut cut;
    cut.kind = CutKind::And;
    for (const auto& g : parts) cut.parts.push_back(part_names(g, idx));
    return cut;
}

std::optional<Cut> loop_cut(const Dfg& dfg, const ActIndex& idx, const BoolMatrix& edge) {
    const int n = idx.size();
    std::vector<bool> is_start(n, false), is_end(n, false), in_body(n, false);
    for (const auto& [a, c] : dfg.start_acts)
        if (auto it = idx.of.find(a); it != idx.of.end()) is_start[it->second] = true;
    for (const auto& [a, c] : dfg.end_acts)
        if (auto it = idx.of.find(a); it != idx.of.end()) is_end[it->second] = true;
    for (int i = 0; i < n; ++i) in_body[i] = is_start[i] || is_end[i];

    std::vector<int> rest;
    for (int i = 0; i < n; ++i)
        if (!in_body[i]) rest.push_back(i);
    if (rest.empty()) return std::nullopt;

    // Undirected components of the graph restricted to non-body activities.
    UnionFind uf(n);
    for (int a : rest)
        for (int b : rest)
            if (edge[a][b]) uf.unite(a, b);
    std::map<int, std::vector<int>> comps;
    for (int a : rest) comps[uf.find(a)].push_back(a);

    std::vector<int> body;
    for (int i = 0; i < n; ++i)
        if (in_body[i]) body.push_back(i);

    std::vector<std::vector<int>> redos;
    for (auto& [root, comp] : comps) {
        bool redo = true;
        for (int c : comp) {
            for (int x = 0; x < n && redo; ++x) {
                if (edge[x][c] && in_body[x] && !is_end[x]) redo = false; // entered mid-body
                if (edge[c][x] && in_body[x] && !is_start[x]) redo = false; // returns mid-body
            }
            if (!redo) break;
            bool to_some_start = false, from_some_end = false;
            for (int x = 0; x < n; ++x) {
                to_some_start = to_some_start || (is_start[x] && edge[c][x]);
                from_some_end = from_some_end || (is_end[x] && edge[x][c]);
            }
            // A redo exit may restart the body anywhere, and any body end may
            // enter it; partial connectivity means c belongs to the body.
            if (to_some_start)
                for (int x = 0; x < n && redo; ++x)
                    if (is_start[x] && !edge[c][x]) redo = false;
            if (!redo) break;
            if (from_some_end)
                for (int x = 0; x < n && redo; ++x)
                    if (is_end[x] && !edge[x][c]) redo = false;
            if (!redo) break;
        }
        if (redo)
            redos.push_back(comp);
        else
            body.insert(body.end(), comp.begin(), comp.end());
    }
    if (redos.empty()) return std::nullopt;

    std::sort(body.begin(), body.end());
    Cut cut;
    cut.kind = CutKind::Loop;
    cut.parts.push_back(part_names(body, idx));
    for (const auto& comp : redos) cut.parts.push_back(part_names(comp, idx));
    return cut;
}

} // namespace

std::optional<Cut> find_cut(const Dfg& dfg) {
    if (dfg.activities.size() < 2) return std::nullopt;
    const ActIndex idx(dfg.activities);
    const BoolMatrix edge = edge_matrix(dfg, idx);
    if (auto cut = xor_cut(idx, edge)) return cut;
    if (auto cut = seq_cut(idx, edge)) return cut;
    if (auto cut = and_cut(dfg, idx, edge)) return cut;
    if (auto cut = loop_cut(dfg, idx, edge)) return cut;
    return std::nullopt;
}

std::vector<ActivityLog> split_log(const ActivityLog& log, const Cut& cut) {
    std::map<std::string, std::size_t> part_of;
    for (std::size_t p = 0; p < cut.parts.size(); ++p)
        for (const auto& a : cut.parts[p]) part_of[a] = p;

    std::vector<ActivityLog> out(cut.parts.size());
    for (const auto& [trace, count] : log.variants) {
        switch (cut.kind) {
        case CutKind::Xor: {
            std::vector<std::uint64_t> tally(cut.parts.size(), 0);
            for (const auto& a : trace) {
                auto it = part_of.find(a);
                if (it != part_of.end()) ++tally[it->second];
            }
            std::size_t winner =
                std::max_element(tally.begin(), tally.end()) - tally.begin();
            ActivityTrace kept;
            for (const auto& a : trace) {
                auto it = part_of.find(a);
                if (it != part_of.end() && it->second == winner) kept.push_back(a);
            }
            out[winner].add(kept, count);
            break;
        }
        case CutKind::Seq:
        case CutKind::And: {
            std::vector<ActivityTrace> projected(cut.parts.size());
            for (const auto& a : trace) {
                auto it = part_of.find(a);
                if (it != part_of.end()) projected[it->second].push_back(a);
            }
            for (std::size_t p = 0; p < cut.parts.size(); ++p)
                out[p].add(projected[p], count);
            break;
        }
        case CutKind::Loop: {
            // Maximal runs within one part become sub-traces of that part.
            std::optional<std::size_t> current;
            ActivityTrace run;
            for (const auto& a : trace) {
                auto it = part_of.find(a);
                if (it == part_of.end()) continue;
                if (current && *current != it->second) {
                    out[*current].add(run, count);
                    run.clear();
                }
                current = it->second;
                run.push_back(a);
            }
            if (current) out[*current].add(run, count);
            break;
        }
        }
    }
    return out;
}

namespace {

TreeOp op_of_kind(CutKind kind) {
    switch (kind) {
    case CutKind::Xor: return TreeOp::Xor;
    case CutKind::Seq: return TreeOp::Seq;
    case CutKind::And: return TreeOp::And;
    case CutKind::Loop: return TreeOp::Loop;
    }
    throw std::logic_error("unreachable cut kind");
}

void check_partition(const Cut& cut, const Dfg& dfg) {
    std::set<std::string> seen;
    for (const auto& part : cut.parts) {
        if (part.empty()) throw std::logic_error("cut has an empty part");
        for (const auto& a : part)
            if (!seen.insert(a).second)
                throw std::logic_error("cut parts overlap on " + a);
    }
    if (seen != dfg.activities)
        throw std::logic_error("cut parts do not cover the DFG activities");
}

// noise_threshold 0 keeps every edge, which is exactly the basic miner.
ProcessTree discover_rec(const ActivityLog& log, double noise_threshold) {
    if (log.empty()) return ProcessTree::tau();

    if (log.variants.count(ActivityTrace{})) {
        ActivityLog rest;
        for (const auto& [trace, count] : log.variants)
            if (!trace.empty()) rest.add(trace, count);
        if (rest.empty()) return ProcessTree::tau();
        return ProcessTree::make(
            TreeOp::Xor, {ProcessTree::tau(), discover_rec(rest, noise_threshold)});
    }

    const auto alphabet = log.alphabet();
    if (alphabet.size() == 1) {
        const std::string& a = *alphabet.begin();
        bool repeats = false;
        for (const auto& [trace, count] : log.variants) repeats = repeats || trace.size() > 1;
        if (!repeats) return ProcessTree::leaf(a);
        return ProcessTree::make(TreeOp::Loop,
                                 {ProcessTree::leaf(a), ProcessTree::tau()});
    }

    Dfg dfg = build_dfg(log);
    if (noise_threshold > 0.0) dfg = filter_dfg(dfg, noise_threshold);

    auto cut = find_cut(dfg);
    if (!cut) {
        std::vector<ProcessTree> leaves;
        for (const auto& a : alphabet) leaves.push_back(ProcessTree::leaf(a));
        return ProcessTree::make(
            TreeOp::Loop,
            {ProcessTree::make(TreeOp::Xor, std::move(leaves)), ProcessTree::tau()});
    }
    check_partition(*cut, dfg);

    auto sub_logs = split_log(log, *cut);
    std::vector<ProcessTree> children;
    children.reserve(sub_logs.size());
    for (const auto& sub : sub_logs) children.push_back(discover_rec(sub, noise_threshold));
    return ProcessTree::make(op_of_kind(cut->kind), std::move(children));
}

} // namespace

ProcessTree discover(const ActivityLog& log) { return discover_rec(log, 0.0); }

ProcessTree discover(const EventLog& log) {
    return discover(ActivityLog::from_event_log(log));
}

ProcessTree discover_infrequent(const ActivityLog& log, double noise_threshold) {
    if (noise_threshold < 0.0 || noise_threshold > 1.0)
        throw ConfigError("noise threshold must lie in [0,1]");
    return discover_rec(log, noise_threshold);
}

ProcessTree discover_infrequent(const EventLog& log, double noise_threshold) {
    return discover_infrequent(ActivityLog::from_event_log(log), noise_threshold);
}

} // namespace epm
