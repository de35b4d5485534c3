#include "epm/loggen.hpp"

#include "epm/errors.hpp"

#include <algorithm>
#include <random>

namespace epm {

namespace {

// std::uniform_*_distribution output is not pinned by the standard, so all
// sampling goes through these helpers over the raw engine stream.
struct Rng {
    std::mt19937_64 eng;

    explicit Rng(std::uint64_t seed) : eng(seed) {}

    std::uint64_t raw() { return eng(); }

    std::size_t below(std::size_t n) {
        return n == 0 ? 0 : static_cast<std::size_t>(raw() % n);
    }

    double unit() { // [0,1) with 53 bits
        return static_cast<double>(raw() >> 11) * (1.0 / 9007199254740992.0);
    }

    bool chance(double p) { return unit() < p; }
};

void sample_into(const ProcessTree& t, Rng& rng, std::size_t max_unroll,
                 ActivityTrace& out) {
    switch (t.op) {
    case TreeOp::Leaf:
        out.push_back(t.activity);
        return;
    case TreeOp::Tau:
        return;
    case TreeOp::Seq:
        for (const auto& child : t.children) sample_into(child, rng, max_unroll, out);
        return;
    case TreeOp::Xor:
        if (!t.children.empty())
            sample_into(t.children[rng.below(t.children.size())], rng, max_unroll, out);
        return;
    case TreeOp::And: {
        std::vector<ActivityTrace> parts(t.children.size());
        for (std::size_t i = 0; i < t.children.size(); ++i)
            sample_into(t.children[i], rng, max_unroll, parts[i]);
        // Uniform merge: pick the next source weighted by remaining length.
        std::vector<std::size_t> at(parts.size(), 0);
        std::size_t total = 0;
        for (const auto& p : parts) total += p.size();
        while (total > 0) {
            std::size_t pick = rng.below(total);
            for (std::size_t i = 0; i < parts.size(); ++i) {
                std::size_t left = parts[i].size() - at[i];
                if (pick < left) {
                    out.push_back(parts[i][at[i]++]);
                    break;
                }
                pick -= left;
            }
            --total;
        }
        return;
    }
    case TreeOp::Loop: {
        if (t.children.empty()) return;
        sample_into(t.children[0], rng, max_unroll, out);
        std::size_t rounds = 0;
        while (rounds < max_unroll && rng.chance(0.5)) {
            if (t.children.size() > 1)
                sample_into(t.children[1 + rng.below(t.children.size() - 1)], rng,
                            max_unroll, out);
            sample_into(t.children[0], rng, max_unroll, out);
            ++rounds;
        }
        return;
    }
    }
}

void apply_noise(ActivityTrace& trace, Rng& rng,
                 const std::vector<std::string>& alphabet) {
    switch (rng.below(3)) {
    case 0: { // swap
        if (trace.size() < 2) return;
        std::size_t i = rng.below(trace.size());
        std::size_t j = rng.below(trace.size());
        std::swap(trace[i], trace[j]);
        return;
    }
    case 1: { // insert
        if (alphabet.empty()) return;
        std::size_t pos = rng.below(trace.size() + 1);
        trace.insert(trace.begin() + static_cast<std::ptrdiff_t>(pos),
                     alphabet[rng.below(alphabet.size())]);
        return;
    }
    default: // drop
        if (trace.empty()) return;
        trace.erase(trace.begin() + static_cast<std::ptrdiff_t>(rng.below(trace.size())));
        return;
    }
}

std::string pad_number(std::uint64_t value, std::size_t width) {
    std::string s = std::to_string(value);
    if (s.size() < width) s.insert(0, width - s.size(), '0');
    return s;
}

} // namespace

EventLog sample_log(const ProcessTree& t, const GenConfig& cfg) {
    if (cfg.noise_rate < 0.0 || cfg.noise_rate > 1.0)
        throw ConfigError("noise rate must lie in [0,1]");
    Rng rng(cfg.seed);
    const auto alphabet_set = t.activities();
    const std::vector<std::string> alphabet(alphabet_set.begin(), alphabet_set.end());
    const std::size_t width = std::to_string(cfg.n_traces).size();

    EventLog log;
    for (std::uint64_t i = 0; i < cfg.n_traces; ++i) {
        ActivityTrace acts;
        sample_into(t, rng, cfg.max_loop_unrollings, acts);
        if (cfg.noise_rate > 0.0 && rng.chance(cfg.noise_rate))
            apply_noise(acts, rng, alphabet);

        Trace trace;
        trace.case_id = cfg.case_prefix + pad_number(i + 1, width);
        for (std::size_t j = 0; j < acts.size(); ++j) {
            Event e;
            e.case_id = trace.case_id;
            e.action = acts[j];
            e.timestamp =
                cfg.timestamp_start + static_cast<std::int64_t>(j) * cfg.timestamp_step;
            trace.events.push_back(std::move(e));
        }
        log.traces.push_back(std::move(trace));
    }
    return log;
}

namespace {

void df_union(TreeDfRelation& into, const TreeDfRelation& from) {
    into.activities.insert(from.activities.begin(), from.activities.end());
    into.edges.insert(from.edges.begin(), from.edges.end());
}

void cross_edges(TreeDfRelation& into, const std::set<std::string>& from,
                 const std::set<std::string>& to) {
    for (const auto& a : from)
        for (const auto& b : to) into.edges.emplace(a, b);
}

} // namespace

TreeDfRelation tree_df_relation(const ProcessTree& t) {
    TreeDfRelation r;
    switch (t.op) {
    case TreeOp::Leaf:
        r.activities.insert(t.activity);
        r.start_acts.insert(t.activity);
        r.end_acts.insert(t.activity);
        return r;
    case TreeOp::Tau:
        r.can_be_empty = true;
        return r;
    case TreeOp::Seq: {
        std::vector<TreeDfRelation> parts;
        for (const auto& child : t.children) parts.push_back(tree_df_relation(child));
        r.can_be_empty = true;
        for (const auto& p : parts) {
            df_union(r, p);
            r.can_be_empty = r.can_be_empty && p.can_be_empty;
        }
        // A child's ends meet the starts of every later child reachable
        // across empty-capable gaps.
        for (std::size_t i = 0; i < parts.size(); ++i)
            for (std::size_t j = i + 1; j < parts.size(); ++j) {
                cross_edges(r, parts[i].end_acts, parts[j].start_acts);
                if (!parts[j].can_be_empty) break;
            }
        bool open = true;
        for (const auto& p : parts) {
            if (open) r.start_acts.insert(p.start_acts.begin(), p.start_acts.end());
            open = open && p.can_be_empty;
        }
        open = true;
        for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
            if (open) r.end_acts.insert(it->end_acts.begin(), it->end_acts.end());
            open = open && it->can_be_empty;
        }
        return r;
    }
    case TreeOp::Xor: {
        for (const auto& child : t.children) {
            TreeDfRelation p = tree_df_relation(child);
            df_union(r, p);
            r.start_acts.insert(p.start_acts.begin(), p.start_acts.end());
            r.end_acts.insert(p.end_acts.begin(), p.end_acts.end());
            r.can_be_empty = r.can_be_empty || p.can_be_empty;
        }
        return r;
    }
    case TreeOp::And: {
        std::vector<TreeDfRelation> parts;
        for (const auto& child : t.children) parts.push_back(tree_df_relation(child));
        r.can_be_empty = true;
        for (const auto& p : parts) {
            df_union(r, p);
            r.start_acts.insert(p.start_acts.begin(), p.start_acts.end());
            r.end_acts.insert(p.end_acts.begin(), p.end_acts.end());
            r.can_be_empty = r.can_be_empty && p.can_be_empty;
        }
        // Any event of one branch may directly precede any event of another.
        for (std::size_t i = 0; i < parts.size(); ++i)
            for (std::size_t j = 0; j < parts.size(); ++j)
                if (i != j) cross_edges(r, parts[i].activities, parts[j].activities);
        return r;
    }
    case TreeOp::Loop: {
        if (t.children.empty()) {
            r.can_be_empty = true;
            return r;
        }
        TreeDfRelation body = tree_df_relation(t.children[0]);
        std::vector<TreeDfRelation> redos;
        for (std::size_t i = 1; i < t.children.size(); ++i)
            redos.push_back(tree_df_relation(t.children[i]));

        df_union(r, body);
        for (const auto& p : redos) df_union(r, p);
        r.start_acts = body.start_acts;
        r.end_acts = body.end_acts;
        r.can_be_empty = body.can_be_empty;

        bool some_redo_empty = redos.empty();
        for (const auto& p : redos) {
            cross_edges(r, body.end_acts, p.start_acts);
            cross_edges(r, p.end_acts, body.start_acts);
            some_redo_empty = some_redo_empty || p.can_be_empty;
            if (body.can_be_empty) {
                r.start_acts.insert(p.start_acts.begin(), p.start_acts.end());
                r.end_acts.insert(p.end_acts.begin(), p.end_acts.end());
                for (const auto& q : redos) cross_edges(r, p.end_acts, q.start_acts);
            }
        }
        if (some_redo_empty && !redos.empty())
            cross_edges(r, body.end_acts, body.start_acts);
        return r;
    }
    }
    return r;
}

namespace {

// Dominant passing pattern: open the unit forum thread, check the quiz,
// read the unit page, possibly hand in the assignment, then attempt the
// quiz until it closes and review the attempt.
const ProcessTree& pass_tree() {
    using PT = ProcessTree;
    static const ProcessTree t = PT::make(
        TreeOp::Seq,
        {PT::leaf("forum view discussion"), PT::leaf("quiz view"),
         PT::make(TreeOp::Loop, {PT::leaf("page view"), PT::tau()}),
         PT::make(TreeOp::Xor,
                  {PT::make(TreeOp::Seq,
                            {PT::leaf("assign view"), PT::leaf("assign submit")}),
                   PT::tau()}),
         PT::make(TreeOp::Loop,
                  {PT::leaf("quiz attempt"), PT::leaf("quiz continue attempt")}),
         PT::leaf("quiz close attempt"), PT::leaf("quiz review"),
         PT::make(TreeOp::Xor, {PT::leaf("forum add post"), PT::tau()})});
    return t;
}

// Failing pattern: jump straight at the quiz, skim one page, retry until the
// quiz closes, and visit the forum last if at all.
const ProcessTree& fail_tree() {
    using PT = ProcessTree;
    static const ProcessTree t = PT::make(
        TreeOp::Seq,
        {PT::leaf("quiz attempt"), PT::leaf("quiz view"), PT::leaf("page view"),
         PT::make(TreeOp::Loop,
                  {PT::leaf("quiz attempt"), PT::leaf("quiz continue attempt")}),
         PT::leaf("quiz close attempt"),
         PT::make(TreeOp::Xor, {PT::leaf("forum view forum"), PT::tau()})});
    return t;
}

// The final two units are exam revision: both cohorts scatter bursts over
// course areas the weekly routine never touches, in no fixed order.
const ProcessTree& revision_tree() {
    using PT = ProcessTree;
    static const ProcessTree t = PT::make(
        TreeOp::And,
        {PT::leaf("forum add discussion"), PT::leaf("forum update post"),
         PT::leaf("quiz view summary"), PT::leaf("URL view"),
         PT::leaf("resource view")});
    return t;
}

const char* kIrrelevant[] = {"calendar view", "profile view", "course view"};

} // namespace

SynthCourse synth_course(int units, int students, double pass_ratio,
                         std::uint64_t seed) {
    if (pass_ratio < 0.0 || pass_ratio > 1.0)
        throw ConfigError("pass ratio must lie in [0,1]");
    if (units < 1 || students < 1)
        throw ConfigError("synth_course needs at least one unit and one student");

    Rng rng(seed);
    SynthCourse course;

    const std::size_t unit_width = std::to_string(units).size();
    const std::size_t student_width = std::to_string(students).size();
    for (int u = 1; u <= units; ++u)
        course.units.entries.push_back(
            {"unit " + pad_number(static_cast<std::uint64_t>(u), unit_width), u});
    course.units.unit_count = units;

    const int n_pass =
        static_cast<int>(pass_ratio * students + 0.5); // round half up
    const std::int64_t course_start = 1362355200;      // 2013-03-04T00:00:00Z
    const std::int64_t unit_block = 7 * 24 * 3600;     // one unit per week

    for (int s = 1; s <= students; ++s) {
        const bool passes = s <= n_pass;
        Trace trace;
        trace.case_id =
            "student" + pad_number(static_cast<std::uint64_t>(s), student_width);

        double grade = passes ? 5.0 + rng.unit() * 5.0 : rng.unit() * 4.9;
        grade = static_cast<double>(static_cast<int>(grade * 10.0 + 0.5)) / 10.0;
        course.grades.grades[trace.case_id] = std::min(grade, 10.0);

        for (int u = 1; u <= units; ++u) {
            // One to three study sessions per unit.
            int sessions = 1 + (rng.chance(0.65) ? 1 : 0) + (rng.chance(0.5) ? 1 : 0);
            const bool revision = units >= 4 && u > units - 2;
            const std::string info =
                "unit " + pad_number(static_cast<std::uint64_t>(u), unit_width);
            std::int64_t clock = course_start + (u - 1) * unit_block +
                                 static_cast<std::int64_t>(rng.below(3600));
            for (int session = 0; session < sessions; ++session) {
                ActivityTrace acts;
                const ProcessTree& style =
                    revision ? revision_tree() : (passes ? pass_tree() : fail_tree());
                sample_into(style, rng, 2, acts);
                for (const auto& action : acts) {
                    clock += 60 + static_cast<std::int64_t>(rng.below(240));
                    Event e;
                    e.case_id = trace.case_id;
                    e.action = action;
                    e.timestamp = clock;
                    e.info = info;
                    trace.events.push_back(e);
                    if (rng.chance(0.02)) trace.events.push_back(trace.events.back());
                    if (rng.chance(0.03)) {
                        clock += 30 + static_cast<std::int64_t>(rng.below(60));
                        Event stray;
                        stray.case_id = trace.case_id;
                        stray.action = kIrrelevant[rng.below(3)];
                        stray.timestamp = clock;
                        stray.info = rng.below(3) == 0 ? "site area" : info;
                        trace.events.push_back(std::move(stray));
                    }
                }
                clock += 1800 + static_cast<std::int64_t>(rng.below(3600));
            }
        }
        course.log.traces.push_back(std::move(trace));
    }
    sort_and_validate(course.log);
    return course;
}

} // namespace epm
