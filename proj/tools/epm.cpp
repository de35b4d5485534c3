// epm: command-line front end for the educational process mining pipeline.
// Subcommands mirror the pipeline stages; every file-producing stage drops a
// manifest.json next to its outputs so any stage can be re-run bit for bit.

#include "epm/csv.hpp"
#include "epm/discovery.hpp"
#include "epm/errors.hpp"
#include "epm/event_log.hpp"
#include "epm/loggen.hpp"
#include "epm/manifest.hpp"
#include "epm/petri.hpp"
#include "epm/preprocess.hpp"
#include "epm/process_tree.hpp"
#include "epm/replay.hpp"
#include "epm/report.hpp"
#include "epm/viz.hpp"
#include "epm/xes.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace {

using epm::ConfigError;
using epm::ParseError;
using ArgMap = std::map<std::string, std::string>;

std::string get(const ArgMap& args, const std::string& key) {
    auto it = args.find(key);
    return it == args.end() ? std::string{} : it->second;
}

bool flag_set(const ArgMap& args, const std::string& key) {
    return get(args, key) == "1";
}

double parse_double(const ArgMap& args, const std::string& key) {
    const std::string text = get(args, key);
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ConfigError("--" + key + ": not a number: '" + text + "'");
    }
    if (used != text.size())
        throw ConfigError("--" + key + ": not a number: '" + text + "'");
    return value;
}

std::int64_t parse_int(const ArgMap& args, const std::string& key) {
    const std::string text = get(args, key);
    std::size_t used = 0;
    std::int64_t value = 0;
    try {
        value = std::stoll(text, &used);
    } catch (const std::exception&) {
        throw ConfigError("--" + key + ": not an integer: '" + text + "'");
    }
    if (used != text.size())
        throw ConfigError("--" + key + ": not an integer: '" + text + "'");
    return value;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << content;
    if (!out) throw ConfigError("write failed: " + path);
}

std::string dir_of(const std::string& path) {
    auto parent = std::filesystem::path(path).parent_path();
    return parent.empty() ? std::string{"."} : parent.string();
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create directory " + dir);
}

void emit_manifest(const std::string& command, const ArgMap& args,
                   std::vector<std::string> inputs, std::vector<std::string> outputs,
                   const std::string& dir) {
    epm::RunManifest m;
    m.command = command;
    m.args = args;
    m.inputs = std::move(inputs);
    m.outputs = std::move(outputs);
    m.save(dir + "/manifest.json");
}

// Writes data to --out (plus a manifest) or to stdout when --out is empty.
void deliver(const std::string& data, const std::string& command, const ArgMap& args,
             const std::vector<std::string>& inputs) {
    const std::string out = get(args, "out");
    if (out.empty()) {
        std::cout << data;
        return;
    }
    ensure_dir(dir_of(out));
    write_file(out, data);
    emit_manifest(command, args, inputs, {out}, dir_of(out));
}

// Inputs may be raw Moodle CSV or XES; picked by extension.
epm::EventLog load_log(const std::string& path) {
    const std::string text = read_file(path);
    auto ext = std::filesystem::path(path).extension().string();
    if (ext == ".csv") return epm::parse_moodle_csv(text);
    return epm::read_xes(text);
}

epm::ProcessTree load_tree(const std::string& path) {
    return epm::parse_tree(read_file(path));
}

std::string describe(const epm::EventLog& log) {
    auto stats = epm::log_stats(log);
    return std::to_string(stats.num_cases) + " cases, " +
           std::to_string(stats.num_events) + " events";
}

std::string pad2(int value, int width) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%0*d", width, value);
    return buf;
}

std::string fmt_fitness(double f) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", f);
    return buf;
}

// "YYYY-MM-DD HH:MM:SS", the shape of a raw Moodle export.
std::string moodle_time(std::int64_t epoch_seconds) {
    std::string iso = epm::format_iso8601(epoch_seconds);
    iso[10] = ' ';
    iso.pop_back(); // trailing Z
    return iso;
}

void run_convert(const ArgMap& a) {
    const std::string in = get(a, "in");
    epm::CsvSchema schema;
    const std::string delim = get(a, "delimiter");
    if (delim.size() != 1)
        throw ConfigError("--delimiter must be a single character");
    schema.delimiter = delim[0];
    schema.has_header = !flag_set(a, "no_header");
    schema.time_format = get(a, "time_format");

    epm::EventLog log = epm::parse_moodle_csv(read_file(in), schema);
    std::cerr << "convert: " << describe(log) << "\n";
    deliver(epm::write_xes(log), "convert", a, {in});
}

void run_preprocess(const ArgMap& a) {
    const std::string in = get(a, "in");
    epm::EventLog log = load_log(in);
    std::vector<std::string> inputs{in};

    const std::string salt = get(a, "salt");
    if (!salt.empty()) log = epm::anonymize(log, salt);

    const std::size_t before_dedup = log.num_events();
    log = epm::dedup(log);
    std::cerr << "preprocess: dropped " << before_dedup - log.num_events()
              << " duplicate events\n";

    const std::string exclude = get(a, "exclude");
    if (!exclude.empty()) {
        inputs.push_back(exclude);
        std::istringstream lines(read_file(exclude));
        std::set<std::string> excluded;
        std::string line;
        while (std::getline(lines, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) excluded.insert(line);
        }
        const std::size_t before = log.traces.size();
        log = epm::filter_cases(log, excluded);
        std::cerr << "preprocess: dropped " << before - log.traces.size()
                  << " excluded cases\n";
    }

    const epm::CodingScheme* scheme = &epm::CodingScheme::default_scheme();
    epm::CodingScheme loaded;
    const std::string scheme_path = get(a, "scheme");
    if (!scheme_path.empty()) {
        inputs.push_back(scheme_path);
        std::istringstream stream(read_file(scheme_path));
        loaded = epm::CodingScheme::load_tsv(stream);
        scheme = &loaded;
    }

    const std::string policy_name = get(a, "on_unknown");
    epm::UnknownActionPolicy policy;
    if (policy_name == "drop")
        policy = epm::UnknownActionPolicy::Drop;
    else if (policy_name == "error")
        policy = epm::UnknownActionPolicy::Error;
    else
        throw ConfigError("--on-unknown must be 'drop' or 'error'");

    epm::CodingResult coded = epm::apply_coding(log, *scheme, policy);
    std::cerr << "preprocess: dropped " << coded.dropped_events
              << " unmapped events; " << describe(coded.log) << " remain\n";
    deliver(epm::write_xes(coded.log), "preprocess", a, inputs);
}

void run_split(const ArgMap& a) {
    const std::string in = get(a, "in");
    const std::string by_grade = get(a, "by_grade");
    const std::string by_unit = get(a, "by_unit");
    const std::string out_dir = get(a, "out_dir");
    if (by_grade.empty() && by_unit.empty())
        throw ConfigError("split needs --by-grade and/or --by-unit");

    epm::EventLog log = load_log(in);
    std::vector<std::string> inputs{in};
    ensure_dir(out_dir);
    std::vector<std::string> outputs;

    auto save_log = [&](const std::string& name, const epm::EventLog& part) {
        const std::string path = out_dir + "/" + name;
        write_file(path, epm::write_xes(part));
        outputs.push_back(path);
        std::cerr << "split: " << name << ": " << describe(part) << "\n";
    };

    // Cohorts first; unit files nest inside each cohort when both axes are
    // requested.
    std::vector<std::pair<std::string, const epm::EventLog*>> cohorts;
    epm::GradeSplit gs;
    if (!by_grade.empty()) {
        inputs.push_back(by_grade);
        std::istringstream stream(read_file(by_grade));
        auto grades = epm::GradeBook::load_csv(stream);
        gs = epm::split_by_grade(log, grades, parse_double(a, "pass_mark"));
        save_log("pass.xes", gs.pass);
        save_log("fail.xes", gs.fail);
        cohorts = {{"pass_", &gs.pass}, {"fail_", &gs.fail}};
    } else {
        cohorts = {{"", &log}};
    }

    if (!by_unit.empty()) {
        inputs.push_back(by_unit);
        std::istringstream stream(read_file(by_unit));
        auto rule = epm::UnitRule::load_tsv(stream);
        const int width = static_cast<int>(std::to_string(rule.unit_count).size());
        for (const auto& [prefix, cohort_log] : cohorts) {
            epm::UnitSplit us = epm::split_by_unit(*cohort_log, rule);
            for (const auto& [unit, unit_log] : us.units)
                save_log(prefix + "unit_" + pad2(unit, width) + ".xes", unit_log);
            if (!us.unassigned.traces.empty())
                save_log(prefix + "unassigned.xes", us.unassigned);
        }
    }

    emit_manifest("split", a, inputs, outputs, out_dir);
}

void run_discover(const ArgMap& a) {
    const std::string in = get(a, "in");
    const std::string variant = get(a, "variant");
    epm::ActivityLog log = epm::ActivityLog::from_event_log(load_log(in));

    epm::ProcessTree tree;
    if (variant == "basic")
        tree = epm::discover(log);
    else if (variant == "infrequent")
        tree = epm::discover_infrequent(log, parse_double(a, "threshold"));
    else
        throw ConfigError("--variant must be 'basic' or 'infrequent'");

    std::cerr << "discover: " << log.variants.size() << " variants over "
              << log.alphabet().size() << " activities\n";
    deliver(epm::format_tree(tree) + "\n", "discover", a, {in});
}

void run_render(const ArgMap& a) {
    const std::string tree_path = get(a, "tree");
    epm::ProcessTree tree = load_tree(tree_path);
    std::vector<std::string> inputs{tree_path};

    std::string dot;
    if (flag_set(a, "net")) {
        dot = epm::net_to_dot(epm::tree_to_net(tree));
    } else {
        epm::ActivityLog log;
        const std::string in = get(a, "in");
        if (!in.empty()) {
            inputs.push_back(in);
            log = epm::ActivityLog::from_event_log(load_log(in));
        }
        epm::AnnotatedModel model = epm::annotate(tree, log);
        for (const auto& warning : model.warnings)
            std::cerr << "render: warning: " << warning << "\n";
        dot = epm::to_dot(model);
    }
    deliver(dot, "render", a, inputs);
}

void run_fitness(const ArgMap& a) {
    const std::string in = get(a, "in");
    const std::string tree_path = get(a, "tree");
    epm::ActivityLog log = epm::ActivityLog::from_event_log(load_log(in));
    epm::WorkflowNet net = epm::tree_to_net(load_tree(tree_path));
    deliver(fmt_fitness(epm::fitness(net, log)) + "\n", "fitness", a,
            {in, tree_path});
}

void run_report(const ArgMap& a) {
    using epm::CellKey;
    using epm::Cohort;

    const std::string in = get(a, "in");
    const std::string grades_path = get(a, "grades");
    const std::string units_path = get(a, "units");
    const std::string variant = get(a, "variant");
    const double threshold = parse_double(a, "threshold");
    if (variant != "basic" && variant != "infrequent")
        throw ConfigError("--variant must be 'basic' or 'infrequent'");

    epm::EventLog log = load_log(in);
    std::istringstream grade_stream(read_file(grades_path));
    auto grades = epm::GradeBook::load_csv(grade_stream);
    std::istringstream unit_stream(read_file(units_path));
    auto rule = epm::UnitRule::load_tsv(unit_stream);

    epm::GradeSplit gs = epm::split_by_grade(log, grades, parse_double(a, "pass_mark"));
    const std::vector<std::pair<Cohort, const epm::EventLog*>> cohorts{
        {Cohort::Pass, &gs.pass}, {Cohort::Fail, &gs.fail}, {Cohort::All, &log}};

    std::map<CellKey, epm::ActivityLog> cell_logs;
    for (const auto& [cohort, cohort_log] : cohorts) {
        if (cohort_log->traces.empty()) continue;
        cell_logs[{0, cohort}] = epm::ActivityLog::from_event_log(*cohort_log);
        epm::UnitSplit us = epm::split_by_unit(*cohort_log, rule);
        for (const auto& [unit, unit_log] : us.units)
            cell_logs[{unit, cohort}] = epm::ActivityLog::from_event_log(unit_log);
    }

    std::map<CellKey, epm::WorkflowNet> cell_nets;
    for (const auto& [key, cell_log] : cell_logs) {
        epm::ProcessTree tree = variant == "basic"
                                    ? epm::discover(cell_log)
                                    : epm::discover_infrequent(cell_log, threshold);
        cell_nets[key] = epm::tree_to_net(tree);
    }

    std::map<CellKey, epm::FitnessCell> cells;
    for (const auto& [key, cell_log] : cell_logs)
        cells[key] = {&cell_nets.at(key), &cell_log};

    std::string label = "inductive miner";
    if (variant == "infrequent") {
        char buf[64];
        std::snprintf(buf, sizeof buf, "inductive miner infrequent, threshold %.2f",
                      threshold);
        label = buf;
    }
    epm::FitnessReport report = epm::fitness_table(cells, label);
    std::cerr << "report: " << report.cells.size() << " cells\n";

    const std::string format = get(a, "format");
    std::string text;
    if (format == "text")
        text = epm::render_report_text(report);
    else if (format == "csv")
        text = epm::render_report_csv(report);
    else if (format == "markdown")
        text = epm::render_report_markdown(report);
    else
        throw ConfigError("--format must be 'text', 'csv' or 'markdown'");

    deliver(text, "report", a, {in, grades_path, units_path});
}

void run_simulate(const ArgMap& a) {
    const std::string out_dir = get(a, "out_dir");
    ensure_dir(out_dir);
    const std::string tree_path = get(a, "tree");

    if (!tree_path.empty()) {
        // Model-sampling mode: walk a given tree, emit one XES log.
        epm::GenConfig cfg;
        cfg.n_traces = static_cast<std::uint64_t>(parse_int(a, "n"));
        cfg.seed = static_cast<std::uint64_t>(parse_int(a, "seed"));
        cfg.noise_rate = parse_double(a, "noise");
        epm::EventLog log = epm::sample_log(load_tree(tree_path), cfg);
        const std::string path = out_dir + "/sample.xes";
        write_file(path, epm::write_xes(log));
        std::cerr << "simulate: " << describe(log) << "\n";
        emit_manifest("simulate", a, {tree_path}, {path}, out_dir);
        return;
    }

    // Course mode: fabricate a raw Moodle export plus its grade book and
    // unit rules.
    const int units = static_cast<int>(parse_int(a, "units"));
    const int students = static_cast<int>(parse_int(a, "students"));
    epm::SynthCourse course =
        epm::synth_course(units, students, parse_double(a, "pass_ratio"),
                          static_cast<std::uint64_t>(parse_int(a, "seed")));

    std::ostringstream csv;
    csv << "course,ip,time,name,action,info\n";
    for (const auto& trace : course.log.traces)
        for (const auto& e : trace.events)
            csv << "course01,0.0.0.0," << moodle_time(e.timestamp) << ','
                << epm::csv_escape(e.case_id, ',') << ','
                << epm::csv_escape(e.action, ',') << ','
                << epm::csv_escape(e.info, ',') << '\n';

    std::ostringstream grades;
    grades << "name,grade\n";
    for (const auto& [name, grade] : course.grades.grades) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.1f", grade);
        grades << name << ',' << buf << '\n';
    }

    std::ostringstream units_tsv;
    for (const auto& entry : course.units.entries)
        units_tsv << entry.pattern << '\t' << entry.unit << '\n';

    const std::string csv_path = out_dir + "/course.csv";
    const std::string grades_path = out_dir + "/grades.csv";
    const std::string units_path = out_dir + "/units.tsv";
    write_file(csv_path, csv.str());
    write_file(grades_path, grades.str());
    write_file(units_path, units_tsv.str());
    std::cerr << "simulate: " << describe(course.log) << "\n";
    emit_manifest("simulate", a, {}, {csv_path, grades_path, units_path}, out_dir);
}

void dispatch(const std::string& command, const ArgMap& args);

void run_rerun(const ArgMap& a) {
    epm::RunManifest m = epm::RunManifest::load(get(a, "manifest"));
    const bool check = flag_set(a, "check");

    std::map<std::string, std::string> before;
    if (check)
        for (const auto& path : m.outputs)
            before[path] = read_file(path);

    dispatch(m.command, m.args);

    if (check) {
        bool ok = true;
        for (const auto& path : m.outputs) {
            if (read_file(path) == before.at(path)) {
                std::cerr << "rerun: identical: " << path << "\n";
            } else {
                std::cerr << "rerun: MISMATCH: " << path << "\n";
                ok = false;
            }
        }
        if (!ok) throw ParseError("rerun outputs differ from recorded run");
    }
}

void dispatch(const std::string& command, const ArgMap& args) {
    if (command == "convert") run_convert(args);
    else if (command == "preprocess") run_preprocess(args);
    else if (command == "split") run_split(args);
    else if (command == "discover") run_discover(args);
    else if (command == "render") run_render(args);
    else if (command == "fitness") run_fitness(args);
    else if (command == "report") run_report(args);
    else if (command == "simulate") run_simulate(args);
    else throw ConfigError("unknown command in manifest: " + command);
}

// One string slot per flag; booleans are "0"/"1". Keeping everything as
// strings makes the manifest round-trip exact.
struct FlagSet {
    ArgMap values;

    CLI::Option* option(CLI::App* cmd, const std::string& flag,
                        const std::string& key, const std::string& desc,
                        const std::string& def = {}) {
        values[key] = def;
        auto* opt = cmd->add_option_function<std::string>(
            flag, [this, key](const std::string& v) { values[key] = v; }, desc);
        if (!def.empty()) opt->default_str(def);
        return opt;
    }

    void flag(CLI::App* cmd, const std::string& flag_name, const std::string& key,
              const std::string& desc) {
        values[key] = "0";
        cmd->add_flag_callback(
            flag_name, [this, key] { values[key] = "1"; }, desc);
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"educational process mining pipeline"};
    app.require_subcommand(1);

    std::map<std::string, FlagSet> flags;

    auto* convert = app.add_subcommand("convert", "raw Moodle CSV to XES");
    {
        auto& f = flags["convert"];
        f.option(convert, "--in", "in", "input CSV")->required();
        f.option(convert, "--out", "out", "output XES (default stdout)");
        f.option(convert, "--delimiter", "delimiter", "CSV delimiter", ",");
        f.option(convert, "--time-format", "time_format",
                 "strptime format for the time column (default auto)");
        f.flag(convert, "--no-header", "no_header", "columns by index, no header row");
    }

    auto* preprocess =
        app.add_subcommand("preprocess", "anonymize, dedup, filter and code a log");
    {
        auto& f = flags["preprocess"];
        f.option(preprocess, "--in", "in", "input log (.xes or .csv)")->required();
        f.option(preprocess, "--out", "out", "output XES (default stdout)");
        f.option(preprocess, "--salt", "salt", "pseudonymize case ids with this salt");
        f.option(preprocess, "--exclude", "exclude",
                 "file with case ids to drop, one per line");
        f.option(preprocess, "--scheme", "scheme",
                 "coding scheme TSV (default: built-in 16-action scheme)");
        f.option(preprocess, "--on-unknown", "on_unknown",
                 "unmapped actions: drop or error", "drop");
    }

    auto* split = app.add_subcommand("split", "split a log by grade cohort and unit");
    {
        auto& f = flags["split"];
        f.option(split, "--in", "in", "input log (.xes or .csv)")->required();
        f.option(split, "--out-dir", "out_dir", "output directory")->required();
        f.option(split, "--by-grade", "by_grade", "grade book CSV (case_id,grade)");
        f.option(split, "--by-unit", "by_unit", "unit rules TSV (pattern<TAB>unit)");
        f.option(split, "--pass-mark", "pass_mark", "pass boundary", "5.0");
    }

    auto* discover = app.add_subcommand("discover", "mine a process tree from a log");
    {
        auto& f = flags["discover"];
        f.option(discover, "--in", "in", "input log (.xes or .csv)")->required();
        f.option(discover, "--out", "out", "output tree text (default stdout)");
        f.option(discover, "--variant", "variant", "basic or infrequent", "basic");
        f.option(discover, "--threshold", "threshold",
                 "noise threshold for the infrequent variant", "0.2");
    }

    auto* render = app.add_subcommand("render", "render a tree (or its net) as DOT");
    {
        auto& f = flags["render"];
        f.option(render, "--tree", "tree", "process tree text file")->required();
        f.option(render, "--in", "in", "log for frequency annotations (.xes or .csv)");
        f.option(render, "--out", "out", "output DOT (default stdout)");
        f.flag(render, "--net", "net", "render the workflow net instead");
    }

    auto* fitness = app.add_subcommand("fitness", "token-replay fitness of tree vs log");
    {
        auto& f = flags["fitness"];
        f.option(fitness, "--in", "in", "input log (.xes or .csv)")->required();
        f.option(fitness, "--tree", "tree", "process tree text file")->required();
        f.option(fitness, "--out", "out", "output file (default stdout)");
    }

    auto* report = app.add_subcommand("report", "per-cohort, per-unit fitness table");
    {
        auto& f = flags["report"];
        f.option(report, "--in", "in", "coded course log (.xes or .csv)")->required();
        f.option(report, "--grades", "grades", "grade book CSV")->required();
        f.option(report, "--units", "units", "unit rules TSV")->required();
        f.option(report, "--out", "out", "output file (default stdout)");
        f.option(report, "--variant", "variant", "basic or infrequent", "infrequent");
        f.option(report, "--threshold", "threshold", "noise threshold", "0.2");
        f.option(report, "--pass-mark", "pass_mark", "pass boundary", "5.0");
        f.option(report, "--format", "format", "text, csv or markdown", "text");
    }

    auto* simulate = app.add_subcommand("simulate", "generate synthetic logs");
    {
        auto& f = flags["simulate"];
        f.option(simulate, "--out-dir", "out_dir", "output directory")->required();
        f.option(simulate, "--units", "units", "course units", "11");
        f.option(simulate, "--students", "students", "students", "101");
        f.option(simulate, "--pass-ratio", "pass_ratio", "fraction passing", "0.72");
        f.option(simulate, "--seed", "seed", "random seed", "1");
        f.option(simulate, "--tree", "tree",
                 "sample this tree instead of fabricating a course");
        f.option(simulate, "--n", "n", "traces to sample in tree mode", "100");
        f.option(simulate, "--noise", "noise", "noise rate in tree mode", "0");
    }

    auto* rerun = app.add_subcommand("rerun", "re-execute a recorded manifest");
    {
        auto& f = flags["rerun"];
        f.option(rerun, "--manifest", "manifest", "manifest.json path")->required();
        f.flag(rerun, "--check", "check", "verify outputs are byte-identical");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << std::flush;
        return 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        if (command == "rerun")
            run_rerun(flags.at(command).values);
        else
            dispatch(command, flags.at(command).values);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
