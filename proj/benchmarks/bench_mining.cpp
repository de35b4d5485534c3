#include "epm/discovery.hpp"
#include "epm/loggen.hpp"
#include "epm/petri.hpp"
#include "epm/preprocess.hpp"
#include "epm/process_tree.hpp"
#include "epm/replay.hpp"
#include "epm/xes.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace epm;

EventLog course_log() {
    static EventLog log = [] {
        SynthCourse course = synth_course(11, 101, 0.72, 7);
        return apply_coding(dedup(course.log), CodingScheme::default_scheme()).log;
    }();
    return log;
}

void bm_build_dfg(benchmark::State& state) {
    const ActivityLog log = ActivityLog::from_event_log(course_log());
    for (auto _ : state) benchmark::DoNotOptimize(build_dfg(log));
}
BENCHMARK(bm_build_dfg);

void bm_discover_basic(benchmark::State& state) {
    const ActivityLog log = ActivityLog::from_event_log(course_log());
    for (auto _ : state) benchmark::DoNotOptimize(discover(log));
}
BENCHMARK(bm_discover_basic);

void bm_discover_infrequent(benchmark::State& state) {
    const ActivityLog log = ActivityLog::from_event_log(course_log());
    for (auto _ : state) benchmark::DoNotOptimize(discover_infrequent(log, 0.2));
}
BENCHMARK(bm_discover_infrequent);

void bm_fitness(benchmark::State& state) {
    const ActivityLog log = ActivityLog::from_event_log(course_log());
    const WorkflowNet net = tree_to_net(discover_infrequent(log, 0.2));
    for (auto _ : state) benchmark::DoNotOptimize(fitness(net, log));
}
BENCHMARK(bm_fitness);

void bm_xes_write(benchmark::State& state) {
    const EventLog log = course_log();
    for (auto _ : state) benchmark::DoNotOptimize(write_xes(log));
}
BENCHMARK(bm_xes_write);

void bm_xes_read(benchmark::State& state) {
    const std::string xml = write_xes(course_log());
    for (auto _ : state) benchmark::DoNotOptimize(read_xes(xml));
}
BENCHMARK(bm_xes_read);

} // namespace

BENCHMARK_MAIN();
