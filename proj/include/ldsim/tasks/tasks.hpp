#pragma once

// Benchmark task definitions loaded from a directory per task:
//
//   task.properties   key=value metadata (ideal counts, duration, processes)
//   init/*.ru         updates run once before iteration 0, in file order
//   update/*.ru       updates run on every tick, in file order
//   fault/*.rq        SELECT queries; the file stem is the fault id
//
// Relative IRIs in the query files resolve against the dataset base. Every
// shipped fault query binds ?n to the property node of a faulty light, and
// toggling that light fixes the fault.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ldsim/metrics/metrics.hpp"
#include "ldsim/sim/engine.hpp"

namespace ldsim::tasks {

using rdf::Dataset;
using rdf::Term;

class TaskError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class TaskClass { Single, Continuous };

struct TaskSpec {
    std::string id;
    std::string title;
    TaskClass task_class = TaskClass::Single;
    std::int64_t duration = 1440;
    bool reasoning = false;
    bool sunlight = false;
    bool occupancy = false;
    int scope = 0;  // lights the task is about
    int ideal_reads = 0, ideal_writes = 0, ideal_loops = 0;
    // Fault query variables bound to graphs the oracle reads before a fix.
    std::vector<std::string> oracle_reads;

    std::vector<sim::NamedUpdate> init_updates;
    std::vector<sim::NamedUpdate> updates;
    std::vector<metrics::FaultQuery> faults;

    std::map<std::string, std::string> properties;
};

// TS1..TS3, TC1..TC7.
const std::vector<std::string>& task_ids();
std::string default_task_dir();

TaskSpec load_task(const std::string& id, const std::string& root = default_task_dir(),
                   const std::string& base = "http://localhost:8080/");

sim::SimEnvironment make_environment(const TaskSpec& task, const Dataset& building, std::uint64_t seed,
                                     const std::string& base = "http://localhost:8080/");
sim::RunParams run_params(const TaskSpec& task, std::int64_t timeslot_ms = 500);

// Graph holding a property node ("<g>#it" -> "<g>").
Term graph_of(Term node);
// "on" <-> "off".
Term toggled(Term value);
// The property graph of `node` with its light value toggled.
std::vector<rdf::Triple> toggled_graph(const Dataset& d, Term node);

// Light property nodes of every current fault.
std::set<Term> faulty_lights(const TaskSpec& task, const sim::Simulation& s);

// Advances a dry run to `from`, toggles every faulty light directly, then
// keeps ticking up to `ticks` times. True when no fault reappears.
bool single_loop_check(const TaskSpec& task, const sim::SimEnvironment& env, const sim::RunParams& params,
                       std::int64_t from = 0, std::int64_t ticks = 120);

// One slot of the oracle agent: the graphs to GET, then the graphs to PUT
// with their new contents. Computed from privileged access to the current
// state; reads are deduplicated within the slot.
struct OraclePlan {
    std::vector<std::string> reads;
    std::vector<std::pair<std::string, std::vector<rdf::Triple>>> writes;
    bool empty() const { return reads.empty() && writes.empty(); }
};
OraclePlan oracle_plan(const TaskSpec& task, const sim::Simulation& s);

}  // namespace ldsim::tasks
