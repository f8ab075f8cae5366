#pragma once

// Benchmark orchestration: server + agent + metrics for one task.

#include <atomic>
#include <optional>
#include <string>
#include <vector>

#include "ldsim/agent/agent.hpp"
#include "ldsim/metrics/metrics.hpp"
#include "ldsim/server/store.hpp"
#include "ldsim/tasks/tasks.hpp"

namespace ldsim::agent {

// The oracle plans with privileged access to the simulation and then issues
// its plan over HTTP, so that its operations are recorded like any other.
class OracleAgent {
public:
    OracleAgent(server::GraphStore& store, tasks::TaskSpec task, Endpoint endpoint, std::string name = "oracle");
    ~OracleAgent();
    OracleAgent(const OracleAgent&) = delete;
    OracleAgent& operator=(const OracleAgent&) = delete;

    // Plans against the current slot and executes the plan. Returns false
    // once the run has ended.
    bool step();
    const AgentStats& stats() const { return stats_; }

private:
    struct Client;
    server::GraphStore& store_;
    tasks::TaskSpec task_;
    std::unique_ptr<Client> client_;
    AgentStats stats_;
};

// One oracle step per slot until the run ends or `stop` is set.
AgentStats run_oracle(server::GraphStore& store, const tasks::TaskSpec& task, const Endpoint& endpoint,
                      const std::atomic<bool>* stop = nullptr);

enum class AgentKind { None, Oracle, Prefetch, Traversal };
const char* to_string(AgentKind k);
std::optional<AgentKind> agent_kind_from_string(const std::string& s);

struct BenchConfig {
    std::string task_id;
    AgentKind agent = AgentKind::Prefetch;
    std::uint64_t seed = 42;
    std::int64_t timeslot_ms = 1000;
    std::int64_t iterations = -1;  // -1: the task duration
    std::optional<std::int64_t> initial_time;
    std::int64_t poll_ms = 0;
    std::optional<bool> reasoning;  // default: the task's requirement
    std::string base = "http://localhost:8080/";
    std::string task_dir;  // empty: tasks::default_task_dir()
    std::string rule_dir;  // empty: default_rule_dir()
    std::string out_dir;   // empty: no files written
    int port = 0;          // 0: any free port
    int threads = 8;
    std::optional<rdf::Dataset> building;  // default: the synthetic building
};

struct BenchResult {
    metrics::MetricsReport report;
    AgentStats agent;
    metrics::FaultTrace trace;
    metrics::FaultTrace dry;
    std::vector<metrics::OperationRecord> ops;
    std::vector<double> slot_ms;
    std::int64_t deadline_misses = 0;
};

// Dry run for the NFC denominator, then a live run with the agent. The
// report is flagged invalid on tick deadline misses or an agent failure.
BenchResult run_benchmark(const BenchConfig& config);

// The default synthetic building, partitioned and augmented.
const rdf::Dataset& synthetic_building();

}  // namespace ldsim::agent
