#pragma once

// The live graph store behind the Linked Data interface.
//
// Graph Store Protocol with direct addressing: a request path names the
// graph <base><path>. Every graph except the hidden default graph is
// readable; graphs holding a sosa:ActuatableProperty when the run starts
// are writable. Agent writes and ticks are serialized by one mutex; reads
// copy the current immutable snapshot and never wait for a tick.
//
// A run moves through Ready -> Running -> Finished. Slot t lasts from the
// tick into iteration t to the next tick; end_slot() checks the faults of
// slot t and then ticks, or finishes the run after slot k.

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "ldsim/metrics/metrics.hpp"
#include "ldsim/sim/engine.hpp"

namespace ldsim::server {

using rdf::Dataset;
using rdf::Term;

// POST and DELETE are defined for completeness but off by default.
struct Policy {
    bool allow_post = false;
    bool allow_delete = false;
};

struct Response {
    int status = 200;
    std::string body;
    std::string content_type = "text/plain";
};

enum class Phase { Ready, Running, Finished };

class GraphStore {
public:
    // With `manual_clock` the run only advances through end_slot();
    // otherwise a clock thread calls it every timeslot.
    GraphStore(sim::SimEnvironment env, std::vector<metrics::FaultQuery> faults, Policy policy = {},
               bool manual_clock = false);
    ~GraphStore();
    GraphStore(const GraphStore&) = delete;
    GraphStore& operator=(const GraphStore&) = delete;

    const std::string& base() const { return env_.base; }
    std::string sim_iri() const { return env_.base + "sim"; }

    Response get(const std::string& target, std::string_view accept = {}, const std::string& agent = {});
    Response put(const std::string& target, std::string_view body, std::string_view content_type = {},
                 const std::string& agent = {});
    Response post(const std::string& target, std::string_view body, std::string_view content_type = {},
                  const std::string& agent = {});
    Response del(const std::string& target, const std::string& agent = {});

    // Starts a run: 200, or 409 when a run was already started.
    Response start(const sim::RunParams& params);

    // Fault check of the current slot, then tick (or finish). Returns false
    // once the run is finished.
    bool end_slot();

    Phase phase() const;
    std::int64_t iteration() const;
    sim::RunParams params() const;
    Dataset snapshot() const;
    bool writable(const std::string& target) const;

    // Calls f(simulation) under the write lock; for privileged test access.
    template <class F>
    auto with_simulation(F&& f) {
        std::lock_guard lock(write_mu_);
        return f(static_cast<const sim::Simulation&>(*sim_));
    }

    void wait_finished();

    // When enabled before start(), end_slot() keeps the dataset it checked.
    void keep_slot_datasets(bool on) { keep_datasets_ = on; }
    std::vector<Dataset> slot_datasets() const;

    metrics::FaultTrace trace() const;
    std::vector<metrics::OperationRecord> operations() const;
    // Wall time of every end_slot() (fault check plus tick), milliseconds.
    std::vector<double> slot_durations_ms() const;
    std::int64_t deadline_misses() const { return deadline_misses_; }
    const std::vector<metrics::FaultQuery>& faults() const { return faults_; }
    const sim::SimEnvironment& environment() const { return env_; }

private:
    struct Snapshot {
        Dataset dataset;
        std::int64_t t = 0;
        Phase phase = Phase::Ready;
    };

    Snapshot current() const;
    void publish();
    void record(metrics::OperationRecord op);
    Response write(const std::string& method, const std::string& target, std::string_view body,
                   std::string_view content_type, const std::string& agent);
    void clock_loop();

    sim::SimEnvironment env_;
    std::vector<metrics::FaultQuery> faults_;
    Policy policy_;
    bool manual_clock_;

    mutable std::mutex write_mu_;  // agent writes, ticks, run state
    std::optional<sim::Simulation> sim_;
    Phase phase_ = Phase::Ready;
    std::set<std::string> writable_;
    metrics::FaultTrace trace_;
    std::vector<double> slot_ms_;
    bool keep_datasets_ = false;
    std::vector<Dataset> slot_datasets_;

    mutable std::mutex snap_mu_;
    Snapshot snap_;

    mutable std::mutex log_mu_;
    std::vector<metrics::OperationRecord> ops_;
    std::int64_t next_seq_ = 0;

    std::condition_variable finished_cv_;
    std::mutex finished_mu_;
    std::atomic<bool> stop_{false};
    std::atomic<std::int64_t> deadline_misses_{0};
    std::thread clock_;
};

// Run parameters from a `sim` PUT payload (Turtle). Throws
// std::invalid_argument when the iteration count or timeslot duration is
// missing or invalid.
sim::RunParams parse_run_params(std::string_view body, const std::string& base);
std::string run_params_turtle(const sim::RunParams& params, const std::string& base);

// Replays the recorded writes of a run over fresh ticks; the result equals
// the final dataset of the run.
Dataset replay(const sim::SimEnvironment& env, const sim::RunParams& params,
               const std::vector<metrics::OperationRecord>& ops);

}  // namespace ldsim::server
