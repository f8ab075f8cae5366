#pragma once

// Simulation runs: initial dataset plus ordered updates, advanced one
// timeslot at a time.
//
// A tick from iteration t to t+1 rewrites the `sim` time graph, runs the
// native sunlight and occupancy processes for the new simulated time, then
// evaluates the registered updates in order. Every random draw is keyed by
// (seed, t+1, update id, binding), so agent writes between ticks cannot shift
// the draws of unrelated resources.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ldsim/rdf/dataset.hpp"
#include "ldsim/sim/processes.hpp"
#include "ldsim/sparql/ast.hpp"
#include "ldsim/sparql/eval.hpp"

namespace ldsim::sim {

using rdf::Dataset;

class SimError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct NamedUpdate {
    std::string id;
    sparql::Update update;
};

struct RunParams {
    std::int64_t initial_time = 1653264000;  // 2022-05-23T00:00:00, epoch seconds
    std::int64_t timeslot_ms = 500;          // real time per slot
    std::int64_t iterations = 1440;
    std::int64_t step_seconds = 60;  // simulated time per slot

    void check() const;  // throws std::invalid_argument
};

struct SimEnvironment {
    Dataset initial;
    std::vector<NamedUpdate> init_updates;  // run once before iteration 0
    std::vector<NamedUpdate> updates;       // run on every tick
    std::uint64_t seed = 0;
    bool sunlight = true;
    bool occupancy = true;
    OccupancyParams occupancy_params;
    std::string base = "http://localhost:8080/";
};

// A value-carrying property node and the graph holding its value.
struct PropertyRef {
    Term graph;
    Term node;
};

struct SimState {
    std::int64_t t = 0;
    Dataset dataset;
    std::vector<Occupant> occupants;
    std::map<Term, std::vector<PropertyRef>> occupancy_sensors;  // room -> properties
    std::map<Term, std::vector<PropertyRef>> luminance_sensors;  // room -> properties
    std::map<Term, double> occlusion;                            // room -> factor
    std::vector<PropertyRef> outside_sensors;
};

class Simulation {
public:
    Simulation(SimEnvironment env, RunParams params);

    const SimState& state() const { return state_; }
    const Dataset& dataset() const { return state_.dataset; }
    const SimEnvironment& env() const { return env_; }
    const RunParams& params() const { return params_; }
    std::int64_t iteration() const { return state_.t; }
    bool finished() const { return state_.t >= params_.iterations; }

    // Simulated clock at the current iteration.
    std::int64_t now() const { return time_at(state_.t); }
    std::int64_t time_at(std::int64_t t) const { return params_.initial_time + t * params_.step_seconds; }
    double seconds_of_day() const;

    // Replace the dataset between ticks (agent operations).
    void set_dataset(Dataset d) { state_.dataset = std::move(d); }

    // Advance to iteration t+1. Throws SimError when finished or when an
    // update fails.
    void tick();

    sparql::EvalContext context(const std::string& update_id) const;
    CoverageProfile coverage_profile(std::int64_t day) const;
    double outside_lux() const;

    Term sim_resource() const;

private:
    void write_time_graph();
    void run_processes();
    void apply(const std::vector<NamedUpdate>& updates);
    void bind_processes();

    SimEnvironment env_;
    RunParams params_;
    SimState state_;
};

// Replaces the rdf:value of `node` in `graph`; unchanged if equal.
Dataset set_value(const Dataset& d, const PropertyRef& ref, Term value);
// The current rdf:value of `node` in `graph`, invalid if absent.
Term get_value(const Dataset& d, const PropertyRef& ref);

}  // namespace ldsim::sim
