#pragma once

// Fault traces, operation logs and the four run metrics.
//
// Slot t of a run of k iterations is the interval during which the dataset
// is at iteration t; faults of slot t are checked after the agent
// operations of that slot and before the tick to t+1, so a trace has k+1
// entries. Metrics range over the eligible slots l <= t <= k, where l is
// the longest fault-sequence length of the task.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ldsim/rdf/dataset.hpp"
#include "ldsim/sim/engine.hpp"
#include "ldsim/sparql/ast.hpp"

namespace ldsim::metrics {

using rdf::Dataset;

struct FaultQuery {
    std::string id;
    sparql::Query query;  // SELECT; every distinct solution is one fault
    int length = 1;       // l
};

// Binding keys of the solutions of one fault query.
std::set<std::string> match_faults(const Dataset& d, const FaultQuery& fq, const sparql::EvalContext& ctx = {});

// "<fault id> <binding key>" for every fault of every query at the
// simulation's current iteration.
std::set<std::string> check_faults(const Dataset& d, const std::vector<FaultQuery>& queries,
                                   const sim::Simulation& sim);

struct FaultTrace {
    // Per slot, the single-slot matches ("<id> <key>").
    std::vector<std::set<std::string>> raw;
    // Sequence length per fault id; ids not listed have length 1.
    std::map<std::string, int> lengths;

    std::int64_t iterations() const { return std::int64_t(raw.size()) - 1; }
    int max_length() const;
    // Γ_t: keys whose single-slot match held in each of the last l slots.
    std::set<std::string> gamma(std::int64_t t) const;
    std::vector<std::size_t> counts() const;  // |Γ_t| for every slot
    bool eligible(std::int64_t t) const { return t >= max_length() && t <= iterations(); }

    friend bool operator==(const FaultTrace&, const FaultTrace&) = default;
};

enum class OpClass { Read, Create, Replace, Delete };
const char* to_string(OpClass c);
std::optional<OpClass> op_class_from_string(std::string_view s);

struct OperationRecord {
    std::int64_t seq = 0;
    std::int64_t timeslot = 0;
    std::string agent;
    std::string method;  // GET, PUT, POST, DELETE
    std::string target;
    OpClass classification = OpClass::Read;
    int status = 0;
    std::size_t payload_size = 0;
    // Graph names whose contents changed, computed when the operation was
    // applied. Empty for reads and rejected writes.
    std::vector<std::string> delta_graphs;
    // N-Triples of the graph written by a successful write.
    std::string payload;

    bool succeeded() const { return status >= 200 && status < 300; }
    bool is_read() const { return method == "GET"; }

    friend bool operator==(const OperationRecord&, const OperationRecord&) = default;
};

// Errors for ill-defined metrics (no eligible slot).
class MetricError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

double fault_rate(const FaultTrace& trace);
double average_fault_count(const FaultTrace& trace);
// Absent when the dry run has no eligible fault.
std::optional<double> normalized_fault_count(const FaultTrace& trace, const FaultTrace& dry);
// Successful reads over successful state-changing operations; absent
// without writes.
std::optional<double> read_write_ratio(const std::vector<OperationRecord>& ops);

struct MetricsReport {
    double fault_rate = 0;
    double average_fault_count = 0;
    std::optional<double> normalized_fault_count;
    std::optional<double> read_write_ratio;
    std::size_t reads = 0, writes = 0, rejected = 0;
    std::size_t faulty_slots = 0, total_faults = 0, dry_total_faults = 0;
    std::int64_t iterations = 0;
    std::vector<std::size_t> series;  // |Γ_t| per slot
    bool valid = true;
    std::string note;

    friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

MetricsReport compute_metrics(const FaultTrace& trace, const FaultTrace* dry,
                              const std::vector<OperationRecord>& ops);

// Runs k ticks without agent operations, checking faults in every slot.
// When `snapshots` is given it receives the dataset of every slot.
FaultTrace dry_run(const sim::SimEnvironment& env, const sim::RunParams& params,
                   const std::vector<FaultQuery>& queries, std::vector<Dataset>* snapshots = nullptr);

// Tab-separated files. Tabs, newlines and backslashes inside fields are
// escaped as \t, \n and \\.
std::string faults_tsv(const FaultTrace& trace);
FaultTrace parse_faults_tsv(const std::string& text);
std::string ops_tsv(const std::vector<OperationRecord>& ops);
std::vector<OperationRecord> parse_ops_tsv(const std::string& text);
std::string metrics_tsv(const MetricsReport& report);
std::map<std::string, std::string> parse_metrics_tsv(const std::string& text);

// Operation audit: every successful non-read operation changed at most its
// target graph (nothing when it rewrote identical contents), and nothing
// else changed the dataset. Returns one message per violation.
std::vector<std::string> audit_operations(const std::vector<OperationRecord>& ops);

}  // namespace ldsim::metrics
