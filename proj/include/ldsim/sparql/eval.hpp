#pragma once

// Evaluation of the query/update subset over immutable datasets.
//
// A query without FROM matches against the union of every graph in the
// dataset, including the reserved default graph. FROM restricts the default
// graph to the merge of the listed graphs. GRAPH ?g ranges over named graphs
// only. Solutions are always distinct.

#include <cstdint>
#include <string>
#include <vector>

#include "ldsim/rdf/dataset.hpp"
#include "ldsim/sparql/ast.hpp"

namespace ldsim::sparql {

using rdf::Dataset;

// Inputs of the keyed rand() built-in and the simulated clock.
struct EvalContext {
    std::uint64_t seed = 0;
    std::int64_t iteration = 0;
    // Prefix of rand() call-site ids; each call site appends "#<n>".
    std::string update_id;
    Term now;          // xsd:dateTime, returned by sim:now()
    Term time_of_day;  // xsd:time, returned by sim:time()
};

struct Solutions {
    std::vector<std::string> vars;
    std::vector<std::vector<Term>> rows;  // sorted, distinct; invalid Term = unbound
};

bool ask(const Dataset& d, const Query& q, const EvalContext& ctx = {});
Solutions select(const Dataset& d, const Query& q, const EvalContext& ctx = {});

// Canonical "?a=<x> ?b=\"y\"" form of a row, variables sorted by name,
// unbound and hidden variables omitted.
std::string binding_key(const std::vector<std::string>& vars, const std::vector<Term>& row);

struct UpdateStats {
    std::size_t solutions = 0;
    std::size_t skipped_quads = 0;  // template quads with unbound or ill-typed slots
};

Dataset eval_update(const Dataset& d, const UpdateOperation& op, const EvalContext& ctx = {},
                    UpdateStats* stats = nullptr);
// Operations run in order, each on the previous result.
Dataset eval_update(const Dataset& d, const Update& u, const EvalContext& ctx = {}, UpdateStats* stats = nullptr);

// Terms reachable from `start` over the union of all graphs.
std::vector<Term> eval_path(const Dataset& d, const Path& path, Term start);

}  // namespace ldsim::sparql
