#pragma once

// The agent's knowledge base: the union of the graphs it has retrieved,
// each tagged with its source document and the loop that fetched it.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ldsim/rdf/dataset.hpp"

namespace ldsim::agent {

using rdf::Dataset;
using rdf::Term;
using rdf::Triple;

inline constexpr const char* kInferredGraph = "urn:ldsim:inferred";

// Forward-chaining closure: rdfs:subClassOf transitivity and type
// propagation, bf:hasPart / bf:isPartOf transitivity and mutual inversion.
// Returns only the triples not already in `d`.
std::vector<Triple> closure(const Dataset& d);

class KnowledgeBase {
public:
    struct Source {
        std::int64_t epoch = 0;
    };

    void set_reasoning(bool on) { reasoning_ = on; }
    bool reasoning() const { return reasoning_; }

    void put(Term graph, std::vector<Triple> triples, std::int64_t epoch);
    bool has(Term graph) const { return data_.has_graph(graph); }
    const Dataset& data() const { return data_; }
    const std::map<Term, Source>& sources() const { return sources_; }

    // Retrieved graphs plus, with reasoning on, the inferred graph.
    Dataset view();

private:
    Dataset data_;
    std::map<Term, Source> sources_;
    bool reasoning_ = false;
    bool dirty_ = true;
    std::vector<Triple> inferred_;
};

// The static part of a served dataset: every graph without an rdf:value
// statement, minus the default graph and the `sim` resource.
Dataset static_model(const Dataset& d, const std::string& base);

}  // namespace ldsim::agent
