#include "ldsim/agent/knowledge.hpp"

#include <algorithm>
#include <set>

#include "ldsim/rdf/vocab.hpp"

namespace ldsim::agent {

namespace v = ldsim::vocab;

namespace {

bool structural(const Triple& t) {
    const auto& p = t.p.value();
    return p == v::kRdfType || p == v::kRdfsSubClassOf || p == v::kBfHasPart || p == v::kBfIsPartOf;
}

using Edges = std::map<Term, std::set<Term>>;

// Nodes reachable from `start` in one or more steps.
std::set<Term> reach(const Edges& e, Term start) {
    std::set<Term> seen;
    std::vector<Term> stack = {start};
    while (!stack.empty()) {
        Term n = stack.back();
        stack.pop_back();
        auto it = e.find(n);
        if (it == e.end()) continue;
        for (Term m : it->second)
            if (seen.insert(m).second) stack.push_back(m);
    }
    return seen;
}

}  // namespace

std::vector<Triple> closure(const Dataset& d) {
    const Term type = Term::iri(v::kRdfType), sub = Term::iri(v::kRdfsSubClassOf),
               has_part = Term::iri(v::kBfHasPart), part_of = Term::iri(v::kBfIsPartOf);
    std::set<Triple> known;
    Edges supers, parts;
    std::vector<std::pair<Term, Term>> typed;
    d.for_each_graph([&](const rdf::Graph& g) {
        for (const auto& t : g) {
            if (!structural(t)) continue;
            known.insert(t);
            if (t.p == sub) supers[t.s].insert(t.o);
            else if (t.p == type) typed.push_back({t.s, t.o});
            else if (t.p == has_part) parts[t.s].insert(t.o);
            else parts[t.o].insert(t.s);
        }
    });

    std::set<Triple> out;
    auto add = [&](Triple t) {
        if (!known.count(t)) out.insert(t);
    };
    std::map<Term, std::set<Term>> super_cache;
    auto all_supers = [&](Term c) -> const std::set<Term>& {
        auto it = super_cache.find(c);
        if (it == super_cache.end()) it = super_cache.emplace(c, reach(supers, c)).first;
        return it->second;
    };
    for (const auto& [c, _] : supers)
        for (Term s : all_supers(c)) add({c, sub, s});
    for (const auto& [x, c] : typed)
        for (Term s : all_supers(c)) add({x, type, s});
    for (const auto& [whole, _] : parts) {
        for (Term p : reach(parts, whole)) {
            add({whole, has_part, p});
            add({p, part_of, whole});
        }
    }
    return {out.begin(), out.end()};
}

void KnowledgeBase::put(Term graph, std::vector<Triple> triples, std::int64_t epoch) {
    std::sort(triples.begin(), triples.end());
    triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
    sources_[graph] = {epoch};
    rdf::Graph old = data_.graph(graph);
    if (old.triples() == triples) return;
    bool touches = std::any_of(old.begin(), old.end(), structural) ||
                   std::any_of(triples.begin(), triples.end(), structural);
    dirty_ = dirty_ || touches;
    data_ = data_.with_graph(graph, std::move(triples));
}

Dataset KnowledgeBase::view() {
    if (!reasoning_) return data_;
    if (dirty_) {
        inferred_ = closure(data_);
        dirty_ = false;
    }
    return data_.with_graph(Term::iri(kInferredGraph), inferred_);
}

Dataset static_model(const Dataset& d, const std::string& base) {
    const Term value = Term::iri(v::kRdfValue), sim = Term::iri(base + "sim");
    Dataset out = d;
    d.for_each_graph([&](const rdf::Graph& g) {
        bool dynamic = g.name() == rdf::default_graph() || g.name() == sim ||
                       std::any_of(g.begin(), g.end(), [&](const Triple& t) { return t.p == value; });
        if (dynamic) out = out.without_graph(g.name());
    });
    return out;
}

}  // namespace ldsim::agent
