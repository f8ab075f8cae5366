#include "ldsim/rdf/dataset.hpp"

#include <algorithm>
#include <map>

#include "ldsim/rdf/vocab.hpp"

namespace ldsim::rdf {

Term default_graph() {
    static const Term g = Term::iri(vocab::kDefaultGraph);
    return g;
}

std::shared_ptr<const std::vector<Triple>> Graph::empty_triples() {
    static const auto empty = std::make_shared<const std::vector<Triple>>();
    return empty;
}

Graph::Graph(Term name, std::vector<Triple> triples) : name_(name) {
    std::sort(triples.begin(), triples.end());
    triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
    triples_ = std::make_shared<const std::vector<Triple>>(std::move(triples));
}

bool Graph::contains(const Triple& t) const { return std::binary_search(triples_->begin(), triples_->end(), t); }

std::span<const Triple> Graph::with_subject(Term s) const {
    auto lo = std::lower_bound(triples_->begin(), triples_->end(), s,
                               [](const Triple& t, Term k) { return t.s.id() < k.id(); });
    auto hi = std::upper_bound(lo, triples_->end(), s, [](Term k, const Triple& t) { return k.id() < t.s.id(); });
    return {lo, hi};
}

Dataset::Dataset() : impl_(std::make_shared<const Impl>()) {}

Dataset Dataset::from_quads(std::span<const Quad> quads) {
    std::map<TermId, std::vector<Triple>> by_graph;
    for (const auto& q : quads) by_graph[q.g.id()].push_back(q.triple());
    auto impl = std::make_shared<Impl>();
    for (auto& [gid, triples] : by_graph) {
        Graph g(Term::from_id(gid), std::move(triples));
        index_graph_change(*impl, g.name(), {}, g.triples());
        impl->quad_count += g.size();
        impl->graphs.set(gid, g);
    }
    return Dataset(std::move(impl));
}

bool Dataset::contains(const Quad& q) const {
    const Graph* g = impl_->graphs.find(q.g.id());
    return g && g->contains(q.triple());
}

Graph Dataset::graph(Term name) const {
    if (const Graph* g = impl_->graphs.find(name.id())) return *g;
    Graph empty;
    empty.name_ = name;
    return empty;
}

std::vector<Term> Dataset::graph_names() const {
    std::vector<Term> names;
    names.reserve(impl_->graphs.size());
    impl_->graphs.for_each([&](TermId id, const Graph&) { names.push_back(Term::from_id(id)); });
    std::sort(names.begin(), names.end());
    return names;
}

std::vector<Quad> Dataset::quads() const {
    std::vector<Quad> out;
    out.reserve(size());
    impl_->graphs.for_each([&](TermId, const Graph& g) {
        for (const auto& t : g) out.push_back({t.s, t.p, t.o, g.name()});
    });
    std::sort(out.begin(), out.end());
    return out;
}

std::span<const Term> Dataset::graphs_with_subject(Term s) const {
    if (const TermList* l = impl_->by_subject.find(s.id())) return **l;
    return {};
}

std::span<const Term> Dataset::graphs_with_object(Term o) const {
    if (const TermList* l = impl_->by_object.find(o.id())) return **l;
    return {};
}

namespace {

inline bool term_matches(Term pattern, Term value) { return !pattern.valid() || pattern == value; }

void match_in_graph(const Graph& g, Term s, Term p, Term o, const std::function<void(const Quad&)>& f) {
    if (s.valid()) {
        for (const auto& t : g.with_subject(s))
            if (term_matches(p, t.p) && term_matches(o, t.o)) f({t.s, t.p, t.o, g.name()});
        return;
    }
    for (const auto& t : g)
        if (term_matches(p, t.p) && term_matches(o, t.o)) f({t.s, t.p, t.o, g.name()});
}

}  // namespace

void Dataset::match(Term graph, Term s, Term p, Term o, const std::function<void(const Quad&)>& f) const {
    if (graph.valid()) {
        if (const Graph* g = impl_->graphs.find(graph.id())) match_in_graph(*g, s, p, o, f);
        return;
    }
    std::span<const Term> candidates;
    bool use_candidates = false;
    if (s.valid()) {
        candidates = graphs_with_subject(s);
        use_candidates = true;
    }
    if (o.valid()) {
        auto by_o = graphs_with_object(o);
        if (!use_candidates || by_o.size() < candidates.size()) candidates = by_o;
        use_candidates = true;
    }
    if (use_candidates) {
        for (Term name : candidates)
            if (const Graph* g = impl_->graphs.find(name.id())) match_in_graph(*g, s, p, o, f);
        return;
    }
    impl_->graphs.for_each([&](TermId, const Graph& g) { match_in_graph(g, s, p, o, f); });
}

void Dataset::index_graph_change(Impl& impl, Term name, const std::vector<Triple>& before,
                                 const std::vector<Triple>& after) {
    auto collect = [](const std::vector<Triple>& ts, bool subjects) {
        std::vector<Term> out;
        out.reserve(ts.size());
        for (const auto& t : ts) out.push_back(subjects ? t.s : t.o);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    };
    auto update = [&](detail::ShardedMap<TermList>& index, bool subjects) {
        auto old_terms = collect(before, subjects);
        auto new_terms = collect(after, subjects);
        std::vector<Term> removed, added;
        std::set_difference(old_terms.begin(), old_terms.end(), new_terms.begin(), new_terms.end(),
                            std::back_inserter(removed));
        std::set_difference(new_terms.begin(), new_terms.end(), old_terms.begin(), old_terms.end(),
                            std::back_inserter(added));
        for (Term t : removed) {
            const TermList* cur = index.find(t.id());
            if (!cur) continue;
            auto list = std::make_shared<std::vector<Term>>(**cur);
            list->erase(std::remove(list->begin(), list->end(), name), list->end());
            if (list->empty()) index.set(t.id(), std::nullopt);
            else index.set(t.id(), TermList(std::move(list)));
        }
        for (Term t : added) {
            const TermList* cur = index.find(t.id());
            auto list = cur ? std::make_shared<std::vector<Term>>(**cur) : std::make_shared<std::vector<Term>>();
            list->insert(std::lower_bound(list->begin(), list->end(), name), name);
            index.set(t.id(), TermList(std::move(list)));
        }
    };
    update(impl.by_subject, true);
    update(impl.by_object, false);
}

Dataset Dataset::with_graph(Term name, std::vector<Triple> triples) const {
    auto impl = std::make_shared<Impl>(*impl_);
    const Graph* old = impl_->graphs.find(name.id());
    static const std::vector<Triple> none;
    const std::vector<Triple>& before = old ? old->triples() : none;
    Graph g(name, std::move(triples));
    if (old && *old == g) return *this;
    index_graph_change(*impl, name, before, g.triples());
    impl->quad_count = impl->quad_count - before.size() + g.size();
    if (g.empty()) impl->graphs.set(name.id(), std::nullopt);
    else impl->graphs.set(name.id(), std::move(g));
    return Dataset(std::move(impl));
}

Dataset Dataset::apply(std::span<const Quad> removals, std::span<const Quad> additions) const {
    if (removals.empty() && additions.empty()) return *this;
    std::map<TermId, std::pair<std::vector<Triple>, std::vector<Triple>>> per_graph;
    for (const auto& q : removals) per_graph[q.g.id()].first.push_back(q.triple());
    for (const auto& q : additions) per_graph[q.g.id()].second.push_back(q.triple());

    auto impl = std::make_shared<Impl>(*impl_);
    bool changed = false;
    for (auto& [gid, delta] : per_graph) {
        auto& [rem, add] = delta;
        const Graph* old = impl_->graphs.find(gid);
        std::vector<Triple> next = old ? old->triples() : std::vector<Triple>{};
        std::sort(rem.begin(), rem.end());
        if (!rem.empty()) {
            std::vector<Triple> kept;
            kept.reserve(next.size());
            std::set_difference(next.begin(), next.end(), rem.begin(), rem.end(), std::back_inserter(kept));
            next.swap(kept);
        }
        next.insert(next.end(), add.begin(), add.end());
        Term name = Term::from_id(gid);
        Graph g(name, std::move(next));
        if (old && *old == g) continue;
        if (!old && g.empty()) continue;
        static const std::vector<Triple> none;
        const auto& before = old ? old->triples() : none;
        index_graph_change(*impl, name, before, g.triples());
        impl->quad_count = impl->quad_count - before.size() + g.size();
        if (g.empty()) impl->graphs.set(gid, std::nullopt);
        else impl->graphs.set(gid, std::move(g));
        changed = true;
    }
    if (!changed) return *this;
    return Dataset(std::move(impl));
}

bool operator==(const Dataset& a, const Dataset& b) {
    if (a.impl_ == b.impl_) return true;
    if (a.size() != b.size() || a.graph_count() != b.graph_count()) return false;
    return changed_graphs(a, b).empty();
}

std::set<Term> changed_graphs(const Dataset& a, const Dataset& b) {
    std::set<Term> out;
    a.for_each_graph([&](const Graph& g) {
        if (!(b.graph(g.name()) == g)) out.insert(g.name());
    });
    b.for_each_graph([&](const Graph& g) {
        if (!a.has_graph(g.name())) out.insert(g.name());
    });
    return out;
}

Dataset symmetric_difference(const Dataset& a, const Dataset& b) {
    std::vector<Quad> out;
    for (Term name : changed_graphs(a, b)) {
        const auto ga = a.graph(name);
        const auto gb = b.graph(name);
        std::vector<Triple> diff;
        std::set_symmetric_difference(ga.begin(), ga.end(), gb.begin(), gb.end(), std::back_inserter(diff));
        for (const auto& t : diff) out.push_back({t.s, t.p, t.o, name});
    }
    return Dataset::from_quads(out);
}

std::set<Term> graph_projection(const Dataset& d) {
    auto names = d.graph_names();
    return {names.begin(), names.end()};
}

}  // namespace ldsim::rdf
