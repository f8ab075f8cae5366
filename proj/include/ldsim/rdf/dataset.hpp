#pragma once

// Immutable RDF datasets with structural sharing.
//
// A Dataset is a set of quads grouped by graph name. Each graph is an
// immutable sorted triple vector held by shared_ptr; the graph table and the
// subject/object occurrence indexes are sharded copy-on-write maps, so a
// mutation copies only the shards it touches. Copies of a Dataset are cheap
// and safe to hand to other threads.

#include <array>
#include <compare>
#include <functional>
#include <memory>
#include <set>
#include <span>
#include <vector>

#include "ldsim/rdf/term.hpp"

namespace ldsim::rdf {

struct Triple {
    Term s, p, o;
    friend bool operator==(const Triple&, const Triple&) = default;
    friend std::strong_ordering operator<=>(const Triple& a, const Triple& b) {
        if (auto c = a.s.id() <=> b.s.id(); c != 0) return c;
        if (auto c = a.p.id() <=> b.p.id(); c != 0) return c;
        return a.o.id() <=> b.o.id();
    }
};

struct Quad {
    Term s, p, o, g;
    Triple triple() const { return {s, p, o}; }
    friend bool operator==(const Quad&, const Quad&) = default;
    friend std::strong_ordering operator<=>(const Quad& a, const Quad& b) {
        if (auto c = a.g.id() <=> b.g.id(); c != 0) return c;
        return a.triple() <=> b.triple();
    }
};

// Reserved IRI standing for the default graph.
Term default_graph();

// One named graph: a name plus a sorted, duplicate-free triple vector.
class Graph {
public:
    Graph() = default;
    Graph(Term name, std::vector<Triple> triples);

    Term name() const { return name_; }
    const std::vector<Triple>& triples() const { return *triples_; }
    std::size_t size() const { return triples_->size(); }
    bool empty() const { return triples_->empty(); }
    bool contains(const Triple& t) const;

    auto begin() const { return triples_->begin(); }
    auto end() const { return triples_->end(); }

    // Triples with the given subject (binary search).
    std::span<const Triple> with_subject(Term s) const;

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.name_ == b.name_ && (a.triples_ == b.triples_ || *a.triples_ == *b.triples_);
    }

private:
    friend class Dataset;
    Term name_;
    std::shared_ptr<const std::vector<Triple>> triples_ = empty_triples();
    static std::shared_ptr<const std::vector<Triple>> empty_triples();
};

namespace detail {

// Sharded copy-on-write map from term id to a shared value.
template <class V>
class ShardedMap {
public:
    static constexpr std::size_t kShards = 256;
    using Entry = std::pair<TermId, V>;
    using Shard = std::vector<Entry>;  // sorted by key

    ShardedMap() {
        static const auto empty = std::make_shared<const Shard>();
        shards_.fill(empty);
    }

    const V* find(TermId key) const {
        const Shard& sh = *shards_[key % kShards];
        auto it = std::lower_bound(sh.begin(), sh.end(), key, [](const Entry& e, TermId k) { return e.first < k; });
        return (it != sh.end() && it->first == key) ? &it->second : nullptr;
    }

    // Insert or replace; an empty optional erases.
    void set(TermId key, std::optional<V> value) {
        auto& slot = shards_[key % kShards];
        auto copy = std::make_shared<Shard>(*slot);
        auto it = std::lower_bound(copy->begin(), copy->end(), key, [](const Entry& e, TermId k) { return e.first < k; });
        bool present = it != copy->end() && it->first == key;
        if (value) {
            if (present) it->second = std::move(*value);
            else {
                copy->insert(it, Entry{key, std::move(*value)});
                ++size_;
            }
        } else if (present) {
            copy->erase(it);
            --size_;
        } else {
            return;
        }
        slot = std::move(copy);
    }

    template <class F>
    void for_each(F&& f) const {
        for (const auto& sh : shards_)
            for (const auto& e : *sh) f(e.first, e.second);
    }

    std::size_t size() const { return size_; }
    bool same_shard(const ShardedMap& other, std::size_t i) const { return shards_[i] == other.shards_[i]; }
    const Shard& shard(std::size_t i) const { return *shards_[i]; }

private:
    std::array<std::shared_ptr<const Shard>, kShards> shards_;
    std::size_t size_ = 0;
};

}  // namespace detail

class Dataset {
public:
    Dataset();

    static Dataset from_quads(std::span<const Quad> quads);

    std::size_t size() const { return impl_->quad_count; }
    bool empty() const { return size() == 0; }
    std::size_t graph_count() const { return impl_->graphs.size(); }

    bool contains(const Quad& q) const;
    bool has_graph(Term name) const { return impl_->graphs.find(name.id()) != nullptr; }
    // The graph with this name; empty if absent.
    Graph graph(Term name) const;
    // Graph names in id order.
    std::vector<Term> graph_names() const;
    std::vector<Quad> quads() const;

    template <class F>
    void for_each_graph(F&& f) const {
        impl_->graphs.for_each([&](TermId, const Graph& g) { f(g); });
    }

    // Names of graphs holding at least one triple with this subject / object.
    std::span<const Term> graphs_with_subject(Term s) const;
    std::span<const Term> graphs_with_object(Term o) const;

    // Calls f(quad) for every quad matching the pattern; invalid terms are
    // wildcards. `graph` invalid means every graph including the default.
    void match(Term graph, Term s, Term p, Term o, const std::function<void(const Quad&)>& f) const;

    // Replace a graph's contents; an empty triple set removes the graph.
    Dataset with_graph(Term name, std::vector<Triple> triples) const;
    Dataset without_graph(Term name) const { return with_graph(name, {}); }

    // Remove `removals`, then add `additions`.
    Dataset apply(std::span<const Quad> removals, std::span<const Quad> additions) const;

    friend bool operator==(const Dataset& a, const Dataset& b);

private:
    using TermList = std::shared_ptr<const std::vector<Term>>;
    struct Impl {
        detail::ShardedMap<Graph> graphs;
        detail::ShardedMap<TermList> by_subject;
        detail::ShardedMap<TermList> by_object;
        std::size_t quad_count = 0;
    };

    explicit Dataset(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    static void index_graph_change(Impl& impl, Term name, const std::vector<Triple>& before,
                                   const std::vector<Triple>& after);

    std::shared_ptr<const Impl> impl_;
};

// (d1 ∪ d2) \ (d1 ∩ d2)
Dataset symmetric_difference(const Dataset& a, const Dataset& b);

// Every graph name occurring in d.
std::set<Term> graph_projection(const Dataset& d);

// Graph names whose contents differ between a and b; equal to
// graph_projection(symmetric_difference(a, b)) but avoids materializing it.
std::set<Term> changed_graphs(const Dataset& a, const Dataset& b);

}  // namespace ldsim::rdf
