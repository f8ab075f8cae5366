#include "ldsim/agent/agent.hpp"

#include <chrono>
#include <deque>
#include <map>
#include <thread>

#include "httplib.h"
#include "ldsim/rdf/io.hpp"
#include "ldsim/rdf/vocab.hpp"
#include "ldsim/server/http.hpp"
#include "ldsim/sparql/eval.hpp"

namespace ldsim::agent {

namespace v = ldsim::vocab;

std::vector<std::string> default_follow() {
    return {std::string(v::kBfHasPart), std::string(v::kBfHasPoint), std::string(v::kBfFeeds),
            std::string(v::kSosaObserves), std::string(v::kSosaActsOnProperty)};
}

std::string document_of(const std::string& iri) { return iri.substr(0, iri.find('#')); }

struct Agent::Client {
    httplib::Client http;
    httplib::Headers headers;

    Client(const Endpoint& e, const std::string& name) : http(e.host, e.port) {
        http.set_keep_alive(true);
        http.set_tcp_nodelay(true);
        http.set_connection_timeout(5);
        http.set_read_timeout(30);
        headers = {{server::kAgentHeader, name}, {"Accept", "text/turtle"}};
    }

    // One retry on transport failure.
    httplib::Result get(const std::string& path) {
        auto r = http.Get(path, headers);
        return r ? std::move(r) : http.Get(path, headers);
    }
    httplib::Result put(const std::string& path, const std::string& body) {
        auto r = http.Put(path, headers, body, "text/turtle");
        return r ? std::move(r) : http.Put(path, headers, body, "text/turtle");
    }
};

Agent::Agent(Program program, AgentConfig config, Endpoint endpoint)
    : program_(std::move(program)), cfg_(std::move(config)), client_(std::make_unique<Client>(endpoint, cfg_.name)) {
    kb_.set_reasoning(cfg_.reasoning);
    for (const auto& p : cfg_.follow) follow_.insert(Term::iri(p));
    for (const auto& p : program_.follow) follow_.insert(Term::iri(p));
    if (cfg_.mode == Mode::Prefetch)
        cfg_.prefetched.for_each_graph([&](const rdf::Graph& g) {
            if (g.name() != rdf::default_graph()) kb_.put(g.name(), g.triples(), 0);
        });
}

Agent::~Agent() = default;

Agent::Fetch Agent::fetch(const std::string& doc, bool discovery) {
    if (doc.compare(0, cfg_.base.size(), cfg_.base) != 0) return Fetch::Missing;
    if (!epoch_fetched_.insert(doc).second) return kb_.has(Term::iri(doc)) ? Fetch::Ok : Fetch::Missing;
    auto res = client_->get("/" + doc.substr(cfg_.base.size()));
    ++last_requests_;
    if (!res) {
        ++stats_.failed;
        return Fetch::Missing;
    }
    ++stats_.reads;
    if (discovery) ++stats_.discovery_reads;
    if (res->status == 410) {
        stats_.finished = true;
        return Fetch::Ended;
    }
    if (res->status != 200) return Fetch::Missing;
    std::vector<Triple> triples;
    try {
        for (const auto& q : rdf::parse_quads(res->body, rdf::Format::Turtle, doc)) triples.push_back(q.triple());
    } catch (const std::exception&) {
        ++stats_.failed;
        return Fetch::Missing;
    }
    Term name = Term::iri(doc);
    if (doc == cfg_.base + "sim")
        for (const auto& t : triples)
            if (t.p.value() == v::kSimStatus && t.o.value() == "finished") stats_.finished = true;
    kb_.put(name, std::move(triples), stats_.loops);
    return stats_.finished ? Fetch::Ended : Fetch::Ok;
}

void Agent::traverse() {
    std::deque<std::string> queue = {cfg_.base + cfg_.seed};
    std::set<std::string> seen(queue.begin(), queue.end());
    while (!queue.empty() && !stats_.finished) {
        std::string doc = queue.front();
        queue.pop_front();
        if (fetch(doc, true) != Fetch::Ok) continue;
        for (const auto& t : kb_.data().graph(Term::iri(doc))) {
            if (!follow_.count(t.p)) continue;
            for (Term n : {t.s, t.o}) {
                if (!n.is_iri()) continue;
                std::string d = document_of(n.value());
                if (seen.insert(d).second) queue.push_back(d);
            }
        }
    }
}

std::vector<std::string> Agent::documents(const Directive& d) {
    if (!d.iri.empty()) return {document_of(d.iri)};
    auto sol = sparql::select(kb_.view(), d.query);
    std::size_t col = 0;
    while (col < sol.vars.size() && sol.vars[col] != d.var) ++col;
    std::set<std::string> out;
    if (col < sol.vars.size())
        for (const auto& row : sol.rows)
            if (row[col].is_iri()) out.insert(document_of(row[col].value()));
    return {out.begin(), out.end()};
}

void Agent::fetch_once() {
    for (bool progress = true; progress && !stats_.finished;) {
        progress = false;
        for (const auto& d : program_.once)
            for (const auto& doc : documents(d)) {
                if (kb_.has(Term::iri(doc)) || !once_attempted_.insert(doc).second) continue;
                if (fetch(doc) == Fetch::Ended) return;
                progress = true;
            }
    }
}

namespace {

Term instantiate(const sparql::TermOrVar& x, const std::vector<std::string>& names,
                 const std::map<std::string, Term>& row) {
    if (!x.is_var()) return x.term;
    auto it = row.find(names[x.var]);
    return it == row.end() ? Term() : it->second;
}

}  // namespace

void Agent::fire_rules() {
    Dataset view = kb_.view();
    std::set<std::string> written;
    for (const auto& rule : program_.rules) {
        auto sol = sparql::select(view, rule.condition);
        for (const auto& values : sol.rows) {
            std::map<std::string, Term> row;
            for (std::size_t i = 0; i < sol.vars.size(); ++i)
                if (values[i].valid()) row[sol.vars[i]] = values[i];
            auto target = row.find(rule.target_var);
            if (target == row.end() || !target->second.is_iri()) continue;
            std::string doc = document_of(target->second.value());
            if (written.count(doc) || (rule.once && fired_.count({rule.name, doc}))) continue;

            std::vector<Triple> payload;
            for (const auto& q : rule.payload) {
                Triple t{instantiate(q.s, rule.template_vars, row), instantiate(q.p, rule.template_vars, row),
                         instantiate(q.o, rule.template_vars, row)};
                if (t.s.valid() && t.p.valid() && t.o.valid()) payload.push_back(t);
            }
            std::sort(payload.begin(), payload.end());
            payload.erase(std::unique(payload.begin(), payload.end()), payload.end());
            if (payload.empty() || kb_.data().graph(Term::iri(doc)).triples() == payload) continue;

            written.insert(doc);
            auto res = client_->put("/" + doc.substr(cfg_.base.size()),
                                    rdf::serialize_graph(rdf::Graph(Term::iri(doc), payload)));
            ++last_requests_;
            if (!res) {
                ++stats_.failed;
                continue;
            }
            if (res->status == 410) {
                stats_.finished = true;
                return;
            }
            if (res->status / 100 != 2) {
                ++stats_.rejected;
                continue;
            }
            ++stats_.writes;
            fired_.insert({rule.name, doc});
            kb_.put(Term::iri(doc), std::move(payload), stats_.loops);
        }
    }
}

bool Agent::loop() {
    if (stats_.finished) return false;
    last_requests_ = 0;
    epoch_fetched_.clear();
    std::int64_t writes_before = stats_.writes;
    if (cfg_.mode == Mode::Traversal) traverse();
    if (!stats_.finished) fetch_once();
    for (const auto& d : program_.reads) {
        if (stats_.finished) break;
        for (const auto& doc : documents(d))
            if (fetch(doc) == Fetch::Ended) break;
    }
    if (!stats_.finished) fire_rules();
    ++stats_.loops;
    if (stats_.writes > writes_before) ++stats_.action_loops;
    return !stats_.finished;
}

AgentStats run_agent(const Program& program, const AgentConfig& config, const Endpoint& endpoint) {
    using clock = std::chrono::steady_clock;
    Agent agent(program, config, endpoint);
    auto stopped = [&] { return config.stop && config.stop->load(); };
    while (!stopped() && (config.max_loops < 0 || agent.stats().loops < config.max_loops)) {
        auto start = clock::now();
        if (!agent.loop()) break;
        // An idle loop sleeps briefly so that it does not starve the server.
        auto wait = std::chrono::milliseconds(config.poll_ms > 0 ? config.poll_ms : agent.last_requests() ? 0 : 5);
        while (!stopped() && clock::now() - start < wait) std::this_thread::sleep_for(std::chrono::milliseconds(1));
    }
    return agent.stats();
}

}  // namespace ldsim::agent
