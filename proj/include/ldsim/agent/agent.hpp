#pragma once

// Baseline rule agents talking to the server over HTTP.
//
// Each loop is one fetch epoch: a traversal agent first re-walks the
// building from its seed, then the ONCE and READ directives fetch their
// documents, and finally the rules fire against the knowledge base. Within
// an epoch a document is fetched at most once.

#include <atomic>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "ldsim/agent/knowledge.hpp"
#include "ldsim/agent/rules.hpp"

namespace ldsim::agent {

enum class Mode { Traversal, Prefetch };

struct Endpoint {
    std::string host = "127.0.0.1";
    int port = 8080;
};

// hasPart, hasPoint, feeds, observes, actsOnProperty.
std::vector<std::string> default_follow();

struct AgentConfig {
    std::string name = "agent";
    Mode mode = Mode::Prefetch;
    std::string base = "http://localhost:8080/";
    std::string seed = "Building";  // relative to base
    std::vector<std::string> follow = default_follow();
    bool reasoning = false;
    Dataset prefetched;  // prefetch mode only
    // 0 loops as fast as possible.
    std::int64_t poll_ms = 0;
    std::int64_t max_loops = -1;
    const std::atomic<bool>* stop = nullptr;
};

struct AgentStats {
    std::int64_t reads = 0;
    std::int64_t writes = 0;
    std::int64_t rejected = 0;  // non-2xx answers to writes
    std::int64_t failed = 0;    // transport errors after one retry
    std::int64_t loops = 0;
    std::int64_t action_loops = 0;  // loops with at least one write
    std::int64_t discovery_reads = 0;
    bool finished = false;
};

class Agent {
public:
    Agent(Program program, AgentConfig config, Endpoint endpoint);
    ~Agent();
    Agent(const Agent&) = delete;
    Agent& operator=(const Agent&) = delete;

    // One perception-action loop. Returns false once the run has ended.
    bool loop();
    // Requests issued by the last loop.
    std::int64_t last_requests() const { return last_requests_; }

    const AgentStats& stats() const { return stats_; }
    const KnowledgeBase& knowledge() const { return kb_; }

private:
    enum class Fetch { Ok, Missing, Ended };
    Fetch fetch(const std::string& doc, bool discovery = false);
    void traverse();
    void fetch_once();
    void fire_rules();
    std::vector<std::string> documents(const Directive& d);

    struct Client;
    Program program_;
    AgentConfig cfg_;
    std::unique_ptr<Client> client_;
    KnowledgeBase kb_;
    AgentStats stats_;
    std::set<Term> follow_;
    std::set<std::string> epoch_fetched_;
    std::set<std::string> once_attempted_;
    std::set<std::pair<std::string, std::string>> fired_;
    std::int64_t last_requests_ = 0;
};

// Loops until the run ends, the stop flag is set or max_loops is reached.
AgentStats run_agent(const Program& program, const AgentConfig& config, const Endpoint& endpoint);

// The document of a resource: its IRI without the fragment.
std::string document_of(const std::string& iri);

}  // namespace ldsim::agent
