#include "ldsim/agent/bench.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <thread>

#include "httplib.h"
#include "ldsim/building/building.hpp"
#include "ldsim/rdf/io.hpp"
#include "ldsim/server/http.hpp"

namespace ldsim::agent {

struct OracleAgent::Client {
    httplib::Client http;
    httplib::Headers headers;
    Client(const Endpoint& e, const std::string& name) : http(e.host, e.port) {
        http.set_keep_alive(true);
        http.set_tcp_nodelay(true);
        headers = {{server::kAgentHeader, name}, {"Accept", "text/turtle"}};
    }
};

OracleAgent::OracleAgent(server::GraphStore& store, tasks::TaskSpec task, Endpoint endpoint, std::string name)
    : store_(store), task_(std::move(task)), client_(std::make_unique<Client>(endpoint, name)) {}

OracleAgent::~OracleAgent() = default;

bool OracleAgent::step() {
    if (stats_.finished) return false;
    if (store_.phase() == server::Phase::Finished) {
        stats_.finished = true;
        return false;
    }
    const std::string& base = store_.base();
    auto plan = store_.with_simulation([&](const sim::Simulation& s) { return tasks::oracle_plan(task_, s); });
    auto path = [&](const std::string& iri) { return "/" + document_of(iri).substr(base.size()); };
    std::int64_t writes_before = stats_.writes;
    for (const auto& r : plan.reads) {
        auto res = client_->http.Get(path(r), client_->headers);
        if (!res) {
            ++stats_.failed;
            continue;
        }
        ++stats_.reads;
        if (res->status == 410) stats_.finished = true;
    }
    for (const auto& [graph, triples] : plan.writes) {
        if (stats_.finished) break;
        auto body = rdf::serialize_graph(rdf::Graph(Term::iri(graph), triples));
        auto res = client_->http.Put(path(graph), client_->headers, body, "text/turtle");
        if (!res) {
            ++stats_.failed;
            continue;
        }
        if (res->status == 410) stats_.finished = true;
        else if (res->status / 100 == 2) ++stats_.writes;
        else ++stats_.rejected;
    }
    ++stats_.loops;
    if (stats_.writes > writes_before) ++stats_.action_loops;
    return !stats_.finished;
}

AgentStats run_oracle(server::GraphStore& store, const tasks::TaskSpec& task, const Endpoint& endpoint,
                      const std::atomic<bool>* stop) {
    OracleAgent oracle(store, task, endpoint);
    std::int64_t last = -1;
    while (!(stop && stop->load()) && store.phase() != server::Phase::Finished) {
        std::int64_t t = store.iteration();
        if (t == last) {
            std::this_thread::sleep_for(std::chrono::microseconds(500));
            continue;
        }
        last = t;
        if (!oracle.step()) break;
    }
    return oracle.stats();
}

const char* to_string(AgentKind k) {
    switch (k) {
        case AgentKind::None: return "none";
        case AgentKind::Oracle: return "oracle";
        case AgentKind::Prefetch: return "prefetch";
        case AgentKind::Traversal: return "traversal";
    }
    return "?";
}

std::optional<AgentKind> agent_kind_from_string(const std::string& s) {
    for (auto k : {AgentKind::None, AgentKind::Oracle, AgentKind::Prefetch, AgentKind::Traversal})
        if (s == to_string(k)) return k;
    if (s == "noop" || s == "no-op") return AgentKind::None;
    return std::nullopt;
}

const rdf::Dataset& synthetic_building() {
    static const auto d = building::augment_datapoints(
                              building::partition(building::generate_synthetic(building::GeneratorParams{})))
                              .dataset;
    return d;
}

namespace {

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + p.string());
}

}  // namespace

BenchResult run_benchmark(const BenchConfig& cfg) {
    auto task = tasks::load_task(cfg.task_id, cfg.task_dir.empty() ? tasks::default_task_dir() : cfg.task_dir,
                                 cfg.base);
    const rdf::Dataset& building = cfg.building ? *cfg.building : synthetic_building();
    auto env = tasks::make_environment(task, building, cfg.seed, cfg.base);
    auto params = tasks::run_params(task, cfg.timeslot_ms);
    if (cfg.iterations >= 0) params.iterations = cfg.iterations;
    if (cfg.initial_time) params.initial_time = *cfg.initial_time;

    BenchResult result;
    result.dry = metrics::dry_run(env, params, task.faults);

    Program program;
    if (cfg.agent == AgentKind::Prefetch || cfg.agent == AgentKind::Traversal)
        program = load_program(cfg.task_id, cfg.rule_dir.empty() ? default_rule_dir() : cfg.rule_dir, cfg.base);
    AgentConfig acfg;
    acfg.name = to_string(cfg.agent);
    acfg.mode = cfg.agent == AgentKind::Traversal ? Mode::Traversal : Mode::Prefetch;
    acfg.base = cfg.base;
    acfg.reasoning = cfg.reasoning.value_or(task.reasoning);
    acfg.poll_ms = cfg.poll_ms;
    if (cfg.agent == AgentKind::Prefetch) acfg.prefetched = static_model(sim::Simulation(env, params).dataset(), cfg.base);

    server::GraphStore store(env, task.faults);
    server::HttpServer http(store, cfg.threads);
    int port = http.bind("127.0.0.1", cfg.port);
    if (port < 0) throw std::runtime_error("cannot bind port " + std::to_string(cfg.port));
    http.start();
    Endpoint endpoint{"127.0.0.1", port};

    {
        httplib::Client c(endpoint.host, endpoint.port);
        auto res = c.Put("/sim", server::run_params_turtle(params, cfg.base), "text/turtle");
        if (!res || res->status != 200) {
            http.stop();
            throw std::runtime_error("could not start the run");
        }
    }

    std::atomic<bool> stop{false};
    acfg.stop = &stop;
    std::string failure;
    std::thread worker([&] {
        try {
            if (cfg.agent == AgentKind::Oracle) result.agent = run_oracle(store, task, endpoint, &stop);
            else if (cfg.agent != AgentKind::None) result.agent = run_agent(program, acfg, endpoint);
        } catch (const std::exception& e) {
            failure = e.what();
        }
    });
    store.wait_finished();
    stop = true;
    worker.join();
    http.stop();

    result.trace = store.trace();
    result.ops = store.operations();
    result.slot_ms = store.slot_durations_ms();
    result.deadline_misses = store.deadline_misses();
    result.report = metrics::compute_metrics(result.trace, &result.dry, result.ops);
    if (result.deadline_misses > 0) {
        result.report.valid = false;
        result.report.note = std::to_string(result.deadline_misses) + " tick deadline misses";
    }
    if (!failure.empty()) {
        result.report.valid = false;
        result.report.note += (result.report.note.empty() ? "" : "; ") + ("agent failed: " + failure);
    }

    if (!cfg.out_dir.empty()) {
        std::filesystem::path dir(cfg.out_dir);
        std::filesystem::create_directories(dir);
        write_file(dir / "faults.tsv", metrics::faults_tsv(result.trace));
        write_file(dir / "dry-faults.tsv", metrics::faults_tsv(result.dry));
        write_file(dir / "ops.tsv", metrics::ops_tsv(result.ops));
        write_file(dir / "metrics.tsv", metrics::metrics_tsv(result.report));
    }
    return result;
}

}  // namespace ldsim::agent
