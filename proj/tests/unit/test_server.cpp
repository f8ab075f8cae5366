#include <gtest/gtest.h>

#include <random>
#include <thread>

#include "httplib.h"
#include "ldsim/building/building.hpp"
#include "ldsim/rdf/io.hpp"
#include "ldsim/server/http.hpp"
#include "ldsim/server/store.hpp"
#include "ldsim/tasks/tasks.hpp"

using namespace ldsim;
using namespace ldsim::server;

namespace {

const std::string kBase = "http://localhost:8080/";

const rdf::Dataset& building_dataset() {
    static const auto d = building::augment_datapoints(
                              building::partition(building::generate_synthetic(building::GeneratorParams{})))
                              .dataset;
    return d;
}

std::unique_ptr<GraphStore> store_for(const std::string& id, bool manual = true, Policy policy = {}) {
    auto t = tasks::load_task(id);
    return std::make_unique<GraphStore>(tasks::make_environment(t, building_dataset(), 1), t.faults, policy, manual);
}

sim::RunParams params(std::int64_t iterations, std::int64_t timeslot_ms = 10) {
    sim::RunParams p;
    p.iterations = iterations;
    p.timeslot_ms = timeslot_ms;
    return p;
}

// First light command property graph of the building.
std::string first_light() {
    std::string out;
    building_dataset().match({}, {}, rdf::Term::iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type"),
                             rdf::Term::iri("http://www.w3.org/ns/sosa/ActuatableProperty"),
                             [&](const rdf::Quad& q) {
                                 if (out.empty() && q.g.value().find("Luminance_Command") != std::string::npos)
                                     out = q.g.value();
                             });
    return out;
}

std::string light_payload(const std::string& graph, const std::string& value) {
    return "@prefix sosa: <http://www.w3.org/ns/sosa/> .\n"
           "@prefix ssn: <http://www.w3.org/ns/ssn/> .\n"
           "@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .\n<" +
           graph + "#it> a sosa:ActuatableProperty, ssn:Property ; rdf:value \"" + value + "\" .\n";
}

}  // namespace

TEST(GraphStore, ReadsGraphsButNotTheDefaultGraph) {
    auto s = store_for("TS1");
    std::string room_iri;
    for (auto n : building_dataset().graph_names())
        if (room_iri.empty() && n.value().find("/Room_") != std::string::npos) room_iri = n.value();
    auto room = s->get(room_iri);
    EXPECT_EQ(room.status, 200);
    EXPECT_EQ(room.content_type, "text/turtle");
    EXPECT_NE(room.body.find("hasPart"), std::string::npos);
    EXPECT_EQ(s->get(kBase + "no-such-resource").status, 404);
    EXPECT_EQ(s->get(rdf::default_graph().value()).status, 404);
    auto nt = s->get(kBase + "Building", "application/n-triples");
    EXPECT_EQ(nt.status, 200);
    EXPECT_EQ(nt.content_type, "application/n-triples");
}

TEST(GraphStore, SimResourceTracksIterations) {
    auto s = store_for("TS1");
    ASSERT_EQ(s->start(params(10)).status, 200);
    for (int i = 0; i < 4; ++i) s->end_slot();
    auto r = s->get(s->sim_iri(), "application/n-triples");
    ASSERT_EQ(r.status, 200);
    EXPECT_NE(r.body.find("currentIteration> \"4\"^^<http://www.w3.org/2001/XMLSchema#integer>"), std::string::npos)
        << r.body;
}

TEST(GraphStore, PutSwitchesALight) {
    auto s = store_for("TS1");
    std::string light = first_light();
    ASSERT_FALSE(light.empty());
    EXPECT_TRUE(s->writable(light));
    // No writes before the run starts.
    EXPECT_EQ(s->put(light, light_payload(light, "off"), "text/turtle").status, 409);
    ASSERT_EQ(s->start(params(5)).status, 200);
    EXPECT_EQ(s->put(light, light_payload(light, "off"), "text/turtle").status, 204);
    EXPECT_NE(s->get(light).body.find("\"off\""), std::string::npos);
    EXPECT_EQ(s->put(light, light_payload(light, "on"), "text/turtle").status, 204);
    EXPECT_NE(s->get(light).body.find("\"on\""), std::string::npos);
}

TEST(GraphStore, RejectedWritesLeaveTheDatasetUnchanged) {
    auto s = store_for("TS1");
    ASSERT_EQ(s->start(params(5)).status, 200);
    std::string light = first_light();
    auto before = s->snapshot();
    EXPECT_EQ(s->put(kBase + "Building", light_payload(kBase + "Building", "off")).status, 403);
    EXPECT_EQ(s->put(light, "<#it> <http://x/p> \"unterminated").status, 400);
    EXPECT_EQ(s->put(light, light_payload(kBase + "Building", "off")).status, 400);
    EXPECT_EQ(s->put(light, "").status, 400);
    EXPECT_EQ(s->post(light, light_payload(light, "off")).status, 405);
    EXPECT_EQ(s->del(light).status, 405);
    EXPECT_EQ(s->snapshot(), before);
    for (const auto& op : s->operations()) {
        EXPECT_FALSE(op.succeeded());
        EXPECT_TRUE(op.delta_graphs.empty());
    }
}

TEST(GraphStore, PostAndDeleteWhenAllowed) {
    Policy p;
    p.allow_post = p.allow_delete = true;
    auto s = store_for("TS1", true, p);
    ASSERT_EQ(s->start(params(5)).status, 200);
    std::string light = first_light();
    EXPECT_EQ(s->post(light, "<#it> <http://example.org/note> \"x\" .").status, 204);
    EXPECT_NE(s->get(light).body.find("http://example.org/note"), std::string::npos);
    EXPECT_EQ(s->del(light).status, 204);
    EXPECT_EQ(s->get(light).status, 404);
    EXPECT_EQ(s->put(light, light_payload(light, "off")).status, 201);
    auto ops = s->operations();
    std::vector<metrics::OpClass> classes;
    for (const auto& op : ops)
        if (!op.is_read()) classes.push_back(op.classification);
    EXPECT_EQ(classes, (std::vector<metrics::OpClass>{metrics::OpClass::Replace, metrics::OpClass::Delete,
                                                       metrics::OpClass::Create}));
    EXPECT_TRUE(metrics::audit_operations(ops).empty());
}

TEST(GraphStore, SimPutStartsOnce) {
    auto s = store_for("TS1");
    EXPECT_EQ(s->put(s->sim_iri(), "<sim> <http://ldsim.example.org/sim#iterations> 10 .").status, 400);
    EXPECT_EQ(s->put(s->sim_iri(), "not turtle at all").status, 400);
    EXPECT_EQ(s->phase(), Phase::Ready);
    auto body = run_params_turtle(params(12, 5), kBase);
    EXPECT_EQ(s->put(s->sim_iri(), body).status, 200);
    EXPECT_EQ(s->phase(), Phase::Running);
    EXPECT_EQ(s->iteration(), 0);
    EXPECT_EQ(s->params().iterations, 12);
    EXPECT_EQ(s->put(s->sim_iri(), body).status, 409);
}

TEST(GraphStore, RunParamsRoundTrip) {
    sim::RunParams p;
    p.initial_time = 1653300000;
    p.timeslot_ms = 250;
    p.iterations = 77;
    p.step_seconds = 30;
    auto q = parse_run_params(run_params_turtle(p, kBase), kBase);
    EXPECT_EQ(q.initial_time, p.initial_time);
    EXPECT_EQ(q.timeslot_ms, p.timeslot_ms);
    EXPECT_EQ(q.iterations, p.iterations);
    EXPECT_EQ(q.step_seconds, p.step_seconds);
}

TEST(GraphStore, OperationsAttributedToSlots) {
    auto s = store_for("TS1");
    ASSERT_EQ(s->start(params(10)).status, 200);
    EXPECT_TRUE(s->operations().empty());
    for (int i = 0; i < 5; ++i) s->end_slot();
    std::string light = first_light();
    for (int i = 0; i < 3; ++i) s->get(light, {}, "scripted");
    s->put(light, light_payload(light, "off"), "text/turtle", "scripted");
    while (s->end_slot()) {
    }
    auto ops = s->operations();
    ASSERT_EQ(ops.size(), 4u);
    std::size_t reads = 0;
    for (const auto& op : ops) {
        EXPECT_EQ(op.timeslot, 5);
        EXPECT_EQ(op.agent, "scripted");
        reads += op.is_read();
    }
    EXPECT_EQ(reads, 3u);
    auto trace = s->trace();
    EXPECT_EQ(trace.iterations(), 10);
    EXPECT_EQ(trace.raw[4].size(), 146u);
    EXPECT_EQ(trace.raw[5].size(), 145u);
    // Requests after the run are refused.
    EXPECT_EQ(s->get(light).status, 410);
    EXPECT_EQ(s->get(s->sim_iri()).status, 200);
}

TEST(GraphStore, ReplayReproducesTheRun) {
    auto s = store_for("TC5");
    auto p = params(40);
    p.initial_time += 8 * 3600;
    ASSERT_EQ(s->start(p).status, 200);
    std::mt19937 rng(1);
    std::vector<std::string> graphs;
    s->snapshot().for_each_graph([&](const rdf::Graph& g) {
        if (s->writable(g.name().value()) && g.name().value().find("Command") != std::string::npos)
            graphs.push_back(g.name().value());
    });
    ASSERT_EQ(graphs.size(), 146u);
    do {
        for (int i = 0; i < 3; ++i) {
            const auto& g = graphs[rng() % graphs.size()];
            s->put(g, light_payload(g, rng() % 2 ? "on" : "off"));
        }
    } while (s->end_slot());
    auto ops = s->operations();
    EXPECT_TRUE(metrics::audit_operations(ops).empty());
    EXPECT_EQ(replay(s->environment(), p, ops), s->snapshot());
    // Round trip through ops.tsv.
    EXPECT_EQ(replay(s->environment(), p, metrics::parse_ops_tsv(metrics::ops_tsv(ops))), s->snapshot());
}

TEST(GraphStore, ClockRunsToTheEnd) {
    auto s = store_for("TS1", false);
    ASSERT_EQ(s->start(params(20, 5)).status, 200);
    s->wait_finished();
    EXPECT_EQ(s->phase(), Phase::Finished);
    EXPECT_EQ(s->iteration(), 20);
    EXPECT_EQ(s->trace().raw.size(), 21u);
    auto r = s->get(s->sim_iri());
    EXPECT_NE(r.body.find("finished"), std::string::npos);
}

TEST(HttpServer, GraphStoreProtocolOverHttp) {
    auto s = store_for("TS1", false);
    HttpServer http(*s, 4);
    int port = http.bind("127.0.0.1", 0);
    ASSERT_GT(port, 0);
    http.start();
    httplib::Client c("127.0.0.1", port);
    httplib::Headers agent = {{kAgentHeader, "tester"}};

    auto b = c.Get("/Building", agent);
    ASSERT_TRUE(b);
    EXPECT_EQ(b->status, 200);
    EXPECT_EQ(c.Get("/nothing-here", agent)->status, 404);

    std::string light = first_light();
    std::string path = light.substr(kBase.size() - 1);
    EXPECT_EQ(c.Put(path, agent, light_payload(light, "off"), "text/turtle")->status, 409);
    auto started = c.Put("/sim", run_params_turtle(params(1000, 20), kBase), "text/turtle");
    ASSERT_TRUE(started);
    EXPECT_EQ(started->status, 200);
    EXPECT_EQ(c.Put("/sim", run_params_turtle(params(1000, 20), kBase), "text/turtle")->status, 409);
    EXPECT_EQ(c.Put(path, agent, light_payload(light, "off"), "text/turtle")->status, 204);
    auto got = c.Get(path, {{"Accept", "application/n-triples"}, {kAgentHeader, "tester"}});
    EXPECT_EQ(got->get_header_value("Content-Type"), "application/n-triples");
    EXPECT_NE(got->body.find("\"off\""), std::string::npos);
    EXPECT_EQ(c.Put("/Building", agent, light_payload(kBase + "Building", "x"), "text/turtle")->status, 403);
    EXPECT_EQ(c.Delete(path, agent)->status, 405);
    http.stop();

    auto ops = s->operations();
    // Run control through `sim` is not an agent operation.
    ASSERT_EQ(ops.size(), 7u);
    for (const auto& op : ops) EXPECT_EQ(op.agent, "tester");
}

TEST(HttpServer, ConcurrentClientsDuringTicks) {
    auto s = store_for("TS1", false);
    HttpServer http(*s, 8);
    int port = http.bind("127.0.0.1", 0);
    http.start();
    auto p = params(60, 5);
    ASSERT_EQ(s->start(p).status, 200);
    std::vector<std::string> graphs;
    s->snapshot().for_each_graph([&](const rdf::Graph& g) {
        if (s->writable(g.name().value()) && g.name().value().find("Command") != std::string::npos)
            graphs.push_back(g.name().value());
    });
    std::vector<std::thread> clients;
    for (int c = 0; c < 4; ++c)
        clients.emplace_back([&, c] {
            httplib::Client cl("127.0.0.1", port);
            std::mt19937 rng(c);
            while (s->phase() == Phase::Running) {
                const auto& g = graphs[rng() % graphs.size()];
                auto path = g.substr(kBase.size() - 1);
                if (rng() % 2) cl.Get(path);
                else cl.Put(path, light_payload(g, rng() % 2 ? "on" : "off"), "text/turtle");
            }
        });
    for (auto& t : clients) t.join();
    s->wait_finished();
    http.stop();
    auto ops = s->operations();
    EXPECT_GT(ops.size(), 50u);
    EXPECT_TRUE(metrics::audit_operations(ops).empty());
    EXPECT_EQ(replay(s->environment(), p, ops), s->snapshot());
}
