#include <gtest/gtest.h>

#include <random>

#include "ldsim/metrics/metrics.hpp"
#include "ldsim/rdf/io.hpp"
#include "ldsim/sparql/parser.hpp"

using namespace ldsim;
using namespace ldsim::metrics;

namespace {

// A trace of k iterations where slot t carries counts[t] distinct faults.
FaultTrace trace_of(const std::vector<int>& counts) {
    FaultTrace tr;
    for (int n : counts) {
        std::set<std::string> s;
        for (int i = 0; i < n; ++i) s.insert("f ?x=<urn:x:" + std::to_string(i) + ">");
        tr.raw.push_back(s);
    }
    return tr;
}

OperationRecord op(std::int64_t seq, std::string method, int status = 200, std::vector<std::string> delta = {}) {
    OperationRecord r;
    r.seq = seq;
    r.method = std::move(method);
    r.target = "http://localhost:8080/g";
    r.status = status;
    r.classification = r.method == "GET" ? OpClass::Read : OpClass::Replace;
    r.delta_graphs = std::move(delta);
    return r;
}

// Γ_t by definition: a key is a fault at t if it matched in each of the
// slots t-l+1..t.
std::vector<std::size_t> brute_counts(const FaultTrace& tr) {
    std::set<std::string> keys;
    for (const auto& s : tr.raw) keys.insert(s.begin(), s.end());
    std::vector<std::size_t> out;
    for (std::int64_t t = 0; t < std::int64_t(tr.raw.size()); ++t) {
        std::size_t n = 0;
        for (const auto& key : keys) {
            auto it = tr.lengths.find(key.substr(0, key.find(' ')));
            int l = it == tr.lengths.end() ? 1 : it->second;
            if (t + 1 < l) continue;
            bool all = true;
            for (std::int64_t j = t - l + 1; j <= t; ++j) all = all && tr.raw[j].count(key);
            n += all;
        }
        out.push_back(n);
    }
    return out;
}

const char* kLamps = R"(
@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .
@prefix sosa: <http://www.w3.org/ns/sosa/> .
)";

rdf::Dataset lamps(int n, std::mt19937& rng) {
    std::string text = kLamps;
    for (int i = 0; i < n; ++i) {
        std::string g = "<http://localhost:8080/lamp" + std::to_string(i) + ">";
        text += g + " { " + g.substr(0, g.size() - 1) + "#it> a sosa:ActuatableProperty ; rdf:value \"" +
                (rng() % 2 ? "on" : "off") + "\" . }\n";
    }
    return rdf::parse_document(text, rdf::Format::TriG);
}

FaultQuery lamp_on_query(int length = 1) {
    return {"on",
            sparql::parse_query("PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>\n"
                                "SELECT ?n WHERE { GRAPH ?g { ?n rdf:value \"on\" } }"),
            length};
}

}  // namespace

TEST(FaultRate, ThreeOfTenEligibleSlots) {
    // k = 10, l = 1: slots 1..10 are eligible; slot 0 is ignored.
    auto tr = trace_of({5, 1, 0, 0, 1, 0, 0, 0, 2, 0, 0});
    EXPECT_DOUBLE_EQ(fault_rate(tr), 3.0 / 10.0);
}

TEST(FaultRate, UndefinedWithoutEligibleSlot) {
    FaultTrace tr = trace_of({1, 1});
    tr.raw[0] = {"seq ?x=<urn:x:0>"};
    tr.raw[1] = {"seq ?x=<urn:x:0>"};
    tr.lengths["seq"] = 2;
    EXPECT_THROW(fault_rate(tr), MetricError);
    auto r = compute_metrics(tr, nullptr, {});
    EXPECT_FALSE(r.valid);
}

TEST(AverageFaultCount, OverFaultySlotsOnly) {
    auto tr = trace_of({9, 2, 0, 6});
    EXPECT_DOUBLE_EQ(average_fault_count(tr), 4.0);
    EXPECT_DOUBLE_EQ(average_fault_count(trace_of({3, 0, 0})), 0.0);
}

TEST(NormalizedFaultCount, HalfFixedAndSelf) {
    auto dry = trace_of({0, 2, 2, 4, 0});
    auto half = trace_of({0, 1, 1, 2, 0});
    EXPECT_DOUBLE_EQ(*normalized_fault_count(half, dry), 0.5);
    EXPECT_DOUBLE_EQ(*normalized_fault_count(dry, dry), 1.0);
    EXPECT_FALSE(normalized_fault_count(half, trace_of({4, 0, 0})).has_value());
}

TEST(ReadWriteRatio, CountsSuccessfulOperations) {
    std::vector<OperationRecord> ops;
    for (int i = 0; i < 12; ++i) ops.push_back(op(i, "GET"));
    for (int i = 0; i < 4; ++i) ops.push_back(op(12 + i, "PUT", 204, {"http://localhost:8080/g"}));
    ops.push_back(op(16, "PUT", 405));
    ops.push_back(op(17, "GET", 404));
    EXPECT_DOUBLE_EQ(*read_write_ratio(ops), 3.0);

    std::vector<OperationRecord> writes;
    for (int i = 0; i < 146; ++i) writes.push_back(op(i, "PUT", 204, {"http://localhost:8080/g"}));
    EXPECT_DOUBLE_EQ(*read_write_ratio(writes), 0.0);
    EXPECT_FALSE(read_write_ratio({op(0, "GET")}).has_value());

    auto r = compute_metrics(trace_of({0, 0}), nullptr, ops);
    EXPECT_EQ(r.reads, 12u);
    EXPECT_EQ(r.writes, 4u);
    EXPECT_EQ(r.rejected, 2u);
}

TEST(FaultTrace, SlidingWindowOfTwo) {
    // Three slots; key a holds in 0,1; b in 1,2; c only in 2.
    FaultTrace tr;
    tr.lengths["s"] = 2;
    tr.raw = {{"s a"}, {"s a", "s b"}, {"s b", "s c"}};
    EXPECT_EQ(tr.gamma(0), std::set<std::string>{});
    EXPECT_EQ(tr.gamma(1), std::set<std::string>{"s a"});
    EXPECT_EQ(tr.gamma(2), std::set<std::string>{"s b"});
    EXPECT_EQ(tr.counts(), brute_counts(tr));
    // k = 2, l = 2: only slot 2 is eligible.
    EXPECT_DOUBLE_EQ(fault_rate(tr), 1.0);
    EXPECT_DOUBLE_EQ(average_fault_count(tr), 1.0);
}

TEST(FaultTrace, RandomTracesMatchBruteForce) {
    std::mt19937 rng(3);
    for (int round = 0; round < 200; ++round) {
        FaultTrace tr;
        int k = 1 + int(rng() % 12);
        tr.lengths["a"] = 1 + int(rng() % 4);
        tr.lengths["b"] = 1;
        for (int t = 0; t <= k; ++t) {
            std::set<std::string> s;
            for (const char* id : {"a", "b"})
                for (int x = 0; x < 3; ++x)
                    if (rng() % 3 == 0) s.insert(std::string(id) + " ?x=" + std::to_string(x));
            tr.raw.push_back(s);
        }
        auto counts = brute_counts(tr);
        ASSERT_EQ(tr.counts(), counts);
        std::size_t eligible = 0, faulty = 0, total = 0;
        for (int t = tr.max_length(); t <= k; ++t) {
            ++eligible;
            faulty += counts[t] > 0;
            total += counts[t];
        }
        if (eligible == 0) {
            EXPECT_THROW(fault_rate(tr), MetricError);
            continue;
        }
        EXPECT_DOUBLE_EQ(fault_rate(tr), double(faulty) / double(eligible));
        EXPECT_DOUBLE_EQ(average_fault_count(tr), faulty ? double(total) / double(faulty) : 0.0);
        EXPECT_GE(fault_rate(tr), 0.0);
        EXPECT_LE(fault_rate(tr), 1.0);
    }
}

TEST(MatchFaults, AgreesWithDirectScan) {
    std::mt19937 rng(11);
    for (int round = 0; round < 20; ++round) {
        auto d = lamps(30, rng);
        std::set<std::string> expected;
        for (const auto& q : d.quads())
            if (q.p.value() == "http://www.w3.org/1999/02/22-rdf-syntax-ns#value" && q.o.value() == "on")
                expected.insert(sparql::binding_key({"n"}, {q.s}));
        EXPECT_EQ(match_faults(d, lamp_on_query()), expected);
    }
}

TEST(DryRun, TraceFollowsSimulationAndIsDeterministic) {
    std::mt19937 rng(5);
    sim::SimEnvironment env;
    env.initial = lamps(40, rng);
    env.sunlight = env.occupancy = false;
    env.seed = 9;
    env.updates.push_back({"flip", sparql::parse_update(R"(
        PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>
        DELETE { GRAPH ?g { ?n rdf:value ?v } } INSERT { GRAPH ?g { ?n rdf:value ?w } }
        WHERE { GRAPH ?g { ?n rdf:value ?v } FILTER(rand() < 0.1) BIND(IF(?v = "on", "off", "on") AS ?w) })")});
    sim::RunParams p;
    p.iterations = 30;
    std::vector<rdf::Dataset> snaps;
    auto tr = dry_run(env, p, {lamp_on_query()}, &snaps);
    ASSERT_EQ(tr.raw.size(), 31u);
    ASSERT_EQ(snaps.size(), 31u);
    EXPECT_EQ(tr.iterations(), 30);
    EXPECT_EQ(tr.max_length(), 1);
    for (std::size_t t = 0; t < snaps.size(); ++t) {
        std::size_t on = 0;
        for (const auto& q : snaps[t].quads()) on += q.o.value() == "on";
        EXPECT_EQ(tr.raw[t].size(), on);
    }
    EXPECT_EQ(dry_run(env, p, {lamp_on_query()}), tr);
}

TEST(Tsv, FaultTraceRoundTrip) {
    FaultTrace tr;
    tr.lengths["seq"] = 2;
    tr.raw = {{"seq ?x=<urn:a>"}, {}, {"seq ?x=<urn:a>", "f ?v=\"a\tb\\c\""}, {}};
    auto text = faults_tsv(tr);
    EXPECT_EQ(parse_faults_tsv(text), tr);
    EXPECT_EQ(text.substr(0, text.find('\n')), "# iterations\t3");
}

TEST(Tsv, OperationsRoundTripAndOfflineRecompute) {
    std::vector<OperationRecord> ops = {op(0, "GET"), op(1, "PUT", 204, {"http://localhost:8080/g"}),
                                        op(2, "DELETE", 405)};
    ops[1].payload = "<urn:a> <urn:b> \"x\\ty\\n\" .\n";
    ops[1].payload_size = ops[1].payload.size();
    ops[1].agent = "baseline";
    ops[1].timeslot = 7;
    auto parsed = parse_ops_tsv(ops_tsv(ops));
    EXPECT_EQ(parsed, ops);

    auto trace = trace_of({1, 0, 2, 2, 0, 1});
    auto dry = trace_of({1, 2, 2, 2, 2, 2});
    auto online = compute_metrics(trace, &dry, ops);
    auto offline = compute_metrics(parse_faults_tsv(faults_tsv(trace)), &dry, parsed);
    EXPECT_EQ(online, offline);
    auto m = parse_metrics_tsv(metrics_tsv(online));
    EXPECT_DOUBLE_EQ(std::stod(m.at("fault_rate")), online.fault_rate);
    EXPECT_DOUBLE_EQ(std::stod(m.at("normalized_fault_count")), *online.normalized_fault_count);
    EXPECT_DOUBLE_EQ(std::stod(m.at("read_write_ratio")), 1.0);
    EXPECT_EQ(m.at("valid"), "true");
    EXPECT_EQ(parse_metrics_tsv(metrics_tsv(compute_metrics(trace, nullptr, {}))).at("read_write_ratio"), "NA");
}

TEST(Audit, FlagsWritesTouchingOtherGraphs) {
    std::vector<OperationRecord> ok = {op(0, "GET"), op(1, "PUT", 204, {"http://localhost:8080/g"}),
                                       op(2, "PUT", 204), op(3, "POST", 405)};
    EXPECT_TRUE(audit_operations(ok).empty());
    auto bad = ok;
    bad.push_back(op(4, "PUT", 204, {"http://localhost:8080/g", "http://localhost:8080/h"}));
    bad.push_back(op(5, "PUT", 204, {"http://localhost:8080/h"}));
    bad.push_back(op(6, "GET", 200, {"http://localhost:8080/g"}));
    EXPECT_EQ(audit_operations(bad).size(), 3u);
}
