#include <gtest/gtest.h>

#include <random>

#include "ldsim/building/building.hpp"
#include "ldsim/rdf/io.hpp"
#include "ldsim/rdf/vocab.hpp"
#include "ldsim/sparql/eval.hpp"
#include "ldsim/sparql/parser.hpp"

using namespace ldsim;
using namespace ldsim::building;
using rdf::Quad;

namespace {

Term ex(const std::string& s) { return Term::iri("http://ex.org/" + s); }

const PartitionedDataset& full_building() {
    static const PartitionedDataset pd = augment_datapoints(partition(generate_synthetic(GeneratorParams{})));
    return pd;
}

}  // namespace

TEST(Partition, SubjectAndObjectGraphs) {
    std::vector<Triple> t = {{ex("a"), ex("p"), ex("b")}};
    auto d = partition(t);
    EXPECT_EQ(d.size(), 2u);
    EXPECT_TRUE(d.contains({ex("a"), ex("p"), ex("b"), ex("a")}));
    EXPECT_TRUE(d.contains({ex("a"), ex("p"), ex("b"), ex("b")}));

    std::vector<Triple> lit = {{ex("a"), ex("p"), Term::literal("5")}};
    auto d2 = partition(lit);
    EXPECT_EQ(d2.size(), 1u);
    EXPECT_TRUE(d2.contains({ex("a"), ex("p"), Term::literal("5"), ex("a")}));
    EXPECT_TRUE(partition({}).empty());
}

TEST(Partition, SkolemObjectsStayInSubjectGraph) {
    auto sk = rdf::skolemize(rdf::parse_document("<http://ex.org/a> <http://ex.org/p> [] .", rdf::Format::Turtle),
                             "http://ex.org/");
    std::vector<Triple> t;
    for (const auto& q : sk.quads()) t.push_back(q.triple());
    auto d = partition(t);
    EXPECT_EQ(d.size(), 1u);
    EXPECT_EQ(rdf::graph_projection(d), std::set<Term>{ex("a")});
}

// Property: on random graphs the partition deduplicates back to the input,
// and its graph names are exactly the subjects and IRI objects.
TEST(Partition, LawOnRandomGraphs) {
    std::mt19937 rng(11);
    for (int round = 0; round < 30; ++round) {
        std::set<Triple> input;
        int n = 1 + int(rng() % 400);
        for (int i = 0; i < n; ++i) {
            Term s = ex("n" + std::to_string(rng() % 60));
            Term p = ex("p" + std::to_string(rng() % 4));
            Term o = rng() % 3 == 0 ? Term::integer(rng() % 10) : ex("n" + std::to_string(rng() % 60));
            input.insert({s, p, o});
        }
        std::vector<Triple> triples(input.begin(), input.end());
        auto d = partition(triples);
        std::set<Triple> back;
        std::set<Term> names;
        for (const auto& t : triples) {
            names.insert(t.s);
            if (t.o.is_iri()) names.insert(t.o);
        }
        for (const auto& q : d.quads()) {
            back.insert(q.triple());
            EXPECT_TRUE(q.g == q.s || q.g == q.o);
        }
        EXPECT_EQ(back, input);
        EXPECT_EQ(rdf::graph_projection(d), names);
    }
}

TEST(Generator, Table1Counts) {
    const auto& pd = full_building();
    Counts c = count_building(pd);
    EXPECT_EQ(c.lighting_systems, 278);
    EXPECT_EQ(c.systems_with_occupancy, 156);
    EXPECT_EQ(c.systems_with_commands, 105);
    EXPECT_EQ(c.systems_with_luminance, 48);
    EXPECT_EQ(c.rooms, 281);
    EXPECT_EQ(c.rooms_with_occupancy, 66);
    EXPECT_EQ(c.rooms_with_commands, 38);
    EXPECT_EQ(c.rooms_with_luminance, 20);
    EXPECT_EQ(c.floors, 2);
    EXPECT_EQ(c.wings, 3);
    EXPECT_EQ(c.command_points, 146);
    EXPECT_EQ(c.luminance_points, 64);
    EXPECT_EQ(c.setpoint_points, 64);
    EXPECT_EQ(c.dynamic_resources, 551);
    auto report = validate_counts(pd, GeneratorParams{});
    EXPECT_TRUE(report.all_pass()) << report.to_string();
    EXPECT_GT(c.resources, 2800);
    EXPECT_LT(c.resources, 3800);
}

TEST(Generator, RemovedLightFailsValidation) {
    auto triples = generate_synthetic(GeneratorParams{});
    Term cls = Term::iri(vocab::kBrickLightingSystem);
    auto it = std::find_if(triples.begin(), triples.end(), [&](const Triple& t) { return t.o == cls; });
    ASSERT_NE(it, triples.end());
    triples.erase(it);
    auto report = validate_counts(augment_datapoints(partition(triples)), GeneratorParams{});
    EXPECT_FALSE(report.all_pass());
    for (const auto& line : report.lines)
        if (line.name == "lighting systems") EXPECT_FALSE(line.pass());
}

TEST(Generator, DeterministicPerSeed) {
    GeneratorParams p;
    auto a = generate_synthetic(p), b = generate_synthetic(p);
    EXPECT_EQ(a, b);
    p.seed = 2;
    EXPECT_NE(a, generate_synthetic(p));
}

TEST(Generator, MinimalBuilding) {
    GeneratorParams p;
    p.rooms = p.floors = p.wings = 1;
    p.rooms_with_occupancy = p.rooms_with_commands = p.rooms_with_luminance = 0;
    p.lighting_systems = 1;
    p.systems_with_occupancy = p.systems_with_commands = p.systems_with_luminance = 0;
    p.occupancy_points = p.command_points = p.luminance_points = p.hygiene_commands = 0;
    p.wing_systems = 0;
    p.filler_resources = 0;
    auto pd = augment_datapoints(partition(generate_synthetic(p)));
    Counts c = count_building(pd);
    EXPECT_EQ(c.lighting_systems, 1);
    EXPECT_EQ(c.rooms, 1);
    EXPECT_EQ(c.dynamic_resources, 0);
    EXPECT_TRUE(validate_counts(pd, p).all_pass());
}

TEST(Generator, InfeasibleParamsRejected) {
    GeneratorParams p;
    p.systems_with_occupancy = 300;
    EXPECT_THROW(generate_synthetic(p), InfeasibleParams);
    GeneratorParams q;
    q.rooms_with_luminance = 70;
    EXPECT_THROW(generate_synthetic(q), InfeasibleParams);
}

TEST(Generator, GraphSizesMostlyBetween5And50) {
    auto d = partition(generate_synthetic(GeneratorParams{}));
    auto sizes = graph_sizes(d);
    std::size_t outliers = 0;
    for (auto n : sizes) outliers += (n < 5 || n > 50);
    EXPECT_LE(double(outliers), 0.01 * double(sizes.size())) << outliers << " of " << sizes.size();
}

TEST(Augment, PropertyGraphsAndLinks) {
    const auto& pd = full_building();
    auto base = partition(generate_synthetic(GeneratorParams{}));
    // Only property graphs are new; the only change to existing graphs is
    // the point -> property link in the point's graph.
    for (Term g : rdf::changed_graphs(base, pd.dataset)) {
        if (pd.dynamic_resources.count(g)) {
            EXPECT_FALSE(base.has_graph(g));
            EXPECT_EQ(g.value().find("http://localhost:8080/property-"), 0u);
            auto graph = pd.dataset.graph(g);
            EXPECT_EQ(graph.size(), 3u);
            int values = 0;
            for (const auto& t : graph) {
                EXPECT_EQ(t.s, Term::iri(g.value() + "#it"));
                values += t.p == Term::iri(vocab::kRdfValue);
            }
            EXPECT_EQ(values, 1);
        } else {
            auto before = base.graph(g), after = pd.dataset.graph(g);
            EXPECT_EQ(after.size(), before.size() + 1);
            for (const auto& t : after)
                if (!before.contains(t)) {
                    EXPECT_EQ(t.s, g);
                    EXPECT_EQ(t.o, property_node(g));
                }
        }
    }
}

TEST(Augment, NoLightingPointsNoGraphs) {
    std::vector<Triple> t = {{ex("sys"), Term::iri(vocab::kRdfType), Term::iri(vocab::kBrickLightingSystem)},
                             {ex("sys"), Term::iri(vocab::kBfHasPoint), ex("mystery")}};
    std::vector<std::string> warnings;
    auto d = partition(t);
    auto pd = augment_datapoints(d, &warnings);
    EXPECT_TRUE(pd.dynamic_resources.empty());
    EXPECT_EQ(pd.dataset, d);
    EXPECT_EQ(warnings.size(), 1u);
}

TEST(Augment, PropertyIriScheme) {
    Term pt = Term::iri("http://localhost:8080/Occupancy_Sensor_42GFLCoffeeDock");
    EXPECT_EQ(property_graph(pt).value(), "http://localhost:8080/property-Occupancy_Sensor_42GFLCoffeeDock");
    EXPECT_EQ(property_node(pt).value(), "http://localhost:8080/property-Occupancy_Sensor_42GFLCoffeeDock#it");
}

TEST(Generator, HygieneRoomsHoldSixCommands) {
    auto q = sparql::parse_query(R"(
        PREFIX bf: <http://buildsys.org/ontologies/BrickFrame#>
        PREFIX brick: <http://buildsys.org/ontologies/Brick#>
        PREFIX rdfs: <http://www.w3.org/2000/01/rdf-schema#>
        SELECT ?cmd WHERE {
            ?room a ?cls . ?cls rdfs:subClassOf+ <PersonalHygiene> .
            ?sys bf:feeds ?room ; bf:hasPoint ?cmd . ?cmd a brick:Luminance_Command .
        })",
                                 "http://localhost:8080/");
    EXPECT_EQ(sparql::select(full_building().dataset, q).rows.size(), 6u);
}

TEST(Generator, SensedLightsArePaired) {
    auto q = sparql::parse_query(R"(
        SELECT ?cmd WHERE { ?sen <feedbackFor> ?cmd . ?set <setpointFor> ?cmd . })",
                                 "http://localhost:8080/");
    EXPECT_EQ(sparql::select(full_building().dataset, q).rows.size(), 64u);
}

TEST(Generator, RoomsReachFloorsOnlyTransitively) {
    auto direct = sparql::parse_query(
        "SELECT ?r WHERE { ?f <http://buildsys.org/ontologies/BrickFrame#hasPart> ?r . ?r a "
        "<http://buildsys.org/ontologies/Brick#Room> . ?f a <http://buildsys.org/ontologies/Brick#Floor> }");
    auto path = sparql::parse_query(
        "SELECT ?r WHERE { ?f <http://buildsys.org/ontologies/BrickFrame#hasPart>+ ?r . ?r a "
        "<http://buildsys.org/ontologies/Brick#Room> . ?f a <http://buildsys.org/ontologies/Brick#Floor> }");
    EXPECT_EQ(sparql::select(full_building().dataset, direct).rows.size(), 0u);
    EXPECT_EQ(sparql::select(full_building().dataset, path).rows.size(), 281u);
}
