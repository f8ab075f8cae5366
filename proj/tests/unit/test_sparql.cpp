#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "ldsim/rdf/io.hpp"
#include "ldsim/rdf/temporal.hpp"
#include "ldsim/rdf/vocab.hpp"
#include "ldsim/sparql/eval.hpp"
#include "ldsim/sparql/parser.hpp"

using namespace ldsim;
using namespace ldsim::sparql;
using rdf::Dataset;
using rdf::Quad;

namespace {

const char* kPrefixes =
    "PREFIX ex: <http://ex.org/>\n"
    "PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>\n"
    "PREFIX bf: <http://buildsys.org/ontologies/BrickFrame#>\n"
    "PREFIX sim: <http://ldsim.example.org/sim#>\n"
    "PREFIX xsd: <http://www.w3.org/2001/XMLSchema#>\n";

Term ex(const std::string& s) { return Term::iri("http://ex.org/" + s); }

Dataset trig(const std::string& body) {
    return rdf::parse_document(std::string("@prefix ex: <http://ex.org/> .\n"
                                           "@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .\n"
                                           "@prefix bf: <http://buildsys.org/ontologies/BrickFrame#> .\n") +
                                   body,
                               rdf::Format::TriG);
}

Query q(const std::string& text) { return parse_query(std::string(kPrefixes) + text); }
Update u(const std::string& text) { return parse_update(std::string(kPrefixes) + text); }

Dataset lights() {
    return trig(R"(
        ex:l1 { ex:l1 rdf:value "on" }
        ex:l2 { ex:l2 rdf:value "on" }
        ex:l3 { ex:l3 rdf:value "on" }
        ex:l4 { ex:l4 rdf:value "off" }
    )");
}

}  // namespace

TEST(Parse, AskEmpty) {
    auto query = parse_query("ASK {}");
    EXPECT_EQ(query.form, Query::Form::Ask);
    EXPECT_TRUE(query.where.elements.empty());
}

TEST(Parse, AskWithFrom) {
    auto query = parse_query("ASK FROM <http://x/property-L1> { <http://x/property-L1#it> "
                             "<http://www.w3.org/1999/02/22-rdf-syntax-ns#value> \"on\" }");
    EXPECT_EQ(query.from.size(), 1u);
    EXPECT_EQ(query.where.elements.size(), 1u);
}

TEST(Parse, RelativeIrisUseBase) {
    auto query = parse_query("ASK { <sim> ?p ?o }", "http://localhost:8080/");
    EXPECT_EQ(query.where.elements[0].triple.s.term, Term::iri("http://localhost:8080/sim"));
    EXPECT_THROW(parse_query("ASK { <sim> ?p ?o }"), SyntaxError);
}

TEST(Parse, OutOfSubsetConstructsAreNamed) {
    auto construct = [](const std::string& text) -> std::string {
        try {
            if (text.find("INSERT") != std::string::npos || text.find("CLEAR") != std::string::npos)
                parse_update(text);
            else
                parse_query(text);
        } catch (const UnsupportedFeature& e) {
            return e.construct();
        }
        return "";
    };
    EXPECT_EQ(construct("SELECT ?s WHERE { ?s ?p ?o OPTIONAL { ?s ?q ?r } }"), "OPTIONAL");
    EXPECT_EQ(construct("SELECT ?s WHERE { { ?s ?p ?o } UNION { ?s ?q ?o } }"), "UNION");
    EXPECT_EQ(construct("SELECT ?s WHERE { ?s ?p ?o } LIMIT 1"), "LIMIT");
    EXPECT_EQ(construct("SELECT ?s WHERE { ?s ?p ?o } ORDER BY ?s"), "ORDER BY");
    EXPECT_EQ(construct("SELECT ?s WHERE { ?s <http://p>* ?o }"), "zero-or-more path");
    EXPECT_EQ(construct("SELECT ?s WHERE { ?s <http://p>|<http://q> ?o }"), "alternative path");
    EXPECT_EQ(construct("SELECT (COUNT(?s) AS ?n) WHERE { ?s ?p ?o }"), "SELECT expression");
    EXPECT_EQ(construct("SELECT ?s WHERE { ?s ?p ?o FILTER NOT EXISTS { ?s ?p 1 } }"), "EXISTS");
    EXPECT_EQ(construct("CONSTRUCT { ?s ?p ?o } WHERE { ?s ?p ?o }"), "CONSTRUCT");
    EXPECT_EQ(construct("SELECT ?s WHERE { ?s ?p ?o MINUS { ?s ?p 1 } }"), "MINUS");
    EXPECT_EQ(construct("SELECT ?s WHERE { { SELECT ?s WHERE { ?s ?p ?o } } }"), "subquery");
    EXPECT_EQ(construct("SELECT ?s WHERE { ?s ?p ?o FILTER(regex(?s, \"x\")) }"), "function REGEX");
    EXPECT_EQ(construct("CLEAR ALL"), "CLEAR");
}

TEST(Parse, Errors) {
    EXPECT_THROW(parse_query("SELECT ?x WHERE { ?s ?p ?o }"), SyntaxError);  // ?x not in pattern
    EXPECT_THROW(parse_query("SELECT ?s WHERE { ?s ?p }"), SyntaxError);
    EXPECT_THROW(parse_update("INSERT { ?a ?b ?c } WHERE { ?a ?b ?x }"), SyntaxError);
    EXPECT_THROW(parse_update("INSERT DATA { ?a <http://b> <http://c> }"), SyntaxError);
    try {
        parse_query("SELECT ?s\nWHERE { ?s ?p ?o");
        FAIL();
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
}

TEST(Eval, AskEmptyDatasetFalse) {
    EXPECT_FALSE(ask(Dataset(), q("ASK { ?s ?p ?o }")));
    EXPECT_TRUE(ask(Dataset(), q("ASK { }")));
}

TEST(Eval, SelectOnLights) {
    auto res = select(lights(), q("SELECT ?s WHERE { ?s rdf:value \"on\" }"));
    EXPECT_EQ(res.rows.size(), 3u);
}

TEST(Eval, GraphVariableExcludesDefaultGraph) {
    auto d = trig("ex:a ex:p ex:b . ex:g { ex:a ex:p ex:c }");
    auto res = select(d, q("SELECT ?g ?o WHERE { GRAPH ?g { ex:a ex:p ?o } }"));
    ASSERT_EQ(res.rows.size(), 1u);
    EXPECT_EQ(res.rows[0][0], ex("g"));
    // Without GRAPH the default graph is the union of everything.
    EXPECT_EQ(select(d, q("SELECT ?o WHERE { ex:a ex:p ?o }")).rows.size(), 2u);
}

TEST(Eval, UnionDefaultGraphDeduplicates) {
    auto d = trig("ex:a { ex:a ex:p ex:b } ex:b { ex:a ex:p ex:b }");
    auto res = select(d, q("SELECT ?x ?y WHERE { ?x ex:p ?y . ?x ex:p ?y }"));
    EXPECT_EQ(res.rows.size(), 1u);
}

TEST(Eval, TransitivePath) {
    auto d = trig(R"(
        ex:room bf:isPartOf ex:wing . ex:wing bf:isPartOf ex:floor . ex:floor bf:isPartOf ex:bldg .
    )");
    auto res = select(d, q("SELECT ?f WHERE { ex:room bf:isPartOf+ ?f }"));
    EXPECT_EQ(res.rows.size(), 3u);
    EXPECT_TRUE(ask(d, q("ASK { ex:room bf:isPartOf+ ex:floor }")));
    EXPECT_FALSE(ask(d, q("ASK { ex:floor bf:isPartOf+ ex:room }")));
    auto all = select(d, q("SELECT ?a ?b WHERE { ?a bf:isPartOf+ ?b }"));
    EXPECT_EQ(all.rows.size(), 6u);
    auto inv = select(d, q("SELECT ?r WHERE { ex:floor ^bf:isPartOf+ ?r }"));
    EXPECT_EQ(inv.rows.size(), 2u);
    auto seq = select(d, q("SELECT ?x WHERE { ex:room bf:isPartOf/bf:isPartOf ?x }"));
    ASSERT_EQ(seq.rows.size(), 1u);
    EXPECT_EQ(seq.rows[0][0], ex("floor"));
}

TEST(Eval, EvalPathDirect) {
    auto d = trig("ex:a ex:p ex:b . ex:b ex:p ex:c . ex:c ex:p ex:a .");
    Path plus;
    plus.kind = Path::Kind::OneOrMore;
    Path link;
    link.iri = ex("p");
    plus.parts.push_back(link);
    EXPECT_EQ(eval_path(d, plus, ex("a")).size(), 3u);  // cycle terminates, includes a
    EXPECT_TRUE(eval_path(d, plus, ex("zzz")).empty());
    auto chain = trig("ex:a ex:p ex:b . ex:b ex:p ex:c .");
    auto r = eval_path(chain, plus, ex("a"));
    EXPECT_EQ(std::set<Term>(r.begin(), r.end()), (std::set<Term>{ex("b"), ex("c")}));
}

TEST(Eval, FiltersAndNumericPromotion) {
    auto d = trig(R"(
        ex:a ex:lux 450 . ex:b ex:lux 500.0 . ex:c ex:lux "7e2"^^<http://www.w3.org/2001/XMLSchema#double> .
        ex:d ex:lux "bright" .
    )");
    EXPECT_EQ(select(d, q("SELECT ?s WHERE { ?s ex:lux ?v FILTER(?v < 500) }")).rows.size(), 1u);
    EXPECT_EQ(select(d, q("SELECT ?s WHERE { ?s ex:lux ?v FILTER(?v = 500) }")).rows.size(), 1u);
    EXPECT_EQ(select(d, q("SELECT ?s WHERE { ?s ex:lux ?v FILTER(?v >= 500) }")).rows.size(), 2u);
    // error-as-false: "bright" < 500 is a type error
    EXPECT_EQ(select(d, q("SELECT ?s WHERE { ?s ex:lux ?v FILTER(!(?v < 500)) }")).rows.size(), 2u);
    EXPECT_EQ(select(d, q("SELECT ?s WHERE { ?s ex:lux ?v FILTER(?v + 50 = 500) }")).rows.size(), 1u);
    EXPECT_EQ(select(d, q("SELECT ?s WHERE { ?s ex:lux ?v FILTER(?undefined < 3 || ?v > 600) }")).rows.size(), 1u);
}

TEST(Eval, TemporalComparison) {
    auto d = trig(R"(
        ex:r ex:sunrise "06:00:00"^^<http://www.w3.org/2001/XMLSchema#time> ;
             ex:sunset "21:00:00"^^<http://www.w3.org/2001/XMLSchema#time> .
    )");
    EvalContext ctx;
    ctx.time_of_day = rdf::time_literal(13 * 3600);
    auto day = q("ASK { ex:r ex:sunrise ?a ; ex:sunset ?b FILTER(sim:time() >= ?a && sim:time() < ?b) }");
    EXPECT_TRUE(ask(d, day, ctx));
    ctx.time_of_day = rdf::time_literal(22 * 3600);
    EXPECT_FALSE(ask(d, day, ctx));
    ctx.now = rdf::datetime_literal(1717200000);
    EXPECT_TRUE(ask(d, q("ASK { FILTER(sim:now() > \"2024-01-01T00:00:00\"^^xsd:dateTime) }"), ctx));
    EXPECT_TRUE(ask(d, q("ASK { FILTER(HOURS(\"08:30:00\"^^xsd:time) = 8) }"), ctx));
}

TEST(Eval, FilterScopeIsItsGroup) {
    auto d = trig("ex:a ex:p 1 . ex:a ex:q 2 .");
    // ?x is bound outside the inner group, so the inner filter sees it unbound.
    EXPECT_FALSE(ask(d, q("ASK { ex:a ex:p ?x { ex:a ex:q ?y FILTER(?x = 1) } }")));
    EXPECT_TRUE(ask(d, q("ASK { ex:a ex:p ?x { ex:a ex:q ?y } FILTER(?x = 1) }")));
}

TEST(Eval, Bind) {
    auto d = trig("ex:a ex:p 2 .");
    auto res = select(d, q("SELECT ?y WHERE { ex:a ex:p ?x BIND(?x * 10 AS ?y) }"));
    ASSERT_EQ(res.rows.size(), 1u);
    EXPECT_EQ(res.rows[0][0], Term::integer(20));
}

TEST(Update, NoMatchLeavesInput) {
    auto d = lights();
    auto out = eval_update(d, u("DELETE { ?s rdf:value \"x\" } WHERE { ?s rdf:value \"x\" }"));
    EXPECT_EQ(out, d);
}

TEST(Update, ToggleOffToOn) {
    auto d = trig("ex:v { ex:v rdf:value \"off\" }");
    auto out = eval_update(d, u("DELETE { GRAPH ?g { ?v rdf:value \"off\" } } INSERT { GRAPH ?g { ?v rdf:value \"on\" } } "
                                "WHERE { GRAPH ?g { ?v rdf:value \"off\" } }"));
    EXPECT_TRUE(out.contains({ex("v"), Term::iri(vocab::kRdfValue), Term::literal("on"), ex("v")}));
    EXPECT_EQ(out.size(), 1u);
}

TEST(Update, RandZeroThresholdNeverFires) {
    auto d = lights();
    auto upd = u("DELETE { GRAPH ?g { ?s rdf:value ?v } } WHERE { GRAPH ?g { ?s rdf:value ?v } FILTER(rand() < 0.0) }");
    for (int it = 0; it < 20; ++it) {
        EvalContext ctx{7, it, "u", {}, {}};
        EXPECT_EQ(eval_update(d, upd, ctx), d);
    }
}

TEST(Update, RandIsKeyedNotSequential) {
    auto d = trig(R"(
        ex:g1 { ex:s1 rdf:value 1 } ex:g2 { ex:s2 rdf:value 1 } ex:g3 { ex:s3 rdf:value 1 }
        ex:g4 { ex:s4 rdf:value 1 } ex:g5 { ex:s5 rdf:value 1 } ex:g6 { ex:s6 rdf:value 1 }
    )");
    auto upd = u("DELETE { GRAPH ?g { ?s rdf:value ?v } } INSERT { GRAPH ?g { ?s rdf:value 2 } } "
                 "WHERE { GRAPH ?g { ?s rdf:value ?v } FILTER(rand() < 0.5) }");
    EvalContext ctx{11, 3, "upd", {}, {}};
    auto a = eval_update(d, upd, ctx);
    // Removing one graph does not change the draws of the others.
    auto smaller = d.without_graph(ex("g1"));
    auto b = eval_update(smaller, upd, ctx);
    for (int i = 2; i <= 6; ++i) {
        Term g = ex("g" + std::to_string(i));
        EXPECT_EQ(a.graph(g).triples(), b.graph(g).triples());
    }
    EXPECT_EQ(eval_update(d, upd, ctx), a);
}

TEST(Update, SequenceAndDataForms) {
    auto upd = u("INSERT DATA { GRAPH ex:g { ex:a ex:p 1 } } ; "
                 "INSERT { GRAPH ex:g { ?s ex:q ?v } } WHERE { GRAPH ex:g { ?s ex:p ?v } } ; "
                 "DELETE DATA { GRAPH ex:g { ex:a ex:p 1 } }");
    auto out = eval_update(Dataset(), upd);
    EXPECT_EQ(out.size(), 1u);
    EXPECT_TRUE(out.contains({ex("a"), ex("q"), Term::integer(1), ex("g")}));
    auto dw = eval_update(out, u("DELETE WHERE { GRAPH ex:g { ?s ex:q ?v } }"));
    EXPECT_TRUE(dw.empty());
}

TEST(Update, UnboundTemplateVariableSkipsQuad) {
    auto d = trig("ex:a ex:p \"x\" .");
    UpdateStats stats;
    auto out = eval_update(d, u("INSERT { ex:a ex:q ?y } WHERE { ex:a ex:p ?x BIND(?x + 1 AS ?y) }"), {}, &stats);
    EXPECT_EQ(out, d);
    EXPECT_EQ(stats.skipped_quads, 1u);
}

// Property: FROM <g> gives the same answer as wrapping the pattern in GRAPH <g>.
TEST(Property, FromEqualsGraphWrapping) {
    std::mt19937 rng(3);
    for (int round = 0; round < 40; ++round) {
        std::vector<Quad> quads;
        for (int i = 0; i < 30; ++i)
            quads.push_back({ex("s" + std::to_string(rng() % 4)), ex("p" + std::to_string(rng() % 2)),
                             ex("s" + std::to_string(rng() % 4)), ex("g" + std::to_string(rng() % 3))});
        auto d = Dataset::from_quads(quads);
        std::string pat = "?a ex:p0 ?b . ?b ex:p" + std::to_string(rng() % 2) + " ?c";
        for (int g = 0; g < 3; ++g) {
            std::string gi = "<http://ex.org/g" + std::to_string(g) + ">";
            bool from = ask(d, q("ASK FROM " + gi + " { " + pat + " }"));
            bool wrapped = ask(d, q("ASK { GRAPH " + gi + " { " + pat + " } }"));
            EXPECT_EQ(from, wrapped);
            auto sf = select(d, q("SELECT ?a ?c FROM " + gi + " WHERE { " + pat + " }"));
            auto sw = select(d, q("SELECT ?a ?c WHERE { GRAPH " + gi + " { " + pat + " } }"));
            EXPECT_EQ(sf.rows, sw.rows);
        }
    }
}

// Property: with rand() thresholds at 1.0 an update equals a brute-force
// rewrite that enumerates every pair of quads.
TEST(Property, UpdateMatchesBruteForceOracle) {
    std::mt19937 rng(5);
    Term value = Term::iri(vocab::kRdfValue);
    for (int round = 0; round < 30; ++round) {
        std::vector<Quad> quads;
        for (int i = 0; i < 150; ++i) {
            int s = rng() % 12;
            if (rng() % 2)
                quads.push_back({ex("s" + std::to_string(s)), value, Term::literal(rng() % 2 ? "on" : "off"),
                                 ex("g" + std::to_string(s))});
            else
                quads.push_back({ex("s" + std::to_string(s)), ex("linked"), ex("s" + std::to_string(rng() % 12)),
                                 ex("g" + std::to_string(s))});
        }
        auto d = Dataset::from_quads(quads);
        auto upd = u("DELETE { GRAPH ?g { ?x rdf:value \"on\" } } INSERT { GRAPH ?g { ?x rdf:value \"off\" } } "
                     "WHERE { GRAPH ?g { ?x rdf:value \"on\" } ?x ex:linked ?y . GRAPH ?h { ?y rdf:value \"off\" } "
                     "FILTER(rand() < 1.0) }");
        EvalContext ctx{1, round, "oracle", {}, {}};
        auto got = eval_update(d, upd, ctx);

        // Oracle: nested loops over all quads.
        auto all = d.quads();
        std::set<Quad> rem, add;
        for (const auto& q1 : all) {
            if (q1.p != value || q1.o != Term::literal("on")) continue;
            for (const auto& q2 : all) {
                if (q2.s != q1.s || q2.p != ex("linked")) continue;
                for (const auto& q3 : all) {
                    if (q3.s != q2.o || q3.p != value || q3.o != Term::literal("off")) continue;
                    rem.insert(q1);
                    add.insert({q1.s, value, Term::literal("off"), q1.g});
                }
            }
        }
        std::set<Quad> expected(all.begin(), all.end());
        for (const auto& r : rem) expected.erase(r);
        expected.insert(add.begin(), add.end());
        auto exp_vec = std::vector<Quad>(expected.begin(), expected.end());
        EXPECT_EQ(got, Dataset::from_quads(exp_vec));
        // Frame property: only template graphs change.
        for (Term g : rdf::changed_graphs(d, got)) {
            bool in_template = std::any_of(rem.begin(), rem.end(), [&](const Quad& x) { return x.g == g; });
            EXPECT_TRUE(in_template);
        }
    }
}

TEST(Property, QueryDeterminism) {
    auto d = lights();
    auto query = q("SELECT ?s ?v WHERE { ?s rdf:value ?v FILTER(rand() < 0.5) }");
    EvalContext ctx{9, 4, "q", {}, {}};
    EXPECT_EQ(select(d, query, ctx).rows, select(d, query, ctx).rows);
}

TEST(BindingKey, CanonicalOrder) {
    EXPECT_EQ(binding_key({"b", "a"}, {Term::literal("x"), Term::iri("http://a")}), "?a=<http://a> ?b=\"x\"");
    EXPECT_EQ(binding_key({"a", "_:h"}, {Term::integer(1), Term::integer(2)}),
              "?a=\"1\"^^<http://www.w3.org/2001/XMLSchema#integer>");
}
