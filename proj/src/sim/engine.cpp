#include "ldsim/sim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ldsim/rdf/temporal.hpp"
#include "ldsim/rdf/vocab.hpp"
#include "ldsim/sim/keyed_rand.hpp"
#include "ldsim/sparql/parser.hpp"

namespace ldsim::sim {

namespace v = ldsim::vocab;

void RunParams::check() const {
    if (iterations < 1) throw std::invalid_argument("iterations must be at least 1");
    if (timeslot_ms < 0) throw std::invalid_argument("timeslot duration must not be negative");
    if (step_seconds < 1) throw std::invalid_argument("simulated step must be at least one second");
}

Dataset set_value(const Dataset& d, const PropertyRef& ref, Term value) {
    const Term rdf_value = Term::iri(v::kRdfValue);
    auto g = d.graph(ref.graph);
    std::vector<rdf::Triple> out;
    out.reserve(g.size() + 1);
    int matches = 0;
    bool same = false;
    for (const auto& t : g) {
        if (t.s == ref.node && t.p == rdf_value) {
            ++matches;
            same = t.o == value;
            continue;
        }
        out.push_back(t);
    }
    if (matches == 1 && same) return d;
    out.push_back({ref.node, rdf_value, value});
    return d.with_graph(ref.graph, std::move(out));
}

Term get_value(const Dataset& d, const PropertyRef& ref) {
    for (const auto& t : d.graph(ref.graph).with_subject(ref.node))
        if (t.p.value() == v::kRdfValue) return t.o;
    return {};
}

namespace {

std::string namespace_of(const std::string& iri) { return iri.substr(0, iri.find_last_of("/#") + 1); }
std::string local_name(const std::string& iri) { return iri.substr(iri.find_last_of("/#") + 1); }

std::map<Term, std::vector<PropertyRef>> sensors_by_room(const Dataset& d, std::string_view point_class) {
    auto q = sparql::parse_query(
        "PREFIX bf: <http://buildsys.org/ontologies/BrickFrame#>\n"
        "PREFIX sosa: <http://www.w3.org/ns/sosa/>\n"
        "PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>\n"
        "SELECT ?room ?g ?node WHERE {\n"
        "  ?sys bf:feeds ?room ; bf:hasPoint ?pt .\n"
        "  ?pt a <" + std::string(point_class) + "> ; sosa:observes ?node .\n"
        "  GRAPH ?g { ?node rdf:value ?v }\n"
        "}");
    auto sol = sparql::select(d, q);
    std::map<Term, std::vector<PropertyRef>> out;
    for (const auto& row : sol.rows) out[row[0]].push_back({row[1], row[2]});
    return out;
}

}  // namespace

Simulation::Simulation(SimEnvironment env, RunParams params) : env_(std::move(env)), params_(params) {
    params_.check();
    state_.dataset = env_.initial;
    state_.t = 0;
    write_time_graph();
    apply(env_.init_updates);
    bind_processes();
    run_processes();
}

Term Simulation::sim_resource() const { return Term::iri(env_.base + "sim"); }

double Simulation::seconds_of_day() const {
    std::int64_t s = now() % 86400;
    return double(s < 0 ? s + 86400 : s);
}

CoverageProfile Simulation::coverage_profile(std::int64_t day) const {
    return {keyed_rand(env_.seed, day, "coverage", "sunrise"), keyed_rand(env_.seed, day, "coverage", "sunset")};
}

double Simulation::outside_lux() const {
    std::int64_t n = now();
    std::int64_t day = n >= 0 ? n / 86400 : (n - 86399) / 86400;
    return outside_illuminance(seconds_of_day(), coverage_profile(day));
}

sparql::EvalContext Simulation::context(const std::string& update_id) const {
    sparql::EvalContext ctx;
    ctx.seed = env_.seed;
    ctx.iteration = state_.t;
    ctx.update_id = update_id;
    ctx.now = rdf::datetime_literal(now());
    ctx.time_of_day = rdf::time_literal(std::int64_t(seconds_of_day()));
    return ctx;
}

void Simulation::write_time_graph() {
    Term sim = sim_resource();
    Term clock = Term::iri(sim.value() + "#time");
    auto p = [](std::string_view iri) { return Term::iri(iri); };
    std::vector<rdf::Triple> g = {
        {sim, p(v::kRdfType), p(v::kSimSimulation)},
        {sim, p(v::kSimCurrentIteration), Term::integer(state_.t)},
        {sim, p(v::kSimCurrentTime), clock},
        {sim, p(v::kSimInitialTime), rdf::datetime_literal(params_.initial_time)},
        {sim, p(v::kSimTimeslotDuration), Term::integer(params_.timeslot_ms)},
        {sim, p(v::kSimIterations), Term::integer(params_.iterations)},
        {sim, p(v::kSimStepDuration), Term::integer(params_.step_seconds * 1000)},
        {sim, p(v::kSimStatus), Term::literal(finished() ? "finished" : "running")},
        {clock, p(v::kTimeInXSDDateTimeStamp), rdf::datetime_literal(now())},
        {clock, p(v::kSimTimeOfDay), rdf::time_literal(std::int64_t(seconds_of_day()))},
    };
    std::sort(g.begin(), g.end());
    state_.dataset = state_.dataset.with_graph(sim, std::move(g));
}

void Simulation::bind_processes() {
    const Dataset& d = state_.dataset;
    if (env_.occupancy) {
        state_.occupancy_sensors = sensors_by_room(d, v::kBrickOccupancySensor);
        std::vector<rdf::Quad> facts;
        for (const auto& [room, refs] : state_.occupancy_sensors) {
            Term who = Term::iri(namespace_of(room.value()) + "occupant-" + local_name(room.value()));
            state_.occupants.push_back({who, room});
            facts.push_back({who, Term::iri(v::kRdfType), Term::iri(v::kSimOccupant), rdf::default_graph()});
            facts.push_back({who, Term::iri(v::kSimWorkplace), room, rdf::default_graph()});
        }
        state_.dataset = state_.dataset.apply({}, facts);
    }
    if (env_.sunlight) {
        state_.luminance_sensors = sensors_by_room(d, v::kBrickLuminanceSensor);
        for (const auto& [room, refs] : state_.luminance_sensors)
            state_.occlusion[room] = occlusion_from_draw(keyed_rand(env_.seed, 0, "occlusion", room.value()));
        auto q = sparql::parse_query(
            "SELECT ?g ?node WHERE { ?node <" + std::string(v::kSimMeasures) + "> <" +
            std::string(v::kSimOutsideIlluminance) +
            "> . GRAPH ?g { ?node <http://www.w3.org/1999/02/22-rdf-syntax-ns#value> ?v } }");
        for (const auto& row : sparql::select(d, q).rows) state_.outside_sensors.push_back({row[0], row[1]});
    }
}

void Simulation::run_processes() {
    Dataset d = state_.dataset;
    if (env_.sunlight) {
        double outside = outside_lux();
        for (const auto& ref : state_.outside_sensors) d = set_value(d, ref, Term::integer(std::llround(outside)));
        for (const auto& [room, refs] : state_.luminance_sensors) {
            Term lux = Term::integer(std::llround(room_illuminance(outside, state_.occlusion.at(room))));
            for (const auto& ref : refs) d = set_value(d, ref, lux);
        }
    }
    if (env_.occupancy) {
        const std::int64_t t = state_.t;
        const std::uint64_t seed = env_.seed;
        occupancy_step(state_.occupants, seconds_of_day(), double(params_.step_seconds), env_.occupancy_params,
                       [&](std::string_view stream, std::string_view key) {
                           return keyed_rand(seed, t, stream, key);
                       });
        const Term on = Term::literal("on"), off = Term::literal("off");
        for (const auto& o : state_.occupants)
            for (const auto& ref : state_.occupancy_sensors.at(o.room))
                d = set_value(d, ref, o.state == OccupantState::AtDesk ? on : off);
    }
    state_.dataset = std::move(d);
}

void Simulation::apply(const std::vector<NamedUpdate>& updates) {
    for (const auto& u : updates) {
        try {
            state_.dataset = sparql::eval_update(state_.dataset, u.update, context(u.id));
        } catch (const std::exception& e) {
            throw SimError("update " + u.id + " failed at iteration " + std::to_string(state_.t) + ": " + e.what());
        }
    }
}

void Simulation::tick() {
    if (finished()) throw SimError("run already finished");
    ++state_.t;
    write_time_graph();
    run_processes();
    apply(env_.updates);
}

}  // namespace ldsim::sim
