#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include "ldsim/building/building.hpp"
#include "ldsim/rdf/io.hpp"
#include "ldsim/rdf/vocab.hpp"

namespace ldsim::building {

namespace v = ldsim::vocab;

Dataset partition(std::span<const Triple> triples) {
    std::vector<rdf::Quad> quads;
    quads.reserve(triples.size() * 2);
    for (const auto& t : triples) {
        quads.push_back({t.s, t.p, t.o, t.s});
        if (t.o.is_iri() && !rdf::is_skolem_iri(t.o)) quads.push_back({t.s, t.p, t.o, t.o});
    }
    return Dataset::from_quads(quads);
}

namespace {

std::string local_name(const std::string& iri) {
    auto cut = iri.find_last_of("/#");
    return cut == std::string::npos ? iri : iri.substr(cut + 1);
}

std::string namespace_of(const std::string& iri) {
    auto cut = iri.find_last_of("/#");
    return cut == std::string::npos ? std::string() : iri.substr(0, cut + 1);
}

std::set<Term> objects(const Dataset& d, Term s, std::string_view p) {
    std::set<Term> out;
    d.match({}, s, Term::iri(p), {}, [&](const rdf::Quad& q) { out.insert(q.o); });
    return out;
}

std::set<Term> subjects(const Dataset& d, std::string_view p, Term o) {
    std::set<Term> out;
    d.match({}, {}, Term::iri(p), o, [&](const rdf::Quad& q) { out.insert(q.s); });
    return out;
}

std::set<Term> instances(const Dataset& d, std::string_view cls) { return subjects(d, v::kRdfType, Term::iri(cls)); }

// Points of a lighting system via hasPoint or isPointOf.
std::set<Term> points_of(const Dataset& d, Term system) {
    auto pts = objects(d, system, v::kBfHasPoint);
    for (Term t : subjects(d, v::kBfIsPointOf, system)) pts.insert(t);
    return pts;
}

}  // namespace

Term property_graph(Term point) {
    const std::string& iri = point.value();
    return Term::iri(namespace_of(iri) + "property-" + local_name(iri));
}

Term property_node(Term point) { return Term::iri(property_graph(point).value() + "#it"); }

PointKind point_kind(const Dataset& d, Term point) {
    for (Term cls : objects(d, point, v::kRdfType)) {
        const auto& c = cls.value();
        if (c == v::kBrickOccupancySensor) return PointKind::Occupancy;
        if (c == v::kBrickLuminanceCommand) return PointKind::Command;
        if (c == v::kBrickLuminanceSensor) return PointKind::Luminance;
        if (c == v::kBrickLuminanceSetpoint) return PointKind::Setpoint;
    }
    return PointKind::None;
}

PartitionedDataset augment_datapoints(const Dataset& d, std::vector<std::string>* warnings) {
    std::vector<rdf::Quad> added;
    std::set<Term> dynamic;
    const Term type = Term::iri(v::kRdfType), value = Term::iri(v::kRdfValue);
    for (Term system : instances(d, v::kBrickLightingSystem)) {
        for (Term point : points_of(d, system)) {
            PointKind kind = point_kind(d, point);
            if (kind == PointKind::None) {
                if (warnings) warnings->push_back("skipping point of unknown category: " + point.value());
                continue;
            }
            Term graph = property_graph(point), node = property_node(point);
            if (!dynamic.insert(graph).second) continue;
            bool observed = kind == PointKind::Occupancy || kind == PointKind::Luminance;
            Term initial = kind == PointKind::Occupancy   ? Term::literal("off")
                           : kind == PointKind::Command   ? Term::literal("off")
                           : kind == PointKind::Luminance ? Term::integer(0)
                                                          : Term::integer(500);
            added.push_back({node, type,
                             Term::iri(observed ? v::kSosaObservableProperty : v::kSosaActuatableProperty), graph});
            added.push_back({node, type, Term::iri(v::kSsnProperty), graph});
            added.push_back({node, value, initial, graph});
            added.push_back({point, Term::iri(observed ? v::kSosaObserves : v::kSosaActsOnProperty), node, point});
        }
    }
    return {d.apply({}, added), std::move(dynamic)};
}

std::vector<Triple> rebase(std::span<const Triple> triples, const std::string& from, const std::string& to) {
    auto fix = [&](Term t) {
        if (!t.is_iri() || t.value().compare(0, from.size(), from) != 0) return t;
        return Term::iri(to + t.value().substr(from.size()));
    };
    std::vector<Triple> out;
    out.reserve(triples.size());
    for (const auto& t : triples) out.push_back({fix(t.s), fix(t.p), fix(t.o)});
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Triple> load_building(const std::string& path, const std::string& base) {
    auto fmt = rdf::format_from_extension(path).value_or(rdf::Format::Turtle);
    auto d = rdf::skolemize(rdf::parse_document(rdf::read_file(path), fmt, base), base);
    std::vector<Triple> out;
    for (const auto& q : d.quads()) out.push_back(q.triple());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Counts count_building(const PartitionedDataset& pd) {
    const Dataset& d = pd.dataset;
    Counts c;
    auto rooms = instances(d, v::kBrickRoom);
    c.rooms = long(rooms.size());
    c.floors = long(instances(d, v::kBrickFloor).size());
    c.wings = long(instances(d, v::kBrickWing).size());
    auto systems = instances(d, v::kBrickLightingSystem);
    c.lighting_systems = long(systems.size());

    std::set<Term> occ_rooms, cmd_rooms, lum_rooms;
    for (Term sys : systems) {
        std::set<Term> where = objects(d, sys, v::kBfFeeds);
        for (Term t : objects(d, sys, v::kBfIsLocatedIn)) where.insert(t);
        bool occ = false, cmd = false, lum = false;
        for (Term pt : points_of(d, sys)) {
            switch (point_kind(d, pt)) {
                case PointKind::Occupancy: ++c.occupancy_points; occ = true; break;
                case PointKind::Command: ++c.command_points; cmd = true; break;
                case PointKind::Luminance: ++c.luminance_points; lum = true; break;
                case PointKind::Setpoint: ++c.setpoint_points; break;
                case PointKind::None: break;
            }
            for (Term t : objects(d, pt, v::kBfIsLocatedIn)) where.insert(t);
        }
        c.systems_with_occupancy += occ;
        c.systems_with_commands += cmd;
        c.systems_with_luminance += lum;
        for (Term r : where) {
            if (!rooms.count(r)) continue;
            if (occ) occ_rooms.insert(r);
            if (cmd) cmd_rooms.insert(r);
            if (lum) lum_rooms.insert(r);
        }
    }
    c.rooms_with_occupancy = long(occ_rooms.size());
    c.rooms_with_commands = long(cmd_rooms.size());
    c.rooms_with_luminance = long(lum_rooms.size());
    c.dynamic_resources = long(pd.dynamic_resources.size());
    const Term def = rdf::default_graph();
    d.for_each_graph([&](const rdf::Graph& g) {
        if (g.name() != def && !pd.dynamic_resources.count(g.name())) ++c.resources;
    });
    return c;
}

bool Report::all_pass() const {
    return std::all_of(lines.begin(), lines.end(), [](const ReportLine& l) { return l.pass(); });
}

std::string Report::to_string() const {
    std::string out;
    char buf[160];
    for (const auto& l : lines) {
        std::snprintf(buf, sizeof buf, "%-32s expected %7ld  actual %7ld  %s\n", l.name.c_str(), l.expected, l.actual,
                      l.pass() ? "pass" : "FAIL");
        out += buf;
    }
    return out;
}

Report validate_counts(const PartitionedDataset& pd, const GeneratorParams& p) {
    Counts c = count_building(pd);
    return Report{{
        {"rooms", p.rooms, c.rooms},
        {"rooms with occupancy sensors", p.rooms_with_occupancy, c.rooms_with_occupancy},
        {"rooms with luminance commands", p.rooms_with_commands, c.rooms_with_commands},
        {"rooms with luminance sensors", p.rooms_with_luminance, c.rooms_with_luminance},
        {"floors", p.floors, c.floors},
        {"wings", p.wings, c.wings},
        {"lighting systems", p.lighting_systems, c.lighting_systems},
        {"systems with occupancy sensors", p.systems_with_occupancy, c.systems_with_occupancy},
        {"systems with luminance commands", p.systems_with_commands, c.systems_with_commands},
        {"systems with luminance sensors", p.systems_with_luminance, c.systems_with_luminance},
        {"dynamic resources", p.occupancy_points + p.command_points + 2L * p.luminance_points, c.dynamic_resources},
    }};
}

Report validate_real_counts(const Counts& c) {
    return Report{{
        {"rooms", 281, c.rooms},
        {"rooms with occupancy sensors", 66, c.rooms_with_occupancy},
        {"rooms with luminance commands", 38, c.rooms_with_commands},
        {"rooms with luminance sensors", 20, c.rooms_with_luminance},
        {"floors", 2, c.floors},
        {"wings", 3, c.wings},
        {"lighting systems", 278, c.lighting_systems},
        {"systems with occupancy sensors", 156, c.systems_with_occupancy},
        {"systems with luminance commands", 105, c.systems_with_commands},
        {"systems with luminance sensors", 48, c.systems_with_luminance},
        {"triples", 24947, c.triples},
        {"resource IRIs", 3281, c.resources},
        {"dynamic resources", 551, c.dynamic_resources},
    }};
}

std::vector<std::size_t> graph_sizes(const Dataset& d) {
    std::vector<std::size_t> out;
    const Term def = rdf::default_graph();
    d.for_each_graph([&](const rdf::Graph& g) {
        if (g.name() != def) out.push_back(g.size());
    });
    return out;
}

std::string manifest(const PartitionedDataset& pd, const Counts& c) {
    std::ostringstream out;
    out << "# ldsim building manifest\n";
    if (c.triples >= 0) out << "# triples " << c.triples << "\n";
    out << "# resources " << c.resources << "\n"
        << "# dynamic-resources " << c.dynamic_resources << "\n"
        << "# rooms " << c.rooms << " (occupancy " << c.rooms_with_occupancy << ", commands "
        << c.rooms_with_commands << ", luminance " << c.rooms_with_luminance << ")\n"
        << "# floors " << c.floors << " wings " << c.wings << "\n"
        << "# lighting-systems " << c.lighting_systems << " (occupancy " << c.systems_with_occupancy
        << ", commands " << c.systems_with_commands << ", luminance " << c.systems_with_luminance << ")\n"
        << "# points occupancy " << c.occupancy_points << " commands " << c.command_points << " luminance "
        << c.luminance_points << " setpoints " << c.setpoint_points << "\n"
        << "# note: a room counts as having a point kind when a lighting system feeding it\n"
        << "# (or located in it) has a point of that kind.\n";
    for (Term t : pd.dynamic_resources) out << t.value() << "\n";
    return out.str();
}

}  // namespace ldsim::building
