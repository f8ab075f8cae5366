#pragma once

// Building datasets: synthetic Brick building generation, partitioning into
// one graph per resource, and SOSA/SSN property augmentation of lighting
// data points.
//
// Building-local terms (room types, sensor/command pairing links) are minted
// under the dataset base so that agents can dereference them like any other
// resource.

#include <cstdint>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ldsim/rdf/dataset.hpp"

namespace ldsim::building {

using rdf::Dataset;
using rdf::Term;
using rdf::Triple;

inline constexpr const char* kDefaultBase = "http://localhost:8080/";

// Local names of building vocabulary terms, relative to the base.
namespace local {
inline constexpr const char* kPersonalHygiene = "PersonalHygiene";
inline constexpr const char* kToilet = "Toilet";
inline constexpr const char* kDisabledToilet = "DisabledToilet";
inline constexpr const char* kShower = "Shower";
// luminance sensor -> luminance command of the light it measures
inline constexpr const char* kFeedbackFor = "feedbackFor";
// setpoint -> luminance command it applies to
inline constexpr const char* kSetpointFor = "setpointFor";
inline constexpr const char* kIdentifier = "identifier";
inline constexpr const char* kUnit = "unit";
inline constexpr const char* kArea = "area";
}  // namespace local

class InfeasibleParams : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct GeneratorParams {
    int rooms = 281;
    int floors = 2;
    int wings = 3;
    int rooms_with_occupancy = 66;
    int rooms_with_commands = 38;
    int rooms_with_luminance = 20;

    int lighting_systems = 278;
    int systems_with_occupancy = 156;
    int systems_with_commands = 105;
    int systems_with_luminance = 48;

    int occupancy_points = 277;
    int command_points = 146;
    int luminance_points = 64;  // one setpoint and one paired command each

    // Commands located in personal-hygiene rooms.
    int hygiene_commands = 6;
    // Lighting systems without points that light a whole wing.
    int wing_systems = 25;
    // Non-lighting resources added so the resource count resembles a real
    // building of this size.
    int filler_resources = 2100;

    std::uint64_t seed = 1;
    std::string base = kDefaultBase;

    // Throws InfeasibleParams when a category exceeds its parent.
    void check() const;
};

// Seeded synthetic building as a sorted, duplicate-free triple set.
std::vector<Triple> generate_synthetic(const GeneratorParams& params);

// One quad per triple in the subject's graph, plus one in the object's
// graph when the object is an IRI that is not a skolem IRI.
Dataset partition(std::span<const Triple> triples);

struct PartitionedDataset {
    Dataset dataset;
    std::set<Term> dynamic_resources;  // property graph names
};

// Property graph name and node for a data point.
Term property_graph(Term point);
Term property_node(Term point);

enum class PointKind { None, Occupancy, Command, Luminance, Setpoint };
PointKind point_kind(const Dataset& d, Term point);

// Adds a property graph per lighting-system data point and links the point
// to its property in the point's own graph. Points of unknown category are
// skipped and reported in `warnings`.
PartitionedDataset augment_datapoints(const Dataset& d, std::vector<std::string>* warnings = nullptr);

// Rewrites every IRI starting with `from` to start with `to` instead.
std::vector<Triple> rebase(std::span<const Triple> triples, const std::string& from, const std::string& to);

// Reads a Turtle building description, skolemizes blank nodes and returns
// its triples.
std::vector<Triple> load_building(const std::string& path, const std::string& base);

struct Counts {
    long triples = -1;  // -1 when the source triple set is unknown
    long resources = 0;
    long dynamic_resources = 0;
    long rooms = 0, floors = 0, wings = 0;
    long rooms_with_occupancy = 0, rooms_with_commands = 0, rooms_with_luminance = 0;
    long lighting_systems = 0;
    long systems_with_occupancy = 0, systems_with_commands = 0, systems_with_luminance = 0;
    long occupancy_points = 0, command_points = 0, luminance_points = 0, setpoint_points = 0;
};

// Counts over an augmented dataset. A room "has" a point kind when a
// lighting system feeding it, or located in it, has such a point.
// `resources` counts graph names other than property graphs and the
// default graph.
Counts count_building(const PartitionedDataset& pd);

struct ReportLine {
    std::string name;
    long expected = 0;
    long actual = 0;
    bool pass() const { return expected == actual; }
};

struct Report {
    std::vector<ReportLine> lines;
    bool all_pass() const;
    std::string to_string() const;
};

Report validate_counts(const PartitionedDataset& pd, const GeneratorParams& params);
// Comparison against the published counts of the real building file.
Report validate_real_counts(const Counts& counts);

// Per-graph triple counts of a dataset (default graph excluded).
std::vector<std::size_t> graph_sizes(const Dataset& d);

// Manifest text: counts, notes, then one dynamic resource IRI per line.
std::string manifest(const PartitionedDataset& pd, const Counts& counts);

}  // namespace ldsim::building
