#include <algorithm>
#include <cstdio>
#include <numeric>
#include <random>

#include "ldsim/building/building.hpp"
#include "ldsim/rdf/vocab.hpp"

namespace ldsim::building {

namespace v = ldsim::vocab;

void GeneratorParams::check() const {
    auto need = [](bool ok, const char* what) {
        if (!ok) throw InfeasibleParams(what);
    };
    need(rooms >= 1 && floors >= 1 && wings >= floors, "need rooms >= 1 and wings >= floors >= 1");
    need(rooms >= wings, "fewer rooms than wings");
    need(systems_with_luminance <= systems_with_occupancy && systems_with_luminance <= systems_with_commands,
         "systems with luminance sensors must also carry occupancy sensors and commands");
    need(systems_with_occupancy + systems_with_commands - systems_with_luminance <= lighting_systems,
         "point-carrying systems exceed lighting systems");
    need(rooms_with_luminance <= rooms_with_occupancy && rooms_with_luminance <= rooms_with_commands,
         "rooms with luminance sensors must also have occupancy sensors and commands");
    need(rooms_with_occupancy + rooms_with_commands - rooms_with_luminance <= rooms,
         "rooms with points exceed rooms");
    need(systems_with_luminance >= rooms_with_luminance, "fewer luminance systems than luminance rooms");
    need((systems_with_luminance == 0) == (rooms_with_luminance == 0), "luminance systems need rooms");
    int c_sys = systems_with_commands - systems_with_luminance;
    int c_rooms = rooms_with_commands - rooms_with_luminance;
    int o_sys = systems_with_occupancy - systems_with_luminance;
    int o_rooms = rooms_with_occupancy - rooms_with_luminance;
    need(c_sys >= c_rooms && (c_sys == 0) == (c_rooms == 0), "command-only systems do not fit their rooms");
    need(o_sys >= o_rooms && (o_sys == 0) == (o_rooms == 0), "occupancy-only systems do not fit their rooms");
    need(luminance_points >= systems_with_luminance, "fewer luminance sensors than luminance systems");
    need(command_points - luminance_points >= c_sys, "too few commands for command-carrying systems");
    need(occupancy_points >= systems_with_occupancy, "fewer occupancy sensors than occupancy systems");
    need(systems_with_occupancy > 0 || occupancy_points == 0, "occupancy sensors without systems");
    need(systems_with_luminance > 0 || luminance_points == 0, "luminance sensors without systems");
    need(hygiene_commands >= 0 && hygiene_commands <= command_points - luminance_points,
         "hygiene commands exceed command-only commands");
    int hygiene_rooms = (hygiene_commands + 1) / 2;
    need(hygiene_rooms <= c_rooms && (hygiene_rooms < c_rooms || c_sys - hygiene_rooms == 0),
         "not enough command rooms for hygiene rooms");
    need(command_points - luminance_points - hygiene_commands >= c_sys - hygiene_rooms,
         "too few commands outside hygiene rooms");
    need(c_sys > hygiene_rooms || command_points - luminance_points == hygiene_commands,
         "commands left without a system");
    int p_sys = lighting_systems - systems_with_occupancy - systems_with_commands + systems_with_luminance;
    need(wing_systems >= 0 && wing_systems <= p_sys, "wing systems exceed point-free systems");
    need(filler_resources >= 0, "negative filler count");
}

namespace {

class Builder {
public:
    explicit Builder(std::string base) : base_(std::move(base)) {}

    Term local(const std::string& name) const { return Term::iri(base_ + name); }

    void add(Term s, std::string_view p, Term o) { out_.push_back({s, Term::iri(p), o}); }
    void add(Term s, Term p, Term o) { out_.push_back({s, p, o}); }
    void label(Term s, const std::string& text) { add(s, v::kRdfsLabel, Term::literal(text)); }
    void ident(Term s, const std::string& text) { add(s, local(local::kIdentifier), Term::literal(text)); }

    std::vector<Triple> finish() {
        std::sort(out_.begin(), out_.end());
        out_.erase(std::unique(out_.begin(), out_.end()), out_.end());
        return std::move(out_);
    }

private:
    std::string base_;
    std::vector<Triple> out_;
};

// n items into k bins, every bin at least one.
std::vector<int> spread(int n, int k, std::mt19937_64& rng) {
    std::vector<int> bins(k, 1);
    if (k == 0) return bins;
    for (int i = k; i < n; ++i) bins[rng() % k]++;
    return bins;
}

std::string num(int i, int width = 3) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%0*d", width, i);
    return buf;
}

const char* const kFillerKinds[] = {
    "VAV", "Zone_Temperature_Sensor", "Zone_Temperature_Setpoint", "Damper_Position_Command",
    "Supply_Air_Flow_Sensor", "Thermostat", "Radiator", "Smoke_Detector",
};

}  // namespace

std::vector<Triple> generate_synthetic(const GeneratorParams& p) {
    p.check();
    std::mt19937_64 rng(p.seed);
    Builder b(p.base);
    const Term brick_room = Term::iri(v::kBrickRoom);

    // Vocabulary for room classification.
    Term hygiene = b.local(local::kPersonalHygiene), toilet = b.local(local::kToilet),
         disabled = b.local(local::kDisabledToilet), shower = b.local(local::kShower);
    for (auto [cls, name, comment] :
         {std::tuple{hygiene, "Personal hygiene room", "Rooms dedicated to personal hygiene."},
          std::tuple{toilet, "Toilet", "A room with toilets."},
          std::tuple{disabled, "Disabled toilet", "A toilet accessible to wheelchair users."},
          std::tuple{shower, "Shower", "A room with showers."}}) {
        b.add(cls, v::kRdfType, Term::iri(v::kOwlClass));
        b.label(cls, name);
        b.add(cls, v::kRdfsComment, Term::literal(comment));
    }
    b.add(hygiene, v::kRdfsSubClassOf, brick_room);
    b.add(toilet, v::kRdfsSubClassOf, hygiene);
    b.add(disabled, v::kRdfsSubClassOf, toilet);
    b.add(shower, v::kRdfsSubClassOf, hygiene);

    // Spatial structure.
    Term building = b.local("Building");
    b.add(building, v::kRdfType, Term::iri(v::kBrickBuilding));
    b.label(building, "Building 3");
    b.ident(building, "B3");
    b.add(building, b.local(local::kArea), Term::integer(p.rooms * 24));
    b.add(building, v::kRdfsComment, Term::literal("Synthetic office building."));

    std::vector<Term> floors, wings;
    std::vector<std::string> wing_codes;
    for (int f = 0; f < p.floors; ++f) {
        Term fl = b.local("Floor_" + std::to_string(f));
        floors.push_back(fl);
        b.add(building, v::kBfHasPart, fl);
        b.add(fl, v::kRdfType, Term::iri(v::kBrickFloor));
        b.label(fl, f == 0 ? "Ground floor" : "Floor " + std::to_string(f));
        b.ident(fl, "F" + std::to_string(f));
        b.add(fl, b.local(local::kArea), Term::integer(p.rooms * 24 / p.floors));
    }
    for (int w = 0; w < p.wings; ++w) {
        int f = w * p.floors / p.wings;
        std::string code = std::to_string(f) + char('A' + w % 26) + (w >= 26 ? std::to_string(w / 26) : "");
        Term wg = b.local("Wing_" + code);
        wings.push_back(wg);
        wing_codes.push_back(code);
        b.add(floors[f], v::kBfHasPart, wg);
        b.add(wg, v::kRdfType, Term::iri(v::kBrickWing));
        b.label(wg, "Wing " + code);
        b.ident(wg, "W" + code);
    }

    std::vector<Term> rooms;
    std::vector<std::string> room_codes;
    for (int r = 0; r < p.rooms; ++r) {
        int w = r % p.wings;
        std::string code = wing_codes[w] + num(r / p.wings);
        Term room = b.local("Room_" + code);
        rooms.push_back(room);
        room_codes.push_back(code);
        b.add(wings[w], v::kBfHasPart, room);
        b.add(room, v::kRdfType, brick_room);
        b.label(room, "Room " + code);
        b.ident(room, "R" + code);
        b.add(room, b.local(local::kArea), Term::integer(8 + int(rng() % 40)));
    }

    // Room categories: luminance rooms, command-only rooms (hygiene rooms
    // first), occupancy-only rooms, then plain rooms.
    std::vector<int> order(p.rooms);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const int l_rooms = p.rooms_with_luminance;
    const int c_rooms = p.rooms_with_commands - l_rooms;
    const int o_rooms = p.rooms_with_occupancy - l_rooms;
    auto take = [&](int from, int n) { return std::vector<int>(order.begin() + from, order.begin() + from + n); };
    const auto lum_rooms = take(0, l_rooms);
    const auto cmd_rooms = take(l_rooms, c_rooms);
    const auto occ_rooms = take(l_rooms + c_rooms, o_rooms);
    const auto plain_rooms = take(l_rooms + c_rooms + o_rooms, p.rooms - l_rooms - c_rooms - o_rooms);

    // Hygiene rooms with lights hold one system with one or two commands.
    std::vector<int> hygiene_cmds;
    for (int left = p.hygiene_commands; left > 0; left -= 2) hygiene_cmds.push_back(std::min(left, 2));
    if (hygiene_cmds.size() >= 2 && hygiene_cmds.back() == 1) std::swap(hygiene_cmds[0], hygiene_cmds.back());
    const Term hygiene_types[] = {disabled, toilet, shower, toilet};
    for (std::size_t i = 0; i < hygiene_cmds.size(); ++i)
        b.add(rooms[cmd_rooms[i]], v::kRdfType, hygiene_types[i % 4]);
    // Some unlit hygiene rooms as well.
    for (std::size_t i = 0; i < plain_rooms.size() && i < 6; ++i)
        b.add(rooms[plain_rooms[i]], v::kRdfType, i % 3 == 2 ? shower : toilet);

    int system_seq = 0;
    auto new_system = [&](Term lit, const std::string& code) {
        Term sys = b.local("Lighting_System_" + code + "_" + std::to_string(++system_seq));
        b.add(sys, v::kRdfType, Term::iri(v::kBrickLightingSystem));
        b.label(sys, "Lighting system " + code + " #" + std::to_string(system_seq));
        b.ident(sys, "LS" + num(system_seq, 4));
        b.add(sys, v::kBfFeeds, lit);
        b.add(sys, v::kRdfsComment, Term::literal("Luminaires switched together."));
        return sys;
    };
    int point_seq = 0;
    auto new_point = [&](Term sys, std::string_view cls, const std::string& prefix, const char* unit) {
        const std::string& sys_name = sys.value();
        std::string suffix = sys_name.substr(sys_name.rfind("Lighting_System_") + 16);
        Term pt = b.local(prefix + "_" + suffix + "_" + std::to_string(++point_seq));
        b.add(sys, v::kBfHasPoint, pt);
        b.add(pt, v::kRdfType, Term::iri(cls));
        b.label(pt, prefix + " " + std::to_string(point_seq));
        b.ident(pt, "P" + num(point_seq, 4));
        b.add(pt, b.local(local::kUnit), Term::literal(unit));
        return pt;
    };

    const int s_sys = p.systems_with_luminance;
    const int c_sys = p.systems_with_commands - s_sys;
    const int o_sys = p.systems_with_occupancy - s_sys;
    const int p_sys = p.lighting_systems - s_sys - c_sys - o_sys;

    std::vector<Term> occ_carriers;
    // Luminance systems: paired sensor/command/setpoint triples.
    auto s_per_room = spread(s_sys, l_rooms, rng);
    auto lum_per_sys = spread(p.luminance_points, s_sys, rng);
    for (int i = 0, k = 0; i < l_rooms; ++i) {
        for (int j = 0; j < s_per_room[i]; ++j, ++k) {
            Term sys = new_system(rooms[lum_rooms[i]], room_codes[lum_rooms[i]]);
            occ_carriers.push_back(sys);
            for (int n = 0; n < lum_per_sys[k]; ++n) {
                Term cmd = new_point(sys, v::kBrickLuminanceCommand, "Luminance_Command", "on/off");
                Term sen = new_point(sys, v::kBrickLuminanceSensor, "Luminance_Sensor", "lux");
                Term set = new_point(sys, v::kBrickLuminanceSetpoint, "Luminance_Setpoint", "lux");
                b.add(sen, b.local(local::kFeedbackFor), cmd);
                b.add(set, b.local(local::kSetpointFor), cmd);
            }
        }
    }

    // Command-only systems; hygiene rooms take one system each.
    const int h_rooms = int(hygiene_cmds.size());
    auto c_per_room = spread(c_sys - h_rooms, c_rooms - h_rooms, rng);
    auto cmd_per_sys = spread(p.command_points - p.luminance_points - p.hygiene_commands, c_sys - h_rooms, rng);
    for (int i = 0; i < h_rooms; ++i) {
        Term sys = new_system(rooms[cmd_rooms[i]], room_codes[cmd_rooms[i]]);
        for (int n = 0; n < hygiene_cmds[i]; ++n)
            new_point(sys, v::kBrickLuminanceCommand, "Luminance_Command", "on/off");
    }
    for (int i = 0, k = 0; i < c_rooms - h_rooms; ++i) {
        int r = cmd_rooms[h_rooms + i];
        for (int j = 0; j < c_per_room[i]; ++j, ++k) {
            Term sys = new_system(rooms[r], room_codes[r]);
            for (int n = 0; n < cmd_per_sys[k]; ++n)
                new_point(sys, v::kBrickLuminanceCommand, "Luminance_Command", "on/off");
        }
    }

    // Occupancy-only systems.
    auto o_per_room = spread(o_sys, o_rooms, rng);
    for (int i = 0; i < o_rooms; ++i)
        for (int j = 0; j < o_per_room[i]; ++j)
            occ_carriers.push_back(new_system(rooms[occ_rooms[i]], room_codes[occ_rooms[i]]));
    auto occ_per_sys = spread(p.occupancy_points, int(occ_carriers.size()), rng);
    for (std::size_t i = 0; i < occ_carriers.size(); ++i)
        for (int n = 0; n < occ_per_sys[i]; ++n)
            new_point(occ_carriers[i], v::kBrickOccupancySensor, "Occupancy_Sensor", "on/off");

    // Point-free systems: some light whole wings, the rest plain rooms.
    for (int i = 0; i < p_sys; ++i) {
        if (i < p.wing_systems || plain_rooms.empty()) {
            int w = i % p.wings;
            new_system(wings[w], wing_codes[w]);
        } else {
            int r = plain_rooms[rng() % plain_rooms.size()];
            new_system(rooms[r], room_codes[r]);
        }
    }

    // Other building equipment located in rooms.
    for (int i = 0; i < p.filler_resources; ++i) {
        int r = i % p.rooms;
        const char* kind = kFillerKinds[(i / p.rooms + r) % std::size(kFillerKinds)];
        Term eq = b.local(std::string(kind) + "_" + room_codes[r] + "_" + std::to_string(i / p.rooms));
        b.add(eq, v::kRdfType, Term::iri(std::string(v::kBrick) + kind));
        b.label(eq, std::string(kind) + " " + room_codes[r]);
        b.ident(eq, "E" + num(i, 5));
        b.add(eq, v::kBfIsLocatedIn, rooms[r]);
        b.add(eq, v::kRdfsComment, Term::literal("Not part of any lighting system."));
    }

    return b.finish();
}

}  // namespace ldsim::building
