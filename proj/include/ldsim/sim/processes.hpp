#pragma once

// Native environment processes: sunlight and occupants.

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "ldsim/rdf/term.hpp"

namespace ldsim::sim {

using rdf::Term;

inline constexpr double kHour = 3600.0;
inline constexpr double kSunrise = 6 * kHour;
inline constexpr double kSunset = 21 * kHour;
inline constexpr double kZenith = 13.5 * kHour;
inline constexpr double kZenithLux = 40000.0;

// Cloud coverage in [0,1] drawn at sunrise and at sunset.
struct CoverageProfile {
    double at_sunrise = 0;
    double at_sunset = 0;
};

// Clear-sky illuminance: 40000 * max(0, 1 - ((t - 13.5h) / 7.5h)^2).
double baseline_illuminance(double seconds_of_day);
// Coverage interpolated linearly between sunrise and sunset, clamped outside.
double coverage(double seconds_of_day, const CoverageProfile& profile);
double outside_illuminance(double seconds_of_day, const CoverageProfile& profile);
double room_illuminance(double outside, double occlusion);

// Occlusion factor in [0.05, 0.1] for a uniform draw u in [0,1).
inline double occlusion_from_draw(double u) { return 0.05 + 0.05 * u; }

enum class OccupantState { Home, Arriving, AtDesk, AtLunch, Gone };
const char* to_string(OccupantState s);

struct OccupancyParams {
    double arrivals_from = 8 * kHour;
    double lunch_from = 12 * kHour;
    double departures_from = 16 * kHour;
    double closing = 20 * kHour;      // everyone still inside leaves
    double arrival_mean = kHour;      // mean wait after arrivals_from
    double lunch_mean = 0.5 * kHour;  // mean wait after lunch_from
    double lunch_duration_mean = kHour;
    double return_probability = 0.9;
    double departure_mean = kHour;
};

struct Occupant {
    Term iri;
    Term room;
    OccupantState state = OccupantState::Home;
    bool had_lunch = false;
};

// Draw for (stream, key) in the current slot.
using RandomSource = std::function<double(std::string_view stream, std::string_view key)>;

// Advances every occupant to the state at `seconds_of_day`, which lies
// `step_seconds` after the previous slot.
void occupancy_step(std::vector<Occupant>& occupants, double seconds_of_day, double step_seconds,
                    const OccupancyParams& params, const RandomSource& rand);

// Probability that an exponential wait with this mean ends within one step.
double per_step_probability(double step_seconds, double mean_seconds);

}  // namespace ldsim::sim
