#include "ldsim/sim/processes.hpp"

#include <algorithm>
#include <cmath>

namespace ldsim::sim {

double baseline_illuminance(double t) {
    double x = (t - kZenith) / (kZenith - kSunrise);
    return kZenithLux * std::max(0.0, 1.0 - x * x);
}

double coverage(double t, const CoverageProfile& p) {
    double f = std::clamp((t - kSunrise) / (kSunset - kSunrise), 0.0, 1.0);
    return p.at_sunrise + (p.at_sunset - p.at_sunrise) * f;
}

double outside_illuminance(double t, const CoverageProfile& p) {
    return baseline_illuminance(t) * (1.0 - coverage(t, p));
}

double room_illuminance(double outside, double occlusion) { return outside * occlusion; }

const char* to_string(OccupantState s) {
    switch (s) {
        case OccupantState::Home: return "home";
        case OccupantState::Arriving: return "arriving";
        case OccupantState::AtDesk: return "at-desk";
        case OccupantState::AtLunch: return "at-lunch";
        case OccupantState::Gone: return "gone";
    }
    return "?";
}

double per_step_probability(double step, double mean) {
    if (mean <= 0) return 1.0;
    return 1.0 - std::exp(-step / mean);
}

void occupancy_step(std::vector<Occupant>& occupants, double t, double step, const OccupancyParams& p,
                    const RandomSource& rand) {
    const double p_arrive = per_step_probability(step, p.arrival_mean);
    const double p_lunch = per_step_probability(step, p.lunch_mean);
    const double p_back = per_step_probability(step, p.lunch_duration_mean);
    const double p_leave = per_step_probability(step, p.departure_mean);
    for (auto& o : occupants) {
        if (t < p.arrivals_from) {
            o.state = OccupantState::Home;
            o.had_lunch = false;
            continue;
        }
        if (t >= p.closing) {
            if (o.state != OccupantState::Home) o.state = OccupantState::Gone;
            continue;
        }
        const std::string& key = o.iri.value();
        double u = rand("occupancy", key);
        switch (o.state) {
            case OccupantState::Home:
                if (t < p.departures_from && u < p_arrive) o.state = OccupantState::Arriving;
                break;
            case OccupantState::Arriving:
                o.state = OccupantState::AtDesk;
                break;
            case OccupantState::AtDesk:
                if (t >= p.departures_from) {
                    if (u < p_leave) o.state = OccupantState::Gone;
                } else if (t >= p.lunch_from && !o.had_lunch && u < p_lunch) {
                    o.state = OccupantState::AtLunch;
                    o.had_lunch = true;
                }
                break;
            case OccupantState::AtLunch:
                if (u < p_back || t >= p.departures_from)
                    o.state = rand("occupancy-return", key) < p.return_probability && t < p.departures_from
                                  ? OccupantState::AtDesk
                                  : OccupantState::Gone;
                break;
            case OccupantState::Gone:
                break;
        }
    }
}

}  // namespace ldsim::sim
