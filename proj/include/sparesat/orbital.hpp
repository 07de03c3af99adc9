#pragma once

#include <cmath>
#include <stdexcept>

#include "sparesat/constants.hpp"

namespace sparesat {

// Circular orbit (e = 0 throughout this model).
struct CircularOrbit {
    double altitude_km = 0.0;
    double inclination_deg = 0.0;

    void validate() const {
        if (!(altitude_km > 0.0)) throw std::invalid_argument("orbit altitude must be positive");
        if (inclination_deg < 0.0 || inclination_deg > 180.0)
            throw std::invalid_argument("inclination must be in [0, 180] deg");
    }

    double radius_km(const PhysicalConstants& c) const { return c.r_earth + altitude_km; }
};

struct PropulsionSpec {
    double dry_mass_kg = 0.0;
    double exhaust_velocity_km_s = 0.0;
    double mass_flow_rate_kg_s = 0.0;

    void validate() const {
        if (!(dry_mass_kg > 0.0)) throw std::invalid_argument("dry_mass must be positive");
        if (!(exhaust_velocity_km_s > 0.0))
            throw std::invalid_argument("exhaust_velocity must be positive");
        if (!(mass_flow_rate_kg_s > 0.0))
            throw std::invalid_argument("mass_flow_rate must be positive");
    }
};

// J2 secular RAAN drift for a circular orbit, rad/s. Negative for prograde orbits.
inline double nodal_precession_rate(const CircularOrbit& orbit,
                                    const PhysicalConstants& c = {}) {
    orbit.validate();
    c.validate();
    const double a = orbit.radius_km(c);
    const double mean_motion = std::sqrt(c.mu_earth / (a * a * a));
    const double oblateness = (c.r_earth / a) * (c.r_earth / a);
    return -1.5 * mean_motion * oblateness * c.j2 * std::cos(deg_to_rad(orbit.inclination_deg));
}

// RAAN drift of the parking orbit relative to a constellation plane, rad per time unit.
// Requires a common inclination; the parking orbit must not sit above the plane.
inline double relative_raan_drift(const CircularOrbit& parking, const CircularOrbit& plane,
                                  int n_t, const PhysicalConstants& c = {}) {
    if (parking.altitude_km > plane.altitude_km)
        throw std::invalid_argument("parking orbit altitude must not exceed plane altitude");
    if (std::abs(parking.inclination_deg - plane.inclination_deg) > 1e-9)
        throw std::invalid_argument("parking and plane orbits must share inclination");
    const double rate_s = nodal_precession_rate(parking, c) - nodal_precession_rate(plane, c);
    return rate_s * seconds_per_time_unit(n_t);
}

// Velocity increment for a continuous low-thrust raise between circular orbits, km/s.
inline double transfer_delta_v(double r_initial_km, double r_final_km,
                               const PhysicalConstants& c = {}) {
    c.validate();
    if (!(r_initial_km > 0.0)) throw std::invalid_argument("initial radius must be positive");
    if (r_initial_km > r_final_km)
        throw std::invalid_argument("transfer must be raising (r_initial <= r_final)");
    return std::sqrt(c.mu_earth / r_initial_km) - std::sqrt(c.mu_earth / r_final_km);
}

// Rocket equation solved for propellant mass, kg.
inline double fuel_mass(double delta_v_km_s, const PropulsionSpec& prop) {
    prop.validate();
    if (delta_v_km_s < 0.0) throw std::invalid_argument("delta_v must be nonnegative");
    return prop.dry_mass_kg * std::expm1(delta_v_km_s / prop.exhaust_velocity_km_s);
}

// Burn duration for a given propellant mass, in discretized time units.
inline double time_of_flight(double fuel_kg, const PropulsionSpec& prop, int n_t) {
    prop.validate();
    if (fuel_kg < 0.0) throw std::invalid_argument("fuel mass must be nonnegative");
    return fuel_kg / prop.mass_flow_rate_kg_s / seconds_per_time_unit(n_t);
}

}  // namespace sparesat
