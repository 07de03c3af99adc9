#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "sparesat/orbital.hpp"

namespace sparesat {

// One constellation's geometry, satellite parameters and unit costs.
struct ConstellationSpec {
    std::string name;
    double plane_altitude_km = 0.0;            // h_plane
    int n_planes = 0;                          // N_plane
    int sats_per_plane = 0;                    // N_sat
    double sat_failure_rate_per_year = 0.0;    // lambda_sat
    int shipping_size_slots = 0;               // v
    double dry_mass_kg = 0.0;                  // M_dry
    double mass_flow_rate_kg_s = 0.0;          // Mdot_prop
    double exhaust_velocity_km_s = 0.0;        // V_ex
    double manufac_cost_musd = 0.0;            // c_manufac, $M per satellite
    double holding_cost_musd_per_sat_year = 0.0;  // c_hold
    double fuel_cost_musd_per_kg = 0.0;        // eps_maneuv

    PropulsionSpec propulsion() const {
        return {dry_mass_kg, exhaust_velocity_km_s, mass_flow_rate_kg_s};
    }

    void validate(bool allow_zero_failure_rate = false) const {
        auto fail = [&](const char* what) {
            throw std::invalid_argument("constellation '" + name + "': " + what);
        };
        if (!(plane_altitude_km > 0.0)) fail("plane_altitude must be positive");
        if (n_planes < 1) fail("n_planes must be a positive integer");
        if (sats_per_plane < 1) fail("sats_per_plane must be a positive integer");
        if (sat_failure_rate_per_year < 0.0 ||
            (!allow_zero_failure_rate && sat_failure_rate_per_year == 0.0))
            fail("sat_failure_rate must be positive");
        if (shipping_size_slots < 1) fail("shipping_size must be a positive integer");
        if (!(dry_mass_kg > 0.0)) fail("dry_mass must be positive");
        if (!(mass_flow_rate_kg_s > 0.0)) fail("mass_flow_rate must be positive");
        if (!(exhaust_velocity_km_s > 0.0)) fail("exhaust_velocity must be positive");
        if (!(manufac_cost_musd > 0.0)) fail("manufac_cost must be positive");
        if (!(holding_cost_musd_per_sat_year > 0.0)) fail("holding_cost must be positive");
        if (!(fuel_cost_musd_per_kg > 0.0)) fail("fuel_cost_coeff must be positive");
    }
};

struct LaunchServiceSpec {
    double launch_cost_musd = 0.0;        // c_lau
    int capacity_slots = 0;               // A
    double order_processing_time = 0.0;   // t_lau, time units
    double mean_wait = 0.0;               // mu_lau, time units

    void validate() const {
        if (!(launch_cost_musd > 0.0)) throw std::invalid_argument("launch_cost must be positive");
        if (capacity_slots < 1) throw std::invalid_argument("capacity must be a positive integer");
        if (!(order_processing_time > 0.0))
            throw std::invalid_argument("order_processing_time must be positive");
        if (!(mean_wait > 0.0)) throw std::invalid_argument("mean_wait must be positive");
    }
};

// Decisions shared by all constellations.
struct SharedDesign {
    double parking_altitude_km = 0.0;  // h_parking
    int n_parking = 0;                 // N_parking
    int slot_reorder_point = 0;        // U, slots

    void validate() const {
        if (!(parking_altitude_km > 0.0))
            throw std::invalid_argument("parking_altitude must be positive");
        if (n_parking < 1) throw std::invalid_argument("n_parking must be a positive integer");
        if (slot_reorder_point < 1)
            throw std::invalid_argument("slot_reorder_point must be a positive integer");
    }
};

// (s, Q) policy for one constellation's in-plane spares.
struct InPlanePolicy {
    int reorder_point = 0;  // s, satellites
    int batch_size = 0;     // Q, satellites

    void validate() const {
        if (reorder_point < 1) throw std::invalid_argument("reorder_point must be >= 1");
        if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
    }
};

// Full strategy: shared design plus per-constellation policy parameters. The launch
// cost fractions y are used only for splitting TESSAC across operators; when empty,
// an even split is applied.
struct StrategyDesign {
    SharedDesign shared;
    std::vector<InPlanePolicy> inplane;       // per constellation
    std::vector<int> order_up_to;             // S_j, batches
    std::vector<double> launch_cost_fractions;  // y_j, optional

    void validate(std::size_t m) const {
        shared.validate();
        if (inplane.size() != m || order_up_to.size() != m)
            throw std::invalid_argument("design must carry one policy per constellation");
        for (const auto& p : inplane) p.validate();
        for (int s : order_up_to)
            if (s < 1) throw std::invalid_argument("order_up_to must be >= 1");
        if (!launch_cost_fractions.empty() && launch_cost_fractions.size() != m)
            throw std::invalid_argument("launch_cost_fractions size mismatch");
    }
};

// Everything external to the strategy decision.
struct ScenarioParams {
    std::vector<ConstellationSpec> constellations;
    LaunchServiceSpec launcher;
    int n_t = 52;                    // time units per year
    double inclination_deg = 0.0;    // shared by all orbits
    double fill_rate_requirement = 0.98;  // rho^req at both echelons
    PhysicalConstants constants;

    std::size_t m() const { return constellations.size(); }

    void validate(bool allow_zero_failure_rate = false) const {
        if (constellations.empty())
            throw std::invalid_argument("at least one constellation required");
        for (const auto& c : constellations) c.validate(allow_zero_failure_rate);
        launcher.validate();
        if (n_t < 1) throw std::invalid_argument("n_t must be >= 1");
        if (inclination_deg < 0.0 || inclination_deg > 180.0)
            throw std::invalid_argument("inclination must be in [0, 180] deg");
        if (fill_rate_requirement < 0.0 || fill_rate_requirement > 1.0)
            throw std::invalid_argument("fill_rate_requirement must be in [0, 1]");
        constants.validate();
    }
};

}  // namespace sparesat
