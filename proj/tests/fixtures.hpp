#pragma once

// Shared scenario fixtures for tests.

#include "sparesat/scenario.hpp"

namespace fixtures {

// Three-constellation maintenance scenario with the heavy-lift launch option.
inline sparesat::ScenarioParams three_constellations() {
    using sparesat::ConstellationSpec;
    sparesat::ScenarioParams params;
    params.n_t = 52;
    params.inclination_deg = 60.0;
    params.fill_rate_requirement = 0.98;
    params.launcher = {200.0, 250, 32.0, 20.0};

    ConstellationSpec c1;
    c1.name = "con1";
    c1.plane_altitude_km = 1100.0;
    c1.n_planes = 24;
    c1.sats_per_plane = 20;
    c1.sat_failure_rate_per_year = 0.1;
    c1.shipping_size_slots = 1;
    c1.dry_mass_kg = 200.0;
    c1.mass_flow_rate_kg_s = 1.7e-5;
    c1.exhaust_velocity_km_s = 11.77;
    c1.manufac_cost_musd = 0.5;
    c1.holding_cost_musd_per_sat_year = 0.5;
    c1.fuel_cost_musd_per_kg = 0.01;

    ConstellationSpec c2 = c1;
    c2.name = "con2";
    c2.plane_altitude_km = 1300.0;
    c2.n_planes = 26;
    c2.sats_per_plane = 22;
    c2.sat_failure_rate_per_year = 0.11;
    c2.shipping_size_slots = 2;
    c2.dry_mass_kg = 280.0;
    c2.mass_flow_rate_kg_s = 2.4e-5;
    c2.manufac_cost_musd = 1.0;

    ConstellationSpec c3 = c1;
    c3.name = "con3";
    c3.plane_altitude_km = 1200.0;
    c3.n_planes = 20;
    c3.sats_per_plane = 24;
    c3.sat_failure_rate_per_year = 0.12;
    c3.shipping_size_slots = 2;
    c3.dry_mass_kg = 350.0;
    c3.mass_flow_rate_kg_s = 3.0e-5;
    c3.manufac_cost_musd = 1.0;

    params.constellations = {c1, c2, c3};
    return params;
}

// Published joint strategy for the scenario above.
inline sparesat::StrategyDesign published_joint_design() {
    sparesat::StrategyDesign d;
    d.shared = {500.0, 1, 244};
    d.inplane = {{3, 5}, {3, 5}, {3, 10}};
    d.order_up_to = {30, 32, 16};
    return d;
}

// Small two-constellation scenario for fast simulator tests.
inline sparesat::ScenarioParams small_pair() {
    auto params = three_constellations();
    params.constellations.resize(2);
    params.launcher = {67.0, 40, 12.0, 8.0};
    return params;
}

}  // namespace fixtures
