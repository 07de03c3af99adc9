#pragma once

#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sparesat/evaluate.hpp"

namespace sparesat {

struct RealRange {
    double lo = 0.0, hi = 0.0;
};
struct IntRange {
    int lo = 0, hi = 0;
};

// Sampled trade space for validation instances.
struct ValidationRanges {
    RealRange order_processing_time{20.0, 80.0};  // t_lau, time units
    RealRange mean_wait{20.0, 80.0};              // mu_lau
    RealRange inclination_deg{40.0, 80.0};
    RealRange sat_failure_rate{0.05, 0.2};
    IntRange n_planes{20, 40};
    IntRange n_parking{1, 20};
    IntRange sats_per_plane{20, 60};
    RealRange plane_altitude_km{500.0, 2000.0};
    RealRange parking_altitude_km{400.0, 1000.0};
    IntRange reorder_point{1, 20};
    IntRange batch_size{1, 40};
    IntRange order_up_to{1, 40};
    IntRange slot_reorder_point{10, 250};
    IntRange shipping_size{1, 4};
};

// Fixed per-instance parameters with spec completion through the shipping-size
// proportionality coefficients.
struct CommonParams {
    double fuel_cost_musd_per_kg = 0.01;
    double holding_cost_musd_per_sat_year = 0.5;
    double exhaust_velocity_km_s = 11.77;
    double launch_cost_musd = 200.0;
    int capacity_slots = 250;
    double dry_mass_per_slot_kg = 150.0;        // alpha_1
    double mass_flow_per_slot_kg_s = 1.3e-3;    // alpha_2
    double manufac_cost_per_slot_musd = 0.5;    // alpha_3
    int n_t = 52;
};

struct ScenarioInstance {
    int id = 0;
    ScenarioParams params;
    StrategyDesign design;
    std::uint64_t sim_seed = 0;
};

struct GenerationDiagnostics {
    std::int64_t draws = 0;
    std::int64_t accepted = 0;
    std::int64_t rejected_domain = 0;   // parking orbit not below all planes
    std::int64_t rejected_cond1 = 0;
    std::int64_t rejected_cond2 = 0;
    std::int64_t rejected_cond3 = 0;
    std::int64_t rejected_cond4 = 0;
    std::int64_t rejected_cond5 = 0;
    std::int64_t rejected_state_cap = 0;

    std::string to_string() const {
        std::ostringstream os;
        os << "draws=" << draws << " accepted=" << accepted << " domain=" << rejected_domain
           << " c1=" << rejected_cond1 << " c2=" << rejected_cond2 << " c3=" << rejected_cond3
           << " c4=" << rejected_cond4 << " c5=" << rejected_cond5
           << " state_cap=" << rejected_state_cap;
        return os.str();
    }
};

struct GenerationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Rejection-sample the trade space until `count` instances pass conditions 1-5 under
// the analytic model. The service conditions are screened with cheap necessary bounds
// before the chain is built; the screens only reject provably infeasible draws, so
// the accepted distribution is untouched.
inline std::vector<ScenarioInstance> generate_instances(
    int m, const ValidationRanges& ranges, const CommonParams& common, double rho_req, int count,
    std::uint64_t seed, const EvalOptions& eval_opts = {},
    GenerationDiagnostics* diagnostics = nullptr, std::int64_t max_draws = 0) {
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    if (count < 1) throw std::invalid_argument("count must be >= 1");
    if (max_draws <= 0) max_draws = static_cast<std::int64_t>(count) * 200'000;

    std::mt19937_64 rng(seed ^ 0x5eedf00dULL);
    auto real = [&](const RealRange& r) {
        return r.lo + (r.hi - r.lo) * ((rng() >> 11) * 0x1.0p-53);
    };
    auto integer = [&](const IntRange& r) {
        return r.lo + static_cast<int>(rng() % static_cast<std::uint64_t>(r.hi - r.lo + 1));
    };

    GenerationDiagnostics local;
    GenerationDiagnostics& diag = diagnostics ? *diagnostics : local;
    std::vector<ScenarioInstance> out;
    out.reserve(count);

    while (static_cast<int>(out.size()) < count) {
        if (diag.draws >= max_draws) {
            throw GenerationError(
                "instance generation starved (acceptance below bound); rejection counts: " +
                diag.to_string());
        }
        ++diag.draws;

        ScenarioParams params;
        params.n_t = common.n_t;
        params.inclination_deg = real(ranges.inclination_deg);
        params.fill_rate_requirement = rho_req;
        params.launcher.launch_cost_musd = common.launch_cost_musd;
        params.launcher.capacity_slots = common.capacity_slots;
        params.launcher.order_processing_time = real(ranges.order_processing_time);
        params.launcher.mean_wait = real(ranges.mean_wait);

        StrategyDesign design;
        design.shared.parking_altitude_km = real(ranges.parking_altitude_km);
        design.shared.n_parking = integer(ranges.n_parking);
        design.shared.slot_reorder_point = integer(ranges.slot_reorder_point);

        bool domain_ok = true;
        for (int j = 0; j < m; ++j) {
            ConstellationSpec c;
            c.name = "c" + std::to_string(j + 1);
            c.plane_altitude_km = real(ranges.plane_altitude_km);
            c.n_planes = integer(ranges.n_planes);
            c.sats_per_plane = integer(ranges.sats_per_plane);
            c.sat_failure_rate_per_year = real(ranges.sat_failure_rate);
            c.shipping_size_slots = integer(ranges.shipping_size);
            c.dry_mass_kg = common.dry_mass_per_slot_kg * c.shipping_size_slots;
            c.mass_flow_rate_kg_s = common.mass_flow_per_slot_kg_s * c.shipping_size_slots;
            c.exhaust_velocity_km_s = common.exhaust_velocity_km_s;
            c.manufac_cost_musd = common.manufac_cost_per_slot_musd * c.shipping_size_slots;
            c.holding_cost_musd_per_sat_year = common.holding_cost_musd_per_sat_year;
            c.fuel_cost_musd_per_kg = common.fuel_cost_musd_per_kg;
            params.constellations.push_back(std::move(c));

            InPlanePolicy pol{integer(ranges.reorder_point), integer(ranges.batch_size)};
            design.inplane.push_back(pol);
            design.order_up_to.push_back(integer(ranges.order_up_to));
            if (design.shared.parking_altitude_km >=
                params.constellations.back().plane_altitude_km)
                domain_ok = false;
        }
        if (!domain_ok) {
            ++diag.rejected_domain;
            continue;
        }

        // Structural conditions 1-3.
        bool ok = true;
        for (int j = 0; j < m && ok; ++j)
            if (design.inplane[j].reorder_point > design.inplane[j].batch_size) {
                ++diag.rejected_cond1;
                ok = false;
            }
        if (!ok) continue;
        for (int j = 0; j < m && ok; ++j) {
            const long a_j = static_cast<long>(params.constellations[j].shipping_size_slots) *
                             design.inplane[j].batch_size;
            if (a_j + 1 > design.shared.slot_reorder_point) {
                ++diag.rejected_cond3;
                ok = false;
            }
        }
        if (!ok) continue;
        long oul_slots = 0;
        for (int j = 0; j < m; ++j)
            oul_slots += static_cast<long>(design.order_up_to[j]) *
                         params.constellations[j].shipping_size_slots *
                         design.inplane[j].batch_size;
        if (oul_slots < design.shared.slot_reorder_point) {
            ++diag.rejected_cond2;
            continue;
        }

        if (rho_req > 0.0) {
            const ServiceScreen screen = service_screen(params, design, eval_opts);
            if (!screen.maybe_feasible) {
                ++diag.rejected_cond4;  // attribution refined below when fully evaluated
                continue;
            }
        }

        try {
            const FeasibilityReport rep = check_feasibility(params, design, eval_opts);
            if (!rep.feasible) {
                if (!rep.condition[3]) ++diag.rejected_cond4;
                if (!rep.condition[4]) ++diag.rejected_cond5;
                if (rep.condition[3] && rep.condition[4]) ++diag.rejected_domain;
                continue;
            }
        } catch (const StateSpaceError&) {
            ++diag.rejected_state_cap;
            continue;
        }

        ScenarioInstance inst;
        inst.id = static_cast<int>(out.size());
        inst.params = std::move(params);
        inst.design = std::move(design);
        inst.sim_seed = seed ^ (0x1234'5678ULL + static_cast<std::uint64_t>(inst.id) * 7919ULL);
        out.push_back(std::move(inst));
        ++diag.accepted;
    }
    return out;
}

}  // namespace sparesat
