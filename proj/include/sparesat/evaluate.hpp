#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sparesat/cost.hpp"
#include "sparesat/inplane.hpp"
#include "sparesat/parking.hpp"
#include "sparesat/scenario.hpp"

namespace sparesat {

struct EvalOptions {
    int plane_quad_order = 64;
    int laguerre_order = 32;
    double tail_eps = 1e-12;
    std::int64_t state_cap = 5'000'000;
};

struct ConstellationEval {
    double lambda_plane = 0.0;    // satellites per time unit per plane
    double lambda_parking = 0.0;  // batches per time unit per parking orbit
    double n_plane = 0.0;         // orders per time unit per plane
    double delta_v_km_s = 0.0;
    double fuel_kg = 0.0;
    double transfer_time = 0.0;   // time units
    double relative_drift = 0.0;  // rad per time unit
    double es_plane = 0.0;
    double rho_plane = 0.0;
    double sl_plane = 0.0;
    double es_parking = 0.0;
    double eq_parking = 0.0;      // batches per joint order
    double rho_parking = 0.0;
    double sl_parking = 0.0;      // batches
    double mean_drop = 0.0;       // E[w_j], batches
    bool rho_parking_clamped = false;
};

struct EvaluationResult {
    std::vector<ConstellationEval> per;
    double lambda_parking_total = 0.0;
    double n_parking = 0.0;  // joint orders per time unit per parking orbit
    std::int64_t chain_states = 0;
    double stationary_residual = 0.0;
    CostBreakdown costs;
};

namespace detail {

inline void validate_domain(const ScenarioParams& params, const StrategyDesign& design,
                            bool allow_zero_failure_rate = false) {
    params.validate(allow_zero_failure_rate);
    design.validate(params.m());
    if (design.shared.slot_reorder_point > params.launcher.capacity_slots)
        throw std::invalid_argument("slot reorder point U exceeds launcher capacity A");
    for (const auto& c : params.constellations)
        if (design.shared.parking_altitude_km >= c.plane_altitude_km)
            throw std::invalid_argument("parking orbit must sit below every constellation plane");
}

}  // namespace detail

inline EvaluationResult evaluate(const ScenarioParams& params, const StrategyDesign& design,
                                 const EvalOptions& opts = {},
                                 bool allow_zero_failure_rate = false) {
    detail::validate_domain(params, design, allow_zero_failure_rate);
    const std::size_t m = params.m();
    EvaluationResult out;
    out.per.resize(m);

    // Parking echelon first: its fill rates feed the in-plane lead-time mixture.
    std::vector<int> batch_slots(m);
    std::vector<double> rates(m);
    for (std::size_t j = 0; j < m; ++j) {
        const auto& c = params.constellations[j];
        auto& pe = out.per[j];
        pe.lambda_plane = plane_demand_rate(c, params.n_t);
        pe.n_plane = order_frequency_plane(pe.lambda_plane, design.inplane[j].batch_size);
        pe.lambda_parking = parking_demand_rate(c, design.shared.n_parking,
                                                design.inplane[j].batch_size, params.n_t);
        batch_slots[j] = c.shipping_size_slots * design.inplane[j].batch_size;
        rates[j] = pe.lambda_parking;
        out.lambda_parking_total += pe.lambda_parking;
    }

    const MarkovModel chain(batch_slots, design.shared.slot_reorder_point,
                            params.launcher.capacity_slots, rates, opts.state_cap);
    const StationaryDistribution dist = stationary_distribution(chain);
    out.chain_states = chain.n_states();
    out.stationary_residual = dist.residual_inf;
    out.n_parking = order_frequency_parking(chain, dist);
    const std::vector<double> eq = expected_order_quantity(chain, dist);

    for (std::size_t j = 0; j < m; ++j) {
        auto& pe = out.per[j];
        pe.eq_parking = eq[j];
        pe.mean_drop = dist.mean_drop[j];
        pe.es_parking = expected_shortage_parking(
            design.order_up_to[j], dist.marginal[j], pe.lambda_parking,
            params.launcher.order_processing_time, params.launcher.mean_wait,
            opts.laguerre_order, opts.tail_eps);
        const FillRate fr = fill_rate_parking(pe.es_parking, pe.eq_parking);
        pe.rho_parking = fr.value;
        pe.rho_parking_clamped = fr.clamped;
        pe.sl_parking = mean_stock_parking(design.order_up_to[j], pe.mean_drop,
                                           pe.lambda_parking,
                                           params.launcher.order_processing_time,
                                           params.launcher.mean_wait, pe.es_parking);
    }

    // In-plane echelon.
    for (std::size_t j = 0; j < m; ++j) {
        const auto& c = params.constellations[j];
        auto& pe = out.per[j];
        const CircularOrbit parking{design.shared.parking_altitude_km, params.inclination_deg};
        const CircularOrbit plane{c.plane_altitude_km, params.inclination_deg};
        pe.relative_drift = relative_raan_drift(parking, plane, params.n_t, params.constants);
        pe.delta_v_km_s = transfer_delta_v(parking.radius_km(params.constants),
                                           plane.radius_km(params.constants), params.constants);
        pe.fuel_kg = fuel_mass(pe.delta_v_km_s, c.propulsion());
        pe.transfer_time = time_of_flight(pe.fuel_kg, c.propulsion(), params.n_t);

        const double rho_for_mix = std::max(pe.rho_parking, 1e-9);
        const LeadTimeMixture mix = leadtime_mixture(pe.relative_drift, pe.transfer_time,
                                                     design.shared.n_parking, rho_for_mix);
        pe.es_plane = expected_shortage_plane(design.inplane[j].reorder_point, pe.lambda_plane,
                                              mix, opts.plane_quad_order, opts.tail_eps);
        pe.rho_plane = fill_rate_plane(design.inplane[j].batch_size, pe.es_plane);
        pe.sl_plane = mean_stock_plane(design.inplane[j].reorder_point,
                                       design.inplane[j].batch_size, pe.lambda_plane, mix,
                                       opts.plane_quad_order);
    }

    // Costs.
    std::vector<double> hold(m), man(m), mfg(m);
    for (std::size_t j = 0; j < m; ++j) {
        const auto& c = params.constellations[j];
        const auto& pe = out.per[j];
        hold[j] = holding_cost(c, pe.sl_plane, pe.sl_parking, design.inplane[j].batch_size,
                               design.shared.n_parking);
        man[j] = maneuvering_cost(c, pe.fuel_kg, pe.n_plane, design.inplane[j].batch_size,
                                  params.n_t);
        mfg[j] = manufacturing_cost(c);
    }
    const double c_lau = launch_cost_annual(params.launcher, out.n_parking,
                                            design.shared.n_parking, params.n_t);
    out.costs = tessac(std::move(hold), std::move(man), std::move(mfg), c_lau,
                       design.launch_cost_fractions);
    return out;
}

// Feasibility verdict over conditions 1-5. Structural defects (domain violations that
// make the model undefined) are reported separately and suppress the service checks.
struct FeasibilityReport {
    bool feasible = false;
    bool structural_ok = true;
    std::array<bool, 5> condition = {true, true, true, true, true};
    bool service_evaluated = false;
    double service_violation = 0.0;  // total fill-rate shortfall over conditions 4-5
    std::vector<std::string> violations;
    std::optional<EvaluationResult> evaluation;

    std::string summary() const {
        if (feasible) return "feasible";
        std::ostringstream os;
        os << "infeasible:";
        for (const auto& v : violations) os << " [" << v << "]";
        return os.str();
    }
};

inline FeasibilityReport check_feasibility(const ScenarioParams& params,
                                           const StrategyDesign& design,
                                           const EvalOptions& opts = {}) {
    FeasibilityReport rep;
    auto flag = [&](int cond, const std::string& msg) {
        if (cond >= 1 && cond <= 5) rep.condition[cond - 1] = false;
        rep.violations.push_back(msg);
    };

    try {
        detail::validate_domain(params, design);
    } catch (const std::exception& e) {
        rep.structural_ok = false;
        rep.violations.emplace_back(std::string("domain: ") + e.what());
        return rep;
    }

    const std::size_t m = params.m();
    for (std::size_t j = 0; j < m; ++j) {
        const auto& pol = design.inplane[j];
        if (pol.reorder_point > pol.batch_size)
            flag(1, "condition 1: s > Q for constellation " + std::to_string(j + 1));
        const long a_j = static_cast<long>(params.constellations[j].shipping_size_slots) *
                         pol.batch_size;
        if (a_j + 1 > design.shared.slot_reorder_point)
            flag(3, "condition 3: v*Q + 1 > U for constellation " + std::to_string(j + 1));
    }
    long oul_slots = 0;
    for (std::size_t j = 0; j < m; ++j)
        oul_slots += static_cast<long>(design.order_up_to[j]) *
                     params.constellations[j].shipping_size_slots *
                     design.inplane[j].batch_size;
    if (oul_slots < design.shared.slot_reorder_point)
        flag(2, "condition 2: sum_j S_j v_j Q_j < U");

    if (rep.condition[0] && rep.condition[1] && rep.condition[2]) {
        const EvaluationResult ev = evaluate(params, design, opts);
        rep.service_evaluated = true;
        const double req = params.fill_rate_requirement;
        for (std::size_t j = 0; j < m; ++j) {
            if (ev.per[j].rho_parking < req) {
                flag(4, "condition 4: rho_parking " + std::to_string(ev.per[j].rho_parking) +
                            " < " + std::to_string(req) + " for constellation " +
                            std::to_string(j + 1));
                rep.service_violation += req - ev.per[j].rho_parking;
            }
            if (ev.per[j].rho_plane < req) {
                flag(5, "condition 5: rho_plane " + std::to_string(ev.per[j].rho_plane) + " < " +
                            std::to_string(req) + " for constellation " + std::to_string(j + 1));
                rep.service_violation += req - ev.per[j].rho_plane;
            }
        }
        rep.evaluation = ev;
    }

    rep.feasible = rep.structural_ok && rep.condition[0] && rep.condition[1] &&
                   rep.condition[2] && rep.condition[3] && rep.condition[4];
    return rep;
}

// Cheap necessary conditions for the service constraints; used to skip chain solves
// on candidates that cannot reach the required fill rates.
struct ServiceScreen {
    bool maybe_feasible = true;
    double violation = 0.0;
};

inline ServiceScreen service_screen(const ScenarioParams& params, const StrategyDesign& design,
                                    const EvalOptions& opts = {}) {
    ServiceScreen sc;
    const double req = params.fill_rate_requirement;
    for (std::size_t j = 0; j < params.m(); ++j) {
        const auto& c = params.constellations[j];
        // rho_plane upper bound: first parking orbit always available.
        const LeadTimeMixture mix =
            leadtime_mixture(c, design.shared, params.inclination_deg, params.n_t, 1.0,
                             params.constants);
        const double lam = plane_demand_rate(c, params.n_t);
        const double es = expected_shortage_plane(design.inplane[j].reorder_point, lam, mix,
                                                  opts.plane_quad_order, opts.tail_eps);
        const double rho_plane_ub = fill_rate_plane(design.inplane[j].batch_size, es);
        if (rho_plane_ub < req) {
            sc.maybe_feasible = false;
            sc.violation += req - rho_plane_ub;
        }
        // rho_parking upper bound: zero stock drop at order time, maximal order size.
        const double lam_pk =
            parking_demand_rate(c, design.shared.n_parking, design.inplane[j].batch_size,
                                params.n_t);
        const std::vector<double> point_mass{1.0};
        const double es_lb = expected_shortage_parking(
            design.order_up_to[j], point_mass, lam_pk, params.launcher.order_processing_time,
            params.launcher.mean_wait, opts.laguerre_order, opts.tail_eps);
        const double eq_ub = static_cast<double>(params.launcher.capacity_slots) /
                             (c.shipping_size_slots * design.inplane[j].batch_size);
        const double rho_parking_ub = 1.0 - es_lb / std::max(eq_ub, 1.0);
        if (rho_parking_ub < req) {
            sc.maybe_feasible = false;
            sc.violation += req - rho_parking_ub;
        }
    }
    return sc;
}

}  // namespace sparesat
