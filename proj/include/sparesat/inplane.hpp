#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "sparesat/orbital.hpp"
#include "sparesat/poisson.hpp"
#include "sparesat/quadrature.hpp"
#include "sparesat/scenario.hpp"

namespace sparesat {

// In-plane failures per orbital plane per time unit.
inline double plane_demand_rate(const ConstellationSpec& spec, int n_t) {
    if (n_t < 1) throw std::invalid_argument("n_t must be >= 1");
    return spec.sats_per_plane * spec.sat_failure_rate_per_year / static_cast<double>(n_t);
}

// Piecewise-uniform lead-time density for resupply from the k-th closest parking
// orbit. Weight k follows the normalized geometric availability law; zero-width
// intervals act as point masses.
struct LeadTimeInterval {
    double lower = 0.0;
    double upper = 0.0;
    double weight = 0.0;
};

struct LeadTimeMixture {
    std::vector<LeadTimeInterval> intervals;

    double max_lead_time() const { return intervals.empty() ? 0.0 : intervals.back().upper; }

    double mean() const {
        double acc = 0.0;
        for (const auto& iv : intervals) acc += iv.weight * 0.5 * (iv.lower + iv.upper);
        return acc;
    }
};

inline LeadTimeMixture leadtime_mixture(double relative_drift_rad_per_unit,
                                        double transfer_time_units, int n_parking,
                                        double rho_parking) {
    if (n_parking < 1) throw std::invalid_argument("n_parking must be >= 1");
    if (relative_drift_rad_per_unit == 0.0)
        throw std::invalid_argument(
            "relative RAAN drift is zero; parking orbits never realign with the plane");
    if (!(rho_parking > 0.0) || rho_parking > 1.0)
        throw std::invalid_argument("rho_parking must lie in (0, 1]");
    if (transfer_time_units < 0.0)
        throw std::invalid_argument("transfer time must be nonnegative");

    const double width = kTwoPi / (n_parking * std::abs(relative_drift_rad_per_unit));
    LeadTimeMixture mix;
    mix.intervals.resize(n_parking);
    double total = 0.0;
    for (int k = 0; k < n_parking; ++k) {
        const double w = std::pow(1.0 - rho_parking, k) * rho_parking;
        mix.intervals[k] = {k * width + transfer_time_units, (k + 1) * width + transfer_time_units,
                            w};
        total += w;
    }
    for (auto& iv : mix.intervals) iv.weight /= total;
    return mix;
}

// Convenience overload wiring the orbital chain: drift, transfer delta-v, fuel, TOF.
inline LeadTimeMixture leadtime_mixture(const ConstellationSpec& spec, const SharedDesign& shared,
                                        double inclination_deg, int n_t, double rho_parking,
                                        const PhysicalConstants& c = {}) {
    const CircularOrbit parking{shared.parking_altitude_km, inclination_deg};
    const CircularOrbit plane{spec.plane_altitude_km, inclination_deg};
    const double drift = relative_raan_drift(parking, plane, n_t, c);
    const double dv = transfer_delta_v(parking.radius_km(c), plane.radius_km(c), c);
    const double fuel = fuel_mass(dv, spec.propulsion());
    const double t_trans = time_of_flight(fuel, spec.propulsion(), n_t);
    return leadtime_mixture(drift, t_trans, shared.n_parking, rho_parking);
}

namespace detail {

template <typename F>
double mixture_expectation(F&& f, const LeadTimeMixture& mix, int quad_order) {
    double acc = 0.0;
    for (const auto& iv : mix.intervals) {
        if (iv.weight == 0.0) continue;
        const double len = iv.upper - iv.lower;
        if (len <= 0.0) {
            acc += iv.weight * f(iv.lower);  // point mass
        } else {
            acc += iv.weight * integrate_interval(f, iv.lower, iv.upper, quad_order) / len;
        }
    }
    return acc;
}

}  // namespace detail

// ES_plane: expected unmet demand per (s, Q) cycle under the lead-time mixture.
inline double expected_shortage_plane(int reorder_point, double lambda_plane,
                                      const LeadTimeMixture& mix, int quad_order = 64,
                                      double eps = 1e-12) {
    if (reorder_point < 0) throw std::invalid_argument("reorder point must be nonnegative");
    if (lambda_plane < 0.0) throw std::invalid_argument("demand rate must be nonnegative");
    return detail::mixture_expectation(
        [&](double tau) { return poisson_expected_excess(reorder_point, lambda_plane * tau, eps); },
        mix, quad_order);
}

// Shortages above Q (possible under hopeless policies) clamp to a zero fill rate;
// a negative shortage cannot come out of the expectation and is a real bug.
inline double fill_rate_plane(int batch_size, double expected_shortage) {
    if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
    if (expected_shortage < 0.0)
        throw std::logic_error("negative expected shortage; upstream evaluation bug");
    return std::clamp(1.0 - expected_shortage / batch_size, 0.0, 1.0);
}

inline double mean_stock_plane(int reorder_point, int batch_size, double lambda_plane,
                               const LeadTimeMixture& mix, int quad_order = 64) {
    return detail::mixture_expectation(
        [&](double tau) {
            return reorder_point - lambda_plane * tau + 0.5 * batch_size + 0.5;
        },
        mix, quad_order);
}

inline double order_frequency_plane(double lambda_plane, int batch_size) {
    if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
    return lambda_plane / batch_size;
}

// Batch demand rate seen by one parking orbit from constellation j.
inline double parking_demand_rate(const ConstellationSpec& spec, int n_parking, int batch_size,
                                  int n_t) {
    if (n_parking < 1) throw std::invalid_argument("n_parking must be >= 1");
    if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
    return spec.n_planes * plane_demand_rate(spec, n_t) /
           (static_cast<double>(n_parking) * batch_size);
}

}  // namespace sparesat
