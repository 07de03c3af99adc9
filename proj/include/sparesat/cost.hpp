#pragma once

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "sparesat/scenario.hpp"

namespace sparesat {

struct CostBreakdown {
    std::vector<double> holding;         // C_hold,j  $M/yr
    std::vector<double> maneuvering;     // C_maneuv,j
    std::vector<double> manufacturing;   // C_manufac,j
    std::vector<double> fractions;       // y_j
    std::vector<double> tessac_per;      // TESSAC_j
    double launch_total = 0.0;           // C_lau
    double tessac_total = 0.0;           // TESSAC
};

inline double holding_cost(const ConstellationSpec& spec, double sl_plane, double sl_parking,
                           int batch_size, int n_parking) {
    return spec.holding_cost_musd_per_sat_year *
           (sl_plane * spec.n_planes + sl_parking * batch_size * n_parking);
}

inline double maneuvering_cost(const ConstellationSpec& spec, double fuel_kg, double n_plane,
                               int batch_size, int n_t) {
    return fuel_kg * spec.fuel_cost_musd_per_kg * n_plane * spec.n_planes * batch_size * n_t;
}

inline double manufacturing_cost(const ConstellationSpec& spec) {
    return spec.manufac_cost_musd * spec.sat_failure_rate_per_year * spec.n_planes *
           spec.sats_per_plane;
}

inline double launch_cost_annual(const LaunchServiceSpec& launcher, double n_parking_orders,
                                 int n_parking, int n_t) {
    return launcher.launch_cost_musd * n_parking_orders * n_parking * n_t;
}

// Assemble TESSAC_j = y_j C_lau + C_j and its y-invariant total.
inline CostBreakdown tessac(std::vector<double> holding, std::vector<double> maneuvering,
                            std::vector<double> manufacturing, double launch_total,
                            std::vector<double> fractions) {
    const std::size_t m = holding.size();
    if (maneuvering.size() != m || manufacturing.size() != m)
        throw std::invalid_argument("cost component size mismatch");
    if (fractions.empty()) fractions.assign(m, 1.0 / static_cast<double>(m));
    if (fractions.size() != m) throw std::invalid_argument("fraction vector size mismatch");
    double fsum = 0.0;
    for (double y : fractions) {
        if (y < 0.0) throw std::invalid_argument("launch cost fractions must be nonnegative");
        fsum += y;
    }
    if (std::abs(fsum - 1.0) > 1e-9)
        throw std::invalid_argument("launch cost fractions must sum to 1");

    CostBreakdown out;
    out.holding = std::move(holding);
    out.maneuvering = std::move(maneuvering);
    out.manufacturing = std::move(manufacturing);
    out.fractions = std::move(fractions);
    out.launch_total = launch_total;
    out.tessac_per.resize(m);
    for (std::size_t j = 0; j < m; ++j)
        out.tessac_per[j] = out.fractions[j] * launch_total + out.holding[j] +
                            out.maneuvering[j] + out.manufacturing[j];
    out.tessac_total = launch_total;
    for (std::size_t j = 0; j < m; ++j)
        out.tessac_total += out.holding[j] + out.maneuvering[j] + out.manufacturing[j];
    return out;
}

}  // namespace sparesat
