#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sparesat {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Julian year; all "per year" rates in this library refer to it.
inline constexpr double kSecondsPerYear = 365.25 * 86400.0;

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

// Length of one discretized time unit in seconds (N_t units per year).
inline double seconds_per_time_unit(int n_t) {
    if (n_t < 1) throw std::invalid_argument("n_t must be >= 1");
    return kSecondsPerYear / static_cast<double>(n_t);
}

struct PhysicalConstants {
    double mu_earth = 398600.4418;  // km^3/s^2
    double r_earth = 6378.137;      // km
    double j2 = 1.08263e-3;

    void validate() const {
        if (!(mu_earth > 0.0)) throw std::invalid_argument("mu_earth must be positive");
        if (!(r_earth > 0.0)) throw std::invalid_argument("r_earth must be positive");
        if (!(j2 > 0.0)) throw std::invalid_argument("j2 must be positive");
    }
};

}  // namespace sparesat
