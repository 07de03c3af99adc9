#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "sparesat/inplane.hpp"

using namespace sparesat;

namespace {

ConstellationSpec reference_constellation() {
    ConstellationSpec c;
    c.name = "ref";
    c.plane_altitude_km = 1200.0;
    c.n_planes = 30;
    c.sats_per_plane = 30;
    c.sat_failure_rate_per_year = 0.2;
    c.shipping_size_slots = 1;
    c.dry_mass_kg = 150.0;
    c.mass_flow_rate_kg_s = 1.3e-3;
    c.exhaust_velocity_km_s = 11.77;
    c.manufac_cost_musd = 0.5;
    c.holding_cost_musd_per_sat_year = 0.5;
    c.fuel_cost_musd_per_kg = 0.01;
    return c;
}

LeadTimeMixture point_mass(double tau) {
    LeadTimeMixture mix;
    mix.intervals.push_back({tau, tau, 1.0});
    return mix;
}

// Dense tau-grid + naive Poisson series, independent of the quadrature path.
double grid_expected_shortage(int s, double lambda, const LeadTimeMixture& mix, int pts) {
    double acc = 0.0;
    for (const auto& iv : mix.intervals) {
        if (iv.weight == 0.0) continue;
        if (iv.upper <= iv.lower) {
            acc += iv.weight * oracle::naive_expected_excess(s, lambda * iv.lower);
            continue;
        }
        const double h = (iv.upper - iv.lower) / pts;
        double inner = 0.0;
        for (int i = 0; i <= pts; ++i) {
            const double tau = iv.lower + i * h;
            const double w = (i == 0 || i == pts) ? 0.5 : 1.0;
            inner += w * oracle::naive_expected_excess(s, lambda * tau);
        }
        acc += iv.weight * inner * h / (iv.upper - iv.lower);
    }
    return acc;
}

}  // namespace

TEST_CASE("plane demand rate") {
    auto c = reference_constellation();
    REQUIRE(plane_demand_rate(c, 52) == Catch::Approx(6.0 / 52.0).epsilon(1e-14));
    c.sats_per_plane = 20;
    c.sat_failure_rate_per_year = 0.1;
    REQUIRE(plane_demand_rate(c, 52) == Catch::Approx(2.0 / 52.0).epsilon(1e-14));
    c.sats_per_plane = 40;
    REQUIRE(plane_demand_rate(c, 52) == Catch::Approx(4.0 / 52.0).epsilon(1e-14));
}

TEST_CASE("mixture weights: always-stocked first orbit") {
    const auto mix = leadtime_mixture(-0.1, 0.5, 4, 1.0);
    REQUIRE(mix.intervals[0].weight == Catch::Approx(1.0));
    for (int k = 1; k < 4; ++k) REQUIRE(mix.intervals[k].weight == 0.0);
    REQUIRE(mix.intervals[0].lower == Catch::Approx(0.5));
}

TEST_CASE("mixture weights: normalized geometric availability") {
    const auto mix = leadtime_mixture(-0.1, 0.0, 3, 0.98);
    const double z = 0.98 + 0.0196 + 0.000392;
    REQUIRE(mix.intervals[0].weight == Catch::Approx(0.98 / z).epsilon(1e-12));
    REQUIRE(mix.intervals[1].weight == Catch::Approx(0.0196 / z).epsilon(1e-12));
    REQUIRE(mix.intervals[2].weight == Catch::Approx(0.000392 / z).epsilon(1e-12));
    double total = 0.0;
    for (const auto& iv : mix.intervals) total += iv.weight;
    REQUIRE(total == Catch::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("mixture weights sum to one for any valid inputs") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const double rho = 0.01 + 0.99 * ((rng() >> 11) * 0x1.0p-53);
        const int n = 1 + static_cast<int>(rng() % 20);
        const auto mix = leadtime_mixture(-0.05, 0.3, n, rho);
        double total = 0.0;
        double prev_upper = -1.0;
        for (const auto& iv : mix.intervals) {
            total += iv.weight;
            REQUIRE(iv.lower >= prev_upper - 1e-12);  // ordered, disjoint
            prev_upper = iv.upper;
        }
        REQUIRE(total == Catch::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("single parking orbit gives weight one regardless of rho") {
    for (double rho : {0.2, 0.5, 0.9}) {
        const auto mix = leadtime_mixture(-0.1, 0.0, 1, rho);
        REQUIRE(mix.intervals.size() == 1);
        REQUIRE(mix.intervals[0].weight == Catch::Approx(1.0));
    }
}

TEST_CASE("mixture rejects degenerate inputs") {
    REQUIRE_THROWS_AS(leadtime_mixture(0.0, 0.5, 3, 0.9), std::invalid_argument);
    REQUIRE_THROWS_AS(leadtime_mixture(-0.1, 0.5, 3, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(leadtime_mixture(-0.1, 0.5, 0, 0.9), std::invalid_argument);
}

TEST_CASE("expected shortage at s = 0 with degenerate lead time") {
    const double lambda = 6.0 / 52.0;
    const double tau = 4.0;
    REQUIRE(expected_shortage_plane(0, lambda, point_mass(tau)) ==
            Catch::Approx(lambda * tau).epsilon(1e-12));
}

TEST_CASE("expected shortage tail vanishes for large s") {
    const double lambda = 0.2;
    const auto mix = leadtime_mixture(-0.1, 1.0, 3, 0.9);
    const double mu_max = lambda * mix.max_lead_time();
    const int s = static_cast<int>(mu_max + 10.0 * std::sqrt(mu_max)) + 10;
    REQUIRE(expected_shortage_plane(s, lambda, mix) <= 1e-6);
}

TEST_CASE("expected shortage matches the dense-grid oracle") {
    const double lambda = 0.13;
    const auto mix = leadtime_mixture(-0.085, 0.7, 4, 0.93);
    for (int s : {1, 2, 4, 7}) {
        const double fast = expected_shortage_plane(s, lambda, mix);
        const double slow = grid_expected_shortage(s, lambda, mix, 640);
        REQUIRE(fast == Catch::Approx(slow).epsilon(2e-5));
    }
}

TEST_CASE("expected shortage is nonincreasing in s") {
    const double lambda = 0.19;
    const auto mix = leadtime_mixture(-0.06, 0.5, 5, 0.9);
    double prev = expected_shortage_plane(0, lambda, mix);
    for (int s = 1; s <= 12; ++s) {
        const double cur = expected_shortage_plane(s, lambda, mix);
        REQUIRE(cur <= prev + 1e-12);
        prev = cur;
    }
}

TEST_CASE("fill rate arithmetic and bug guard") {
    REQUIRE(fill_rate_plane(5, 0.0) == 1.0);
    REQUIRE(fill_rate_plane(5, 5.0) == 0.0);
    REQUIRE(fill_rate_plane(5, 0.1) == Catch::Approx(0.98));
    REQUIRE(fill_rate_plane(5, 5.5) == 0.0);  // hopeless policy clamps, not throws
    REQUIRE_THROWS_AS(fill_rate_plane(5, -0.1), std::logic_error);
}

TEST_CASE("mean stock closed form on a degenerate lead time") {
    // s=3, Q=5, lambda*tau = 0.5 -> 3 - 0.5 + 2.5 + 0.5 = 5.5
    const double lambda = 0.125;
    REQUIRE(mean_stock_plane(3, 5, lambda, point_mass(4.0)) == Catch::Approx(5.5).epsilon(1e-12));
}

TEST_CASE("mean stock at zero demand is policy-only") {
    const auto mix = leadtime_mixture(-0.07, 0.2, 3, 0.9);
    REQUIRE(mean_stock_plane(4, 6, 0.0, mix) == Catch::Approx(4.0 + 3.0 + 0.5).epsilon(1e-12));
}

TEST_CASE("mean stock equals the per-interval closed form") {
    const double lambda = 0.21;
    const auto mix = leadtime_mixture(-0.045, 0.9, 6, 0.88);
    double closed = 0.0;
    for (const auto& iv : mix.intervals)
        closed += iv.weight * (4.0 - lambda * 0.5 * (iv.lower + iv.upper) + 3.5 + 0.5);
    REQUIRE(mean_stock_plane(4, 7, lambda, mix) == Catch::Approx(closed).epsilon(1e-9));
}

TEST_CASE("mean stock shifts by exactly one when s does") {
    const double lambda = 0.21;
    const auto mix = leadtime_mixture(-0.045, 0.9, 4, 0.9);
    const double base = mean_stock_plane(4, 7, lambda, mix);
    REQUIRE(mean_stock_plane(5, 7, lambda, mix) == Catch::Approx(base + 1.0).epsilon(1e-12));
}

TEST_CASE("order frequency") {
    REQUIRE(order_frequency_plane(6.0 / 52.0, 5) == Catch::Approx(0.0230769230769).epsilon(1e-10));
    REQUIRE(order_frequency_plane(0.3, 1) == Catch::Approx(0.3));
    REQUIRE(order_frequency_plane(0.3, 2) == Catch::Approx(2.0 * order_frequency_plane(0.3, 4)));
}

TEST_CASE("parking demand rate composition") {
    auto c = reference_constellation();
    // N_plane=30, lambda_plane=6/52, N_parking=3, Q=5 -> 0.230769...
    REQUIRE(parking_demand_rate(c, 3, 5, 52) == Catch::Approx(0.2307692307692).epsilon(1e-10));
    REQUIRE(parking_demand_rate(c, 1, 5, 52) ==
            Catch::Approx(30.0 * (6.0 / 52.0) / 5.0).epsilon(1e-12));
}
