#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "sparesat/poisson.hpp"
#include "sparesat/quadrature.hpp"

using namespace sparesat;

TEST_CASE("poisson pmf and cdf against direct series") {
    for (double mu : {0.05, 1.0, 7.3, 55.0, 640.0}) {
        long double p = std::exp(-static_cast<long double>(mu));
        long double cdf = 0.0L;
        const int hi = static_cast<int>(mu + 12 * std::sqrt(mu) + 20);
        for (int d = 0; d <= hi; ++d) {
            if (d > 0) p *= mu / d;
            cdf += p;
            REQUIRE(poisson_pmf(d, mu) == Catch::Approx(static_cast<double>(p)).margin(1e-14));
            REQUIRE(poisson_cdf(d, mu) ==
                    Catch::Approx(static_cast<double>(cdf)).margin(1e-12));
        }
    }
}

TEST_CASE("poisson kernels survive means beyond exp underflow") {
    const double mu = 5.0e4;
    REQUIRE(poisson_cdf(static_cast<int>(mu), mu) == Catch::Approx(0.5).margin(0.01));
    REQUIRE(poisson_expected_excess(0, mu) == Catch::Approx(mu).epsilon(1e-12));
    REQUIRE(poisson_expected_excess(static_cast<int>(mu + 20 * std::sqrt(mu)), mu) < 1e-6);
}

TEST_CASE("expected excess identity with the CDF expansion") {
    // E[(D-s)^+] = mu (1 - F(s-1)) - s (1 - F(s))
    for (double mu : {0.3, 2.0, 19.5, 140.0})
        for (int s = 0; s <= static_cast<int>(mu + 8 * std::sqrt(mu) + 5); ++s) {
            const double via_cdf =
                mu * (1.0 - poisson_cdf(s - 1, mu)) - s * (1.0 - poisson_cdf(s, mu));
            REQUIRE(poisson_expected_excess(s, mu) ==
                    Catch::Approx(via_cdf).margin(1e-9).epsilon(1e-9));
        }
}

TEST_CASE("expected excess against the naive series oracle") {
    for (double mu : {0.5, 3.7, 42.0})
        for (int s : {0, 1, 2, 5, 11, 60}) {
            REQUIRE(poisson_expected_excess(s, mu) ==
                    Catch::Approx(oracle::naive_expected_excess(s, mu)).margin(1e-12).epsilon(
                        1e-10));
        }
    REQUIRE(poisson_expected_excess(-3, 2.0) == Catch::Approx(5.0));
}

TEST_CASE("expected excess is monotone nonincreasing in s") {
    const double mu = 6.1;
    double prev = poisson_expected_excess(0, mu);
    for (int s = 1; s < 40; ++s) {
        const double cur = poisson_expected_excess(s, mu);
        REQUIRE(cur <= prev + 1e-15);
        prev = cur;
    }
}

TEST_CASE("gauss-legendre integrates polynomials exactly") {
    for (int n : {4, 16, 64}) {
        const auto& rule = gauss_legendre(n);
        REQUIRE(static_cast<int>(rule.nodes.size()) == n);
        for (int k = 0; k <= 2 * n - 1; k += 3) {
            double acc = 0.0;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i)
                acc += rule.weights[i] * std::pow(rule.nodes[i], k);
            const double exact = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
            REQUIRE(acc == Catch::Approx(exact).margin(1e-12));
        }
    }
    const double val = integrate_interval([](double x) { return std::exp(x); }, 0.0, 1.0, 24);
    REQUIRE(val == Catch::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
}

TEST_CASE("gauss-laguerre reproduces factorial moments") {
    for (int n : {8, 32, 64}) {
        const auto& rule = gauss_laguerre(n);
        double total = 0.0;
        for (double w : rule.weights) total += w;
        REQUIRE(total == Catch::Approx(1.0).epsilon(1e-12));
        double moment1 = 0.0, moment3 = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            moment1 += rule.weights[i] * rule.nodes[i];
            moment3 += rule.weights[i] * std::pow(rule.nodes[i], 3);
        }
        REQUIRE(moment1 == Catch::Approx(1.0).epsilon(1e-11));
        REQUIRE(moment3 == Catch::Approx(6.0).epsilon(1e-10));
    }
}

TEST_CASE("gauss-laguerre handles the shifted-exponential mean identity") {
    // E[tau] for tau = t + mu * Exp(1) is exactly t + mu.
    const auto& rule = gauss_laguerre(32);
    const double t = 32.0, mu = 20.0;
    double mean = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        mean += rule.weights[i] * (t + mu * rule.nodes[i]);
    REQUIRE(mean == Catch::Approx(t + mu).epsilon(1e-12));
}
